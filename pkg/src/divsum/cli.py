"""Command-line front end: ``divsum {sum,table,verify,gf}``.

The result goes to stdout and diagnostics go to stderr. Exit codes:
0 ok, 2 malformed input, 3 inadmissible input, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .exact import ComplexQ, format_scalar, parse_scalar
from .genfun import GFError, MalformedGFError, RationalGF, classify_poles, laurent_at, parse_gf, taylor_coeffs
from .quadrature import ConvergenceError
from .roots import RootFindingError
from .special import DegenerateParameterError, apostol_table, bernoulli_table, euler0_table
from .summation import (
    InadmissibleError,
    alternating_sum,
    apostol_sum,
    homothetic_check,
    natural_sum,
    regularized_sum,
)

EXIT_OK, EXIT_USAGE, EXIT_INADMISSIBLE, EXIT_TOLERANCE = 0, 2, 3, 4
DEFAULT_MAX_K = 200
SIG_DIGITS = 17
FOURIER_TOL_DISC, FOURIER_TOL_CIRCLE = 1e-6, 1e-4
PF_STABLE_TOL, PF_ALPHA_REL_TOL = 1e-6, 0.1

# options whose values may legitimately start with "-"
_SCALAR_OPTIONS = ("--eps", "--num", "--den", "--den-roots", "--center")


class UsageError(ValueError):
    pass


class Inadmissible(ValueError):
    pass


class ToleranceFailure(RuntimeError):
    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


def load_schema(command: str) -> dict:
    """JSON Schema for the ``--output json`` payload of ``command``."""
    return json.loads(resources.files("divsum").joinpath(f"schemas/{command}.json").read_text())


# formatting ---------------------------------------------------------------


def _dec(q: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = SIG_DIGITS
        return format(Decimal(q.numerator) / Decimal(q.denominator), f".{SIG_DIGITS}g")


def decimal_text(value) -> str:
    """17 significant digits; exact rationals are rounded once, from the fraction."""
    if isinstance(value, ComplexQ):
        if not value.im:
            return _dec(value.re)
        im = _dec(value.im) + "i"
        if not value.re:
            return im
        return _dec(value.re) + ("" if value.im < 0 else "+") + im
    z = complex(value)
    if z.imag == 0:
        return f"{z.real:.{SIG_DIGITS}g}"
    return f"{z.real:.{SIG_DIGITS}g}{z.imag:+.{SIG_DIGITS}g}i"


def _float_text(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def _note(text: str) -> None:
    print(text, file=sys.stderr)


# argument helpers ----------------------------------------------------------


def _scalar(text: str) -> ComplexQ:
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def _gf(args) -> RationalGF:
    try:
        return parse_gf(args.num, args.den, args.den_roots)
    except MalformedGFError as exc:
        raise UsageError(str(exc)) from exc
    except GFError as exc:
        raise Inadmissible(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_k(args) -> int:
    k = args.k
    if k < 1:
        raise UsageError("-k must be >= 1")
    if k > args.max_k:
        raise UsageError(f"-k {k} exceeds the limit {args.max_k}; raise it with --max-k")
    return k


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--eps -1/2`` into ``--eps=-1/2`` so argparse does not read a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _SCALAR_OPTIONS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


# sum ------------------------------------------------------------------------


def cmd_sum(args) -> int:
    k = _check_k(args)
    family = args.family
    try:
        if family == "alternating":
            result = alternating_sum(k)
        elif family == "natural":
            result = natural_sum(k)
        elif family == "apostol":
            if args.eps is None:
                raise UsageError("sum apostol needs --eps")
            eps = _scalar(args.eps)
            try:
                result = apostol_sum(k, eps)
            except DegenerateParameterError:
                raise
            except ValueError as exc:
                # |eps| > 1 puts the pole 1/eps inside the unit disc
                raise Inadmissible(str(exc)) from exc
        else:
            result = regularized_sum(_gf(args), k, allow_multi_pole=args.allow_multi_pole)
    except InadmissibleError as exc:
        raise Inadmissible("; ".join(exc.violations)) from exc
    except DegenerateParameterError as exc:
        raise Inadmissible(str(exc)) from exc

    if args.output == "json":
        _emit_json({"command": "sum", "family": family, **result.to_json()})
    elif args.output == "decimal":
        print(f"{decimal_text(result.value)} exact={'true' if result.exact else 'false'}")
    else:
        print(format_scalar(result.value))
    if args.output != "json":
        _note(f"method: {result.method}")
        for note in result.notes:
            _note(note)
    return EXIT_OK


# table ----------------------------------------------------------------------


def cmd_table(args) -> int:
    if args.n < 0:
        raise UsageError("-n must be >= 0")
    if args.n > args.max_k:
        raise UsageError(f"-n {args.n} exceeds the limit {args.max_k}; raise it with --max-k")
    if args.kind == "bernoulli":
        table = bernoulli_table(args.n)
    elif args.kind == "euler0":
        table = euler0_table(args.n)
    else:
        if args.eps is None:
            raise UsageError("table apostol needs --eps")
        eps = _scalar(args.eps)
        try:
            table = apostol_table(args.n, eps)
        except DegenerateParameterError as exc:
            raise Inadmissible(str(exc)) from exc
    if args.output == "json":
        _emit_json({"command": "table", "n": args.n, **table.to_json()})
        return EXIT_OK
    for j, v in enumerate(table.values):
        text = decimal_text(ComplexQ.of(v)) if args.output == "decimal" else format_scalar(v)
        print(f"{j} {text}")
    return EXIT_OK


# verify ---------------------------------------------------------------------


def _verify_homothetic(args) -> dict:
    k = _check_k(args)
    chk = homothetic_check(k)
    return {
        "check": "homothetic",
        "pass": chk.equal,
        "details": {"k": k, "lhs": format_scalar(chk.lhs), "rhs": format_scalar(chk.rhs)},
        "lines": [f"lhs {format_scalar(chk.lhs)}", f"rhs {format_scalar(chk.rhs)}"],
        "trace": [],
    }


def _verify_fourier(args) -> dict:
    from .distribution import fourier_coeff_quadrature, fourier_coeff_residue

    f = _gf(args)
    n = args.n
    if n < 1:
        raise UsageError("-n must be >= 1")
    report = _admissible_report(f)
    tol = args.tol if args.tol is not None else (FOURIER_TOL_CIRCLE if report.on_circle else FOURIER_TOL_DISC)
    exact = fourier_coeff_residue(f, n)
    try:
        est = fourier_coeff_quadrature(f, n)
    except ConvergenceError as exc:
        raise ToleranceFailure(str(exc), _failure("fourier", exc.trace, {"n": n, "exact": format_scalar(exact)}))
    diff = abs(est.value - complex(exact))
    return {
        "check": "fourier",
        "pass": diff <= tol,
        "details": {"n": n, "exact": format_scalar(exact), "quadrature": _complex_pair(est.value),
                    "error_estimate": est.error, "difference": diff, "tolerance": tol},
        "lines": [f"exact {format_scalar(exact)}",
                  f"quadrature {decimal_text(est.value)} +- {est.error:.1e}",
                  f"difference {diff:.3e} (tolerance {tol:.0e})"],
        "trace": est.trace,
    }


def _verify_mollifier(args) -> dict:
    from .distribution import approx_identity_limit

    f = _gf(args)
    k = _check_k(args)
    _admissible_report(f)
    tol = args.tol if args.tol is not None else (1e-4 if k == 1 else 1e-3)
    try:
        est = approx_identity_limit(f, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    diff = abs(est.value - est.target)
    return {
        "check": "mollifier",
        "pass": diff <= tol,
        "details": {"k": k, "limit": _complex_pair(est.value), "target": _complex_pair(est.target),
                    "error_estimate": est.error, "difference": diff, "tolerance": tol},
        "lines": [f"limit {decimal_text(est.value)} +- {est.error:.1e}",
                  f"target {decimal_text(est.target)}",
                  f"difference {diff:.3e} (tolerance {tol:.0e})"],
        "trace": est.trace,
    }


def _verify_pf(args) -> dict:
    from .distribution import Mollifier, pf_pairing

    f = _gf(args)
    report = _admissible_report(f)
    if args.center is not None:
        center = float(Fraction(args.center))
    elif report.on_circle:
        center = laurent_at(f, report.on_circle[0].root).t0
    else:
        center = 0.0
    if args.scale <= 1 / math.pi:
        raise UsageError("--scale must exceed 1/pi so the support fits inside one period")
    phi = Mollifier(args.scale, center)
    try:
        with_ct = pf_pairing(f, phi)
    except ConvergenceError as exc:
        raise ToleranceFailure(str(exc), _failure("pf", exc.trace, {"center": center}))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    details = {"center": center, "scale": args.scale, "value": _complex_pair(with_ct.value),
               "error_estimate": with_ct.error}
    lines = [f"pf {decimal_text(with_ct.value)} +- {with_ct.error:.1e}"]
    ok = with_ct.error < PF_STABLE_TOL
    trace = with_ct.trace
    if report.on_circle:
        raw = pf_pairing(f, phi, counterterm=False)
        fit = raw.divergence
        details["divergence"] = {"alpha": _complex_pair(fit.alpha),
                                 "expected_abs_alpha": fit.expected_abs_alpha,
                                 "relative_mismatch": fit.relative_mismatch}
        lines.append(f"without counterterm: |alpha| {_float_text(abs(fit.alpha))}, "
                     f"expected {_float_text(fit.expected_abs_alpha)}, "
                     f"mismatch {fit.relative_mismatch:.2%}")
        if fit.expected_abs_alpha > 0:
            ok = ok and fit.relative_mismatch <= PF_ALPHA_REL_TOL
        trace = {"counterterm": with_ct.trace, "no_counterterm": raw.trace}
    else:
        lines.append("no unit-circle pole: plain integral, no counterterm")
    return {"check": "pf", "pass": ok, "details": details, "lines": lines, "trace": trace}


def _admissible_report(f: RationalGF):
    report = classify_poles(f)
    violations = report.violations()
    if violations:
        raise Inadmissible("; ".join(violations))
    return report


def _failure(check: str, trace, details: dict) -> dict:
    return {"command": "verify", "check": check, "pass": False, "details": details, "trace": trace}


_VERIFIERS = {
    "homothetic": _verify_homothetic,
    "fourier": _verify_fourier,
    "mollifier": _verify_mollifier,
    "pf": _verify_pf,
}


def cmd_verify(args) -> int:
    if args.check != "homothetic" and (args.num is None or args.den is None):
        raise UsageError(f"verify {args.check} needs --num and --den")
    res = _VERIFIERS[args.check](args)
    lines = res.pop("lines")
    payload = {"command": "verify", **res}
    if args.output == "json":
        _emit_json(payload)
    else:
        for line in lines:
            print(line)
        print("PASS" if res["pass"] else "FAIL")
    if not res["pass"]:
        _note(json.dumps({"trace": res["trace"]}))
        return EXIT_TOLERANCE
    return EXIT_OK


# gf -------------------------------------------------------------------------


def cmd_gf(args) -> int:
    f = _gf(args)
    if args.n < 0:
        raise UsageError("-n must be >= 0")
    coeffs = taylor_coeffs(f, args.n)
    try:
        report = classify_poles(f)
    except RootFindingError as exc:
        raise UsageError(str(exc)) from exc
    violations = report.violations(args.allow_multi_pole)
    laurent = []
    for p in report.on_circle:
        if p.multiplicity == 1 and p.root != ComplexQ(1):
            lau = laurent_at(f, p.root)
            laurent.append({
                "z0": _root_json(lau.z0, lau.exact),
                "t0": lau.t0,
                "c_minus1": _root_json(lau.c_minus1, lau.exact),
                "d_minus1": _root_json(lau.d_minus1, lau.exact),
                "exact": lau.exact,
            })
    payload = {
        "command": "gf",
        "gf": f.to_json(),
        "coefficients": [format_scalar(c) for c in coeffs],
        "poles": report.to_json(),
        "admissible": not violations,
        "violations": violations,
        "laurent": laurent,
    }
    if args.output == "json":
        _emit_json(payload)
        return EXIT_OK
    show = decimal_text if args.output == "decimal" else format_scalar
    print("coefficients " + ", ".join(show(c) for c in coeffs))
    for p in payload["poles"]:
        root = p["root"] if isinstance(p["root"], str) else decimal_text(complex(*p["root"]))
        print(f"pole {root} multiplicity {p['multiplicity']} {p['location']}"
              + ("" if p["exact"] else " (numeric)"))
    for lau in laurent:
        print(f"laurent z0 {_root_text(lau['z0'])} t0 {_float_text(lau['t0'])} "
              f"c_minus1 {_root_text(lau['c_minus1'])} d_minus1 {_root_text(lau['d_minus1'])}")
    print("admissible" if not violations else "inadmissible: " + "; ".join(violations))
    return EXIT_OK


def _root_json(value, exact: bool):
    return format_scalar(value) if exact else _complex_pair(complex(value))


def _root_text(value) -> str:
    return value if isinstance(value, str) else decimal_text(complex(*value))


# parser -----------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", choices=("exact", "decimal", "json"), default="exact",
                   help="exact rationals (default), 17-digit decimals, or JSON")
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K,
                   help=f"soft cap on -k / -n (default {DEFAULT_MAX_K})")


def _gf_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--num", required=required, help='numerator coefficients, ascending: "0,1"')
    p.add_argument("--den", required=required, help='denominator coefficients, ascending: "1,1"')
    p.add_argument("--den-roots", help='optional exact roots of den: "-1^1;2^2"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divsum",
        description="Exact regularized values of divergent series sum n^k a_n.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", help="regularized sum of n^k a_n")
    p.add_argument("family", choices=("alternating", "natural", "apostol", "gf"))
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--eps", help="Apostol parameter, e.g. -1, 1/2, 3/5+4/5i")
    _gf_args(p, required=False)
    p.add_argument("--allow-multi-pole", action="store_true",
                   help="experimental: accept several simple unit-circle poles")
    _common(p)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("table", help="Bernoulli, E_k(0) or Apostol-Bernoulli numbers")
    p.add_argument("kind", choices=("bernoulli", "euler0", "apostol"))
    p.add_argument("-n", type=int, required=True, help="last index")
    p.add_argument("--eps")
    _common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="numerical checks of the summation method")
    p.add_argument("check", choices=tuple(_VERIFIERS))
    p.add_argument("-k", type=int, default=1)
    p.add_argument("-n", type=int, default=1)
    _gf_args(p, required=False)
    p.add_argument("--center", help="pf: test-function center (default: the pole angle t0)")
    p.add_argument("--scale", type=float, default=1.0, help="pf: mollifier scale m (support 2/m)")
    p.add_argument("--tol", type=float, help="override the default tolerance")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gf", help="describe a rational generating function")
    _gf_args(p, required=True)
    p.add_argument("-n", type=int, default=8, help="number of Taylor coefficients")
    p.add_argument("--allow-multi-pole", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_gf)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except Inadmissible as exc:
        _note(f"inadmissible: {exc}")
        return EXIT_INADMISSIBLE
    except ToleranceFailure as exc:
        if args.output == "json":
            _emit_json(exc.payload)
        _note(f"FAIL: {exc}")
        _note(json.dumps({"trace": exc.payload.get("trace", [])}))
        return EXIT_TOLERANCE
    except ValueError as exc:
        # ValueErrors not caught above come from the parameter checks in the library
        _note(f"error: {exc}")
        return EXIT_USAGE
