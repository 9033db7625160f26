"""Rational generating functions f(z) = P(z)/Q(z) with f(0) = 0.

Covers Taylor coefficients, pole classification against the unit circle,
simple-pole Laurent data, exact values of f', and the jet of f(e^{it})
at t = 0 that the summation engine differentiates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .exact import (
    ONE,
    ZERO,
    ComplexQ,
    Poly,
    ScalarLike,
    format_scalar,
    parse_scalar,
    poly_gcd,
    root_multiplicity,
    squarefree_decomposition,
)
from .jets import Jet, JetError, jet_div_formal, jet_exp_circle, jet_of_poly, poly_on_jet
from .roots import find_roots

CIRCLE_TOL = 1e-10
SNAP_MAX_DENOMINATOR = 10**6

Root = Union[ComplexQ, complex]


class GFError(ValueError):
    pass


class MalformedGFError(GFError):
    """Input that does not describe a rational function (as opposed to an inadmissible one)."""


class PoleAtOriginError(GFError):
    pass


class PoleError(GFError, ZeroDivisionError):
    pass


class HigherOrderPoleError(GFError):
    pass


@dataclass(frozen=True)
class RationalGF:
    """f = num/den as exact polynomials, with f(0) = 0 enforced.

    ``den_roots_hint`` lists ``(root, multiplicity)`` pairs; when given it
    must reproduce ``den`` exactly up to the leading coefficient, and pole
    classification then needs no floating point.
    """

    num: Poly
    den: Poly
    den_roots_hint: tuple[tuple[ComplexQ, int], ...] | None = None
    _reduced: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        num = self.num if isinstance(self.num, Poly) else Poly(self.num)
        den = self.den if isinstance(self.den, Poly) else Poly(self.den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if den.is_zero():
            raise MalformedGFError("denominator is the zero polynomial")
        hint = self.den_roots_hint
        if hint is not None:
            hint = tuple((ComplexQ.of(r), int(m)) for r, m in hint)
            object.__setattr__(self, "den_roots_hint", hint)
            _check_hint(den, hint)
        g = poly_gcd(num, den)
        rnum, rden = (num // g, den // g) if g.degree >= 1 else (num, den)
        object.__setattr__(self, "_reduced", (rnum, rden))
        if not rden[0]:
            raise PoleAtOriginError("pole at origin: f must be a power series a_1 z + a_2 z^2 + ...")
        if rnum[0]:
            raise GFError("f(0) must be 0 (the series starts at n = 1)")

    @classmethod
    def from_coeffs(cls, num: Sequence[ScalarLike], den: Sequence[ScalarLike],
                    den_roots: Sequence[tuple[ScalarLike, int]] | None = None) -> "RationalGF":
        return cls(Poly(num), Poly(den), None if den_roots is None else tuple(den_roots))

    @classmethod
    def alternating(cls) -> "RationalGF":
        """z/(1+z): the series 1 - 2 + 3 - ... once differentiated."""
        return cls(Poly([0, 1]), Poly([1, 1]), ((ComplexQ(-1), 1),))

    @classmethod
    def geometric(cls, eps: ScalarLike) -> "RationalGF":
        """eps z/(1 - eps z) = sum eps^n z^n."""
        eps = ComplexQ.of(eps)
        if not eps:
            raise GFError("eps = 0 gives the zero series")
        return cls(Poly([0, eps]), Poly([1, -eps]), ((eps.inverse(), 1),))

    @property
    def reduced(self) -> tuple[Poly, Poly]:
        """(num, den) with their gcd divided out."""
        return self._reduced

    def __call__(self, z: ScalarLike) -> ComplexQ:
        num, den = self.reduced
        z = ComplexQ.of(z)
        d = den(z)
        if not d:
            raise PoleError(f"f has a pole at z = {format_scalar(z)}")
        return num(z) / d

    def prime_parts(self) -> tuple[Poly, Poly]:
        """(numerator, denominator) of f' = (P'Q - PQ')/Q^2, from the reduced form."""
        p, q = self.reduced
        return p.derivative() * q - p * q.derivative(), q * q

    def numeric_prime(self, z, dtype=complex):
        """Vectorized floating-point f'(z)."""
        top, bottom = self.prime_parts()
        t = np.array(top.to_complex() or [0j], dtype=dtype)
        b = np.array(bottom.to_complex(), dtype=dtype)
        z = np.asarray(z, dtype=dtype)
        return np.polynomial.polynomial.polyval(z, t) / np.polynomial.polynomial.polyval(z, b)

    def to_json(self) -> dict:
        out = {
            "num": [format_scalar(c) for c in self.num.coeffs],
            "den": [format_scalar(c) for c in self.den.coeffs],
        }
        if self.den_roots_hint is not None:
            out["den_roots"] = [[format_scalar(r), m] for r, m in self.den_roots_hint]
        return out


def _check_hint(den: Poly, hint) -> None:
    prod = Poly([1])
    for root, mult in hint:
        if mult < 1:
            raise MalformedGFError("root multiplicities must be >= 1")
        prod = prod * (Poly([-root, 1]) ** mult)
    if prod * den.leading() != den:
        raise MalformedGFError("den_roots_hint does not reproduce the denominator exactly")


# textual input -----------------------------------------------------------


def parse_poly(text: str) -> Poly:
    """``"c0,c1,..."`` with exact scalars, ascending powers."""
    parts = [p for p in text.split(",")]
    if not text.strip() or any(not p.strip() for p in parts):
        raise ValueError(f"malformed coefficient list {text!r}")
    return Poly(parse_scalar(p) for p in parts)


def parse_roots(text: str) -> tuple[tuple[ComplexQ, int], ...]:
    """``"root^mult;root^mult;..."``; a bare root means multiplicity 1."""
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            raise ValueError(f"malformed root list {text!r}")
        root, _, mult = item.partition("^")
        m = int(mult) if mult else 1
        out.append((parse_scalar(root), m))
    return tuple(out)


def parse_gf(num: str, den: str, den_roots: str | None = None) -> RationalGF:
    hint = parse_roots(den_roots) if den_roots else None
    return RationalGF(parse_poly(num), parse_poly(den), hint)


# Taylor coefficients -----------------------------------------------------


def taylor_coeffs(f: RationalGF, N: int) -> list[ComplexQ]:
    """a_1..a_N of the power series of f at 0."""
    if N < 0:
        raise ValueError("N must be >= 0")
    # the raw den may vanish at 0 when num shares the factor; cancel z^r
    r = next(j for j, c in enumerate(f.den.coeffs) if c)
    jn, jd = jet_of_poly(f.num, N + r), jet_of_poly(f.den, N + r)
    try:
        q = jet_div_formal(jn, jd)
    except JetError as exc:
        raise PoleAtOriginError(f"pole at origin: {exc}") from exc
    return list(q.coeffs[1 : N + 1])


# pole classification -----------------------------------------------------


@dataclass(frozen=True)
class PoleEntry:
    root: Root
    multiplicity: int
    exact: bool

    def to_json(self, location: str) -> dict:
        if self.exact:
            root = format_scalar(self.root)
        else:
            z = complex(self.root)
            root = [z.real, z.imag]
        return {"root": root, "multiplicity": self.multiplicity,
                "location": location, "exact": self.exact}


@dataclass(frozen=True)
class PoleReport:
    inside: tuple[PoleEntry, ...]
    on_circle: tuple[PoleEntry, ...]
    outside: tuple[PoleEntry, ...]

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.inside + self.on_circle + self.outside)

    def violations(self, allow_multi_pole: bool = False) -> list[str]:
        """Standing assumptions of the summation method that f breaks."""
        out = []
        for p in self.inside:
            out.append(f"pole at z = {_fmt_root(p.root)} inside the open unit disc "
                       "(the coefficients must grow at most polynomially, so R >= 1)")
        for p in self.on_circle:
            if _is_one(p):
                out.append("pole at z = 1 (the unit-circle pole z0 must satisfy z0 != 1)")
            elif p.multiplicity > 1:
                out.append(f"pole of order {p.multiplicity} at z = {_fmt_root(p.root)} "
                           "on the unit circle (only simple poles are supported)")
        if len(self.on_circle) > 1 and not allow_multi_pole:
            out.append(f"{len(self.on_circle)} poles on the unit circle "
                       "(at most one pole z0 on |z| = 1 is assumed; see --allow-multi-pole)")
        return out

    def admissible(self, allow_multi_pole: bool = False) -> bool:
        return not self.violations(allow_multi_pole)

    def to_json(self) -> list[dict]:
        return ([p.to_json("inside") for p in self.inside]
                + [p.to_json("on_circle") for p in self.on_circle]
                + [p.to_json("outside") for p in self.outside])


def _is_one(p: PoleEntry) -> bool:
    if p.exact:
        return p.root == ONE
    return abs(complex(p.root) - 1) < CIRCLE_TOL


def _fmt_root(root: Root) -> str:
    if isinstance(root, ComplexQ):
        return format_scalar(root)
    return f"{root.real:.17g}{root.imag:+.17g}i"


def _snap(poly: Poly, z: complex) -> ComplexQ | None:
    """Exact rational root near z, if a small-denominator candidate verifies."""
    for bound in (1, 12, 1000, SNAP_MAX_DENOMINATOR):
        cand = ComplexQ(Fraction(z.real).limit_denominator(bound),
                        Fraction(z.imag).limit_denominator(bound))
        if abs(complex(cand) - z) > 1e-6 * max(1.0, abs(z)):
            continue
        if not poly(cand):
            return cand
    return None


def den_roots(f: RationalGF) -> list[PoleEntry]:
    """Poles of f (roots of the reduced denominator) with multiplicities."""
    num, den = f.reduced
    if f.den_roots_hint is not None:
        out = []
        for root, _ in f.den_roots_hint:
            m = root_multiplicity(den, root)
            if m:
                out.append(PoleEntry(root, m, True))
        return out
    out = []
    for part, mult in squarefree_decomposition(den):
        exact_found = []
        for z in find_roots(part.to_complex()):
            cand = _snap(part, z)
            if cand is not None and cand not in exact_found:
                exact_found.append(cand)
                out.append(PoleEntry(cand, mult, True))
            else:
                out.append(PoleEntry(z, mult, False))
    return out


def classify_poles(f: RationalGF) -> PoleReport:
    inside, on, outside = [], [], []
    for p in den_roots(f):
        if p.exact:
            a2 = p.root.abs2()
            bucket = inside if a2 < 1 else on if a2 == 1 else outside
        else:
            r = abs(complex(p.root))
            bucket = on if abs(r - 1) < CIRCLE_TOL else inside if r < 1 else outside
        bucket.append(p)
    key = lambda p: (complex(p.root).real, complex(p.root).imag)
    return PoleReport(tuple(sorted(inside, key=key)), tuple(sorted(on, key=key)),
                      tuple(sorted(outside, key=key)))


# Laurent data at a simple unit-circle pole -------------------------------


@dataclass(frozen=True)
class LaurentData:
    """f(z) = c_minus1/(z - z0) + analytic near z0; d_minus1 = -c_minus1."""

    z0: Root
    t0: float
    c_minus1: Root
    d_minus1: Root
    exact: bool


def _angle(z: complex) -> float:
    t = cmath.phase(z)
    return t + 2 * math.pi if t < 0 else t


def laurent_at(f: RationalGF, z0: Root) -> LaurentData:
    """Residue data at the simple pole z0 (c = P(z0)/Q'(z0) on the reduced form)."""
    num, den = f.reduced
    if isinstance(z0, (ComplexQ, int, Fraction, str)):
        z0 = ComplexQ.of(z0)
        if den(z0):
            raise GFError(f"z0 = {format_scalar(z0)} is not a pole of f")
        mult = root_multiplicity(den, z0)
        if mult > 1:
            raise HigherOrderPoleError(
                f"higher-order pole unsupported (order {mult}; only order 1 is assumed)")
        c = num(z0) / den.derivative()(z0)
        t0 = _angle(complex(z0))
        exact = True
    else:
        z0 = complex(z0)
        match = [p for p in den_roots(f) if abs(complex(p.root) - z0) < 1e-8]
        if not match:
            raise GFError(f"z0 = {z0} is not a pole of f")
        if match[0].multiplicity > 1:
            raise HigherOrderPoleError(
                f"higher-order pole unsupported (order {match[0].multiplicity}; only order 1 is assumed)")
        z0 = complex(match[0].root)
        c = complex(np.polynomial.polynomial.polyval(z0, num.to_complex())
                    / np.polynomial.polynomial.polyval(z0, den.derivative().to_complex()))
        t0 = _angle(z0)
        exact = False
    if t0 == 0.0:
        raise GFError("pole at z = 1 has t0 = 0; the method requires z0 != 1")
    return LaurentData(z0, t0, c, -c, exact)


def analytic_part(f: RationalGF, lau: LaurentData) -> tuple[np.ndarray, np.ndarray]:
    """Complex coefficients (R, Q1) with g = f - c_minus1/(z - z0) = R/Q1.

    For an exact z0 the deflation is exact and only the final coefficients
    are rounded; otherwise it is done by synthetic division in floats.
    """
    num, den = f.reduced
    if lau.exact:
        lin = Poly([-lau.z0, 1])
        q1, rem = den.divmod(lin)
        assert rem.is_zero()
        r, rem = (num - q1 * lau.c_minus1).divmod(lin)
        assert rem.is_zero()
        return np.array(r.to_complex() or [0j]), np.array(q1.to_complex())
    z0, c = complex(lau.z0), complex(lau.c_minus1)
    q1 = _deflate(den.to_complex(), z0)
    p = np.array(num.to_complex() + [0j] * max(0, len(q1) - len(num.coeffs)), dtype=complex)
    p[: len(q1)] -= c * np.asarray(q1)
    return np.array(_deflate(list(p), z0) or [0j]), np.array(q1)


def _deflate(coeffs: list[complex], z0: complex) -> list[complex]:
    """Quotient of sum coeffs[j] z^j by (z - z0), remainder dropped."""
    out = [0j] * (len(coeffs) - 1)
    acc = 0j
    for j in range(len(coeffs) - 1, 0, -1):
        acc = acc * z0 + coeffs[j]
        out[j - 1] = acc
    return out


# derivatives -------------------------------------------------------------


def eval_f_prime(f: RationalGF, z: Root):
    """f'(z): exact for exact z, complex float otherwise."""
    top, bottom = f.prime_parts()
    if isinstance(z, (ComplexQ, int, Fraction, str)):
        z = ComplexQ.of(z)
        b = bottom(z)
        if not b:
            raise PoleError(f"f' has a pole at z = {format_scalar(z)}")
        return top(z) / b
    val = f.numeric_prime(complex(z))
    if not np.isfinite(val):
        raise PoleError(f"f' has a pole at z = {z}")
    return complex(val)


def circle_jet(f: RationalGF, order: int) -> Jet:
    """Jet of g(t) = f(e^{it}) at t = 0, exact."""
    num, den = f.reduced
    e = jet_exp_circle(order)
    d = poly_on_jet(den, e)
    if not d.coeffs[0]:
        raise PoleError("f has a pole at z = 1")
    return jet_div_formal(poly_on_jet(num, e), d)


def theta_power(f: RationalGF, k: int) -> tuple[Poly, Poly, int]:
    """(z d/dz)^k f as N / Q^m; returns (N, Q, m) with m = k + 1."""
    if k < 0:
        raise ValueError("k must be >= 0")
    n, q = f.reduced
    dq = q.derivative()
    z = Poly([0, 1])
    m = 1
    for _ in range(k):
        n = z * (n.derivative() * q - n * dq * m)
        m += 1
    return n, q, m


def theta_value(f: RationalGF, k: int, z: ScalarLike) -> ComplexQ:
    """(z d/dz)^k f evaluated exactly at z."""
    n, q, m = theta_power(f, k)
    z = ComplexQ.of(z)
    qz = q(z)
    if not qz:
        raise PoleError(f"f has a pole at z = {format_scalar(z)}")
    return n(z) / qz**m
