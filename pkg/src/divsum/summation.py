"""Regularized values of sum n^k a_n.

The engine differentiates g(t) = f(e^{it}) exactly: the value is
(1/i^k) g^(k)(0), read off the jet of g. Closed forms for the three named
families (alternating, natural, Apostol) come from ``special``; the
natural family is defined through A_k = (1 - 2^(k+1)) N_k, because its
generating function has the excluded pole at z = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exact import ONE, ComplexQ, I, ScalarLike, format_scalar
from .genfun import PoleError, PoleReport, RationalGF, circle_jet, classify_poles, theta_value
from .jets import derivative_at_point
from .special import DegenerateParameterError, apostol_bernoulli, bernoulli, euler_at_zero

JET_MARGIN = 4

JET_ENGINE = "circle_jet"
EULER = "euler_closed_form"
BERNOULLI = "bernoulli_closed_form"
APOSTOL = "apostol_closed_form"
HOMOTHETIC = "homothetic"


class InadmissibleError(ValueError):
    """The generating function breaks an assumption of the summation method."""

    def __init__(self, violations: Sequence[str], report: PoleReport | None = None):
        self.violations = list(violations)
        self.report = report
        super().__init__("inadmissible generating function: " + "; ".join(self.violations))


@dataclass(frozen=True)
class SummationResult:
    value: ComplexQ | complex
    k: int
    method: str
    admissible: bool = True
    poles: PoleReport | None = None
    jet_order: int | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def exact(self) -> bool:
        return isinstance(self.value, ComplexQ)

    def to_json(self) -> dict:
        z = complex(self.value)
        value: dict = {"float": [z.real, z.imag]}
        if self.exact:
            value = {"exact": format_scalar(self.value), **value}
        return {
            "value": value,
            "k": self.k,
            "method": self.method,
            "admissible": self.admissible,
            "poles": self.poles.to_json() if self.poles is not None else [],
            "notes": list(self.notes),
        }


def _check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise TypeError("k must be an integer")
    if k == 0:
        raise ValueError("k = 0 (plain sum of a_n) is outside the summation method; "
                         "use abel_value(f, 0, r_schedule) for the Abel-limit extension")
    if k < 0:
        raise ValueError("k must be >= 1")


def _i_power(k: int) -> ComplexQ:
    return (ONE, I, -ONE, -I)[k % 4]


def regularized_sum(f: RationalGF, k: int, allow_multi_pole: bool = False,
                    cross_check: bool = False) -> SummationResult:
    """(1/i^k) (d/dt)^k f(e^{it}) at t = 0, exactly.

    With ``cross_check`` the jet is recomputed at order k + 8 and the
    overlapping coefficients must agree.
    """
    _check_k(k)
    report = classify_poles(f)
    violations = report.violations(allow_multi_pole)
    if violations:
        raise InadmissibleError(violations, report)
    order = k + JET_MARGIN
    jet = circle_jet(f, order)
    if cross_check:
        wide = circle_jet(f, k + 2 * JET_MARGIN)
        if wide.coeffs[: order + 1] != jet.coeffs:
            raise AssertionError("jet coefficients disagree between orders")
    value = derivative_at_point(jet, k) * _i_power(k).inverse()

    notes = []
    if report.on_circle:
        roots = ", ".join(_root_text(p.root) for p in report.on_circle)
        notes.append(f"R = 1: simple pole z0 = {roots} on the unit circle")
    else:
        notes.append("R > 1: no pole on the closed unit disc")
    if not report.exact:
        notes.append("admissibility decided numerically (unit-circle tolerance 1e-10); "
                     "the value itself is computed exactly")
    if allow_multi_pole and len(report.on_circle) > 1:
        notes.append("experimental: several unit-circle poles, summed by linearity over partial fractions")
    return SummationResult(value, k, JET_ENGINE, True, report, order, tuple(notes))


def _root_text(root) -> str:
    if isinstance(root, ComplexQ):
        return format_scalar(root)
    return f"{root.real:.17g}{root.imag:+.17g}i"


def alternating_sum(k: int) -> SummationResult:
    """1^k - 2^k + 3^k - ... = -E_k(0)/2."""
    _check_k(k)
    return SummationResult(ComplexQ(-euler_at_zero(k) / 2), k, EULER,
                           notes=("generating function z/(1+z), pole z0 = -1",))


def natural_sum(k: int) -> SummationResult:
    """1^k + 2^k + 3^k + ... = -B_(k+1)/(k+1)."""
    _check_k(k)
    return SummationResult(
        ComplexQ(-bernoulli(k + 1) / (k + 1)), k, BERNOULLI, admissible=False,
        notes=("z/(1-z) has its pole at z = 1, so the engine does not apply; "
               "the value is defined through A_k = (1 - 2^(k+1)) N_k",))


def apostol_sum(k: int, eps: ScalarLike) -> SummationResult:
    """sum eps^n n^k = -B_(k+1)(eps)/(k+1) for |eps| <= 1, eps != 1."""
    _check_k(k)
    eps = ComplexQ.of(eps)
    if eps == ONE:
        raise DegenerateParameterError("eps = 1 is the natural series; use natural_sum")
    if eps.abs2() > 1:
        raise ValueError("parameter outside closed unit disc (|eps| <= 1 required)")
    return SummationResult(-apostol_bernoulli(k + 1, eps) / (k + 1), k, APOSTOL,
                           notes=(f"eps = {format_scalar(eps)}",))


class HomotheticCheck(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    equal: bool


def homothetic_check(k: int) -> HomotheticCheck:
    """Compare A_k with (1 - 2^(k+1)) N_k exactly."""
    lhs = alternating_sum(k).value.re
    rhs = (1 - 2 ** (k + 1)) * natural_sum(k).value.re
    return HomotheticCheck(lhs, rhs, lhs == rhs)


class AbelEstimate(NamedTuple):
    value: complex
    error: float
    trace: list[tuple[float, complex]]


def abel_value(f: RationalGF, k: int, r_schedule: Sequence[float | Fraction | str]) -> AbelEstimate:
    """Limit of (z d/dz)^k f(r) as r -> 1-, by polynomial extrapolation in 1 - r.

    Values at each r are exact; Neville extrapolation to r = 1 runs in
    exact arithmetic too. The error estimate is the change between the
    last two extrapolants. k = 0 is allowed here (the plain Abel limit).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    _, den = f.reduced
    if not den(ONE):
        raise PoleError("f has a pole at z = 1; the Abel limit does not exist")
    rs = [Fraction(r) for r in r_schedule]
    if not rs or any(not (0 < r < 1) for r in rs) or any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("r_schedule must be increasing values in (0, 1)")
    values = [theta_value(f, k, ComplexQ(r)) for r in rs]
    hs = [1 - r for r in rs]
    extrapolants = [values[0]]
    table = list(values)
    for level in range(1, len(rs)):
        for j in range(len(rs) - 1, level - 1, -1):
            # Neville step toward h = 0
            table[j] = (table[j] * hs[j - level] - table[j - 1] * hs[j]) / (hs[j - level] - hs[j])
        extrapolants.append(table[-1])
    best = complex(extrapolants[-1])
    err = abs(best - complex(extrapolants[-2])) if len(extrapolants) > 1 else float("inf")
    trace = [(float(r), complex(v)) for r, v in zip(rs, values)]
    return AbelEstimate(best, err, trace)
