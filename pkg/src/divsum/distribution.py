"""Floating-point checks of the distribution D = sum n a_n e^{int}.

Everything here is a verification instrument: results are floats with
error estimates and never feed back into the exact engine.

* ``fourier_coeff_residue`` / ``fourier_coeff_quadrature``: c_n(D) = n a_n,
  once exactly from the series of f' and once by integrating over the circle
  (with the finite-part counterterm and the delta'-comb when f has a
  unit-circle pole).
* ``pf_pairing``: the finite-part pairing <Pf f'(e^{it}) e^{it}, phi>.
* ``approx_identity_limit``: <D^(k-1), phi_m> for shrinking bumps phi_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Protocol, Sequence

import numpy as np
from scipy.integrate import quad

from .exact import ComplexQ, I, Poly
from .genfun import LaurentData, RationalGF, analytic_part, classify_poles, laurent_at
from .jets import jet_div_formal, jet_of_poly
from .quadrature import (
    ConvergenceError,
    graded_edges,
    integrate,
    panel_rule,
    refine,
    richardson_powers,
    working_dtypes,
)
from .summation import InadmissibleError, regularized_sum

MAX_BUMP_DERIVATIVE = 12
EPS_ERROR_POWERS = (1, 3)
EPS_TOL = 1e-6


def default_eps_schedule() -> list[float]:
    return [(math.pi / 8) * 4.0**-j for j in range(7)]


# bump functions ----------------------------------------------------------


@lru_cache(maxsize=None)
def bump_normalization() -> float:
    """C with C * integral of exp(-1/(1-t^2)) over (-1, 1) equal to 1."""
    val, err = quad(lambda t: math.exp(-1.0 / (1.0 - t * t)), -1.0, 1.0,
                    epsabs=1e-14, epsrel=1e-13, limit=200)
    if err > 1e-12:
        raise ConvergenceError(f"bump normalization quadrature error {err:.2e} exceeds 1e-12")
    return 1.0 / val


@lru_cache(maxsize=None)
def _bump_numerators() -> tuple[np.ndarray, ...]:
    """P_j with psi^(j)(x) = P_j(x) / (1 - x^2)^(2j) * psi(x), built exactly.

    P_0 = 1, P_(j+1) = (1-x^2)^2 P_j' + 4j x (1-x^2) P_j - 2x P_j.
    """
    one_minus = Poly([1, 0, -1])
    x = Poly([0, 1])
    polys = [Poly([1])]
    for j in range(MAX_BUMP_DERIVATIVE):
        p = polys[-1]
        nxt = one_minus * one_minus * p.derivative() + x * one_minus * p * (4 * j) - x * p * 2
        polys.append(nxt)
    return tuple(np.array([float(c.re) for c in p.coeffs]) for p in polys)


def bump_derivative(x, j: int = 0) -> np.ndarray:
    """j-th derivative of the normalized bump psi at x (zero off (-1, 1))."""
    if not 0 <= j <= MAX_BUMP_DERIVATIVE:
        raise ValueError(f"derivative order must be in 0..{MAX_BUMP_DERIVATIVE}")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    xi = x[inside]
    w = 1.0 / (1.0 - xi * xi)
    # exp(2j log w - w) keeps the product finite near the support edge
    out[inside] = (bump_normalization() * np.polynomial.polynomial.polyval(xi, _bump_numerators()[j])
                   * np.exp(2 * j * np.log(w) - w))
    return out


class TestFunction(Protocol):
    support: tuple[float, float]

    def __call__(self, t, j: int = 0) -> np.ndarray: ...


@dataclass(frozen=True)
class Mollifier:
    """phi_m(t) = m psi(m (t - center)), support [center - 1/m, center + 1/m]."""

    m: float
    center: float = 0.0

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("mollifier scale m must be positive")

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - 1.0 / self.m, self.center + 1.0 / self.m)

    def __call__(self, t, j: int = 0):
        t = np.asarray(t, dtype=float)
        return self.m ** (j + 1) * bump_derivative(self.m * (t - self.center), j)


def mollifier_value(mol: Mollifier, t: float, deriv_order: int = 0) -> float:
    return float(mol(t, deriv_order))


def delta_prime_comb(phi: TestFunction, t0: float) -> float:
    """<sum_n delta'_{t0 + 2 n pi}, phi> = -sum phi'(t0 + 2 n pi) over the support."""
    a, b = phi.support
    lo = math.ceil((a - t0) / (2 * math.pi))
    hi = math.floor((b - t0) / (2 * math.pi))
    total = 0.0
    for n in range(lo, hi + 1):
        p = t0 + 2 * math.pi * n
        if a < p < b:
            total -= float(phi(p, 1))
    return total


# Fourier coefficients ----------------------------------------------------


def fourier_coeff_residue(f: RationalGF, n: int) -> ComplexQ:
    """Coefficient of z^(n-1) in the series of f' at 0, i.e. Res_0 f'(z) z^(-n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    top, bottom = f.prime_parts()
    if not bottom[0]:
        raise ValueError("f' has a pole at the origin")
    q = jet_div_formal(jet_of_poly(top, n - 1), jet_of_poly(bottom, n - 1))
    return q.coeffs[n - 1]


class Estimate(NamedTuple):
    value: complex
    error: float
    trace: list


def _admissible_laurent(f: RationalGF) -> LaurentData | None:
    report = classify_poles(f)
    violations = report.violations()
    if violations:
        raise InadmissibleError(violations, report)
    if not report.on_circle:
        return None
    return laurent_at(f, report.on_circle[0].root)


def _omega_rule(t0: float, eps: float, lo: float, hi: float, h_max: float, dtype):
    """Nodes u = t - t0 and weights on the excised window intersected with [lo, hi].

    The excised window is (t0 - pi, t0 - eps) U (t0 + eps, t0 + pi); panels
    are graded toward the excised point on both sides.
    """
    nodes, weights = [], []
    for side in (1.0, -1.0):
        ua, ub = (lo - t0, hi - t0) if side > 0 else (t0 - hi, t0 - lo)
        ua, ub = max(ua, eps), min(ub, math.pi)
        if ub <= ua:
            continue
        edges = graded_edges(eps, math.pi)
        edges = np.concatenate([[ua], edges[(edges > ua) & (edges < ub)], [ub]])
        u, w = panel_rule(refine(edges, h_max), dtype=dtype)
        nodes.append(side * u)
        weights.append(w)
    if not nodes:
        return np.zeros(0, dtype=dtype), np.zeros(0, dtype=dtype)
    return np.concatenate(nodes), np.concatenate(weights)


def _kernel(f: RationalGF, t, cdtype):
    """f'(e^{it}) e^{it} evaluated directly."""
    z = np.exp(1j * np.asarray(t, dtype=cdtype))
    return f.numeric_prime(z, dtype=cdtype) * z


class _SplitKernel:
    """f'(e^{it}) e^{it} near the pole, as a function of u = t - t0.

    f' = d/(z - z0)^2 + g'(z); the first term times z equals
    -d e^{-i t0} / (4 sin^2(u/2)), which stays accurate for tiny u.
    """

    def __init__(self, f: RationalGF, lau: LaurentData, cdtype):
        self.t0 = lau.t0
        self.d = complex(lau.d_minus1)
        self.cdtype = cdtype
        r, q1 = analytic_part(f, lau)
        P = np.polynomial.polynomial
        self.r, self.q1 = r.astype(cdtype), q1.astype(cdtype)
        self.dr, self.dq1 = P.polyder(self.r), P.polyder(self.q1)

    def __call__(self, u):
        P = np.polynomial.polynomial
        u = np.asarray(u)
        z = np.exp(1j * (self.t0 + u.astype(self.cdtype)))
        q = P.polyval(z, self.q1)
        g_prime = (P.polyval(z, self.dr) * q - P.polyval(z, self.r) * P.polyval(z, self.dq1)) / q**2
        singular = -self.d * np.exp(-1j * self.t0) / (4 * np.sin(u / 2) ** 2)
        return singular + g_prime * z


def _check_schedule(schedule: Sequence[float]) -> list[float]:
    eps = [float(e) for e in schedule]
    if len(eps) < len(EPS_ERROR_POWERS) + 2:
        raise ValueError("eps schedule too short for extrapolation")
    if any(e <= 0 or e >= math.pi / 2 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps schedule must be strictly decreasing in (0, pi/2)")
    return eps


def _extrapolate(eps: list[float], values: list[complex], tol: float, what: str):
    extrap = richardson_powers(eps, values, EPS_ERROR_POWERS)
    err = abs(extrap[-1] - extrap[-2])
    trace = [{"eps": e, "value": [v.real, v.imag]} for e, v in zip(eps, values)]
    if err > tol * max(1.0, abs(extrap[-1])):
        raise ConvergenceError(f"{what}: eps-extrapolation did not settle "
                               f"(last change {err:.3e})", trace)
    return extrap, err, trace


def fourier_coeff_quadrature(f: RationalGF, n: int, eps_schedule: Sequence[float] | None = None,
                             tol: float = EPS_TOL) -> Estimate:
    """c_n(D) by integration over the circle.

    No unit-circle pole: trapezoid rule on [0, 2 pi] with doubling until
    the change drops below 1e-14. Simple pole z0 = e^{i t0}: finite-part
    integral over the excised circle plus d e^{-i n t0}/(e^{i t0} tan(eps/2)),
    extrapolated in eps, plus the delta'-comb term d n pi e^{-(n+1) i t0}.
    """
    rdtype, cdtype = working_dtypes()
    lau = _admissible_laurent(f)
    if lau is None:
        M = 64
        while M < 4 * abs(n) + 16:
            M *= 2
        prev = None
        trace = []
        while M <= 2**20:
            t = 2 * np.pi * np.arange(M, dtype=rdtype) / M
            val = complex(np.mean(_kernel(f, t, cdtype) * np.exp(-1j * n * t.astype(cdtype))))
            trace.append({"M": M, "value": [val.real, val.imag]})
            if prev is not None and abs(val - prev) < 1e-14 * max(1.0, abs(val)):
                return Estimate(val, abs(val - prev), trace)
            prev = val
            M *= 2
        raise ConvergenceError("trapezoid rule did not converge", trace)

    eps = _check_schedule(eps_schedule or default_eps_schedule())
    t0 = lau.t0
    d = complex(lau.d_minus1)
    h_max = min(0.25, 1.0 / max(abs(n), 1))
    kernel = _SplitKernel(f, lau, cdtype)
    values = []
    for e in eps:
        u, w = _omega_rule(t0, e, t0 - math.pi, t0 + math.pi, h_max, rdtype)
        weight = np.exp(-1j * n * (t0 + u.astype(cdtype)))
        integral = complex(np.sum(w * kernel(u) * weight))
        counter = d * np.exp(-1j * n * t0) / (np.exp(1j * t0) * math.tan(e / 2))
        values.append(integral + counter)
    extrap, err, trace = _extrapolate(eps, values, tol * 2 * math.pi, "fourier coefficient")
    comb = d * n * math.pi * np.exp(-1j * (n + 1) * t0)
    value = complex((extrap[-1] + comb) / (2 * math.pi))
    return Estimate(value, err / (2 * math.pi), trace)


# finite-part pairing -----------------------------------------------------


@dataclass(frozen=True)
class DivergenceFit:
    """Least-squares fit S(eps) = alpha/eps + beta + gamma*eps without counterterm."""

    alpha: complex
    beta: complex
    expected_abs_alpha: float

    @property
    def relative_mismatch(self) -> float:
        return abs(abs(self.alpha) - self.expected_abs_alpha) / self.expected_abs_alpha


@dataclass(frozen=True)
class PfResult:
    value: complex
    error: float
    trace: list = field(default_factory=list)
    extrapolants: list = field(default_factory=list)
    divergence: DivergenceFit | None = None


def _shift_to_support(t0: float, phi: TestFunction) -> float | None:
    """Representative t0 + 2 pi j with supp(phi) inside (t0 - pi, t0 + pi).

    None when no translate of t0 lies strictly inside the support; the
    pairing is then an ordinary integral.
    """
    a, b = phi.support
    first = math.floor((a - t0) / (2 * math.pi)) + 1
    if not t0 + 2 * math.pi * first < b:
        return None
    mid = (a + b) / 2
    t = t0 + 2 * math.pi * round((mid - t0) / (2 * math.pi))
    if not (t - math.pi < a and b < t + math.pi):
        raise ValueError("test function support must lie inside (t0 - pi, t0 + pi); "
                         "supports straddling t0 +- pi are not supported")
    return t


def pf_pairing(f: RationalGF, phi: TestFunction, eps_schedule: Sequence[float] | None = None,
               counterterm: bool = True, tol: float = EPS_TOL) -> PfResult:
    """<Pf f'(e^{it}) e^{it}, phi>.

    With a unit-circle pole the excised integral plus
    d e^{-i t0} phi(t0)/tan(eps/2) is extrapolated to eps = 0. With
    ``counterterm=False`` the raw excised integrals are returned together
    with a fit of their 1/eps divergence instead.
    """
    rdtype, cdtype = working_dtypes()
    lau = _admissible_laurent(f)
    a, b = phi.support
    h_max = min(0.25, (b - a) / 32)
    t0 = None if lau is None else _shift_to_support(lau.t0, phi)
    if t0 is None:
        edges = refine([a, b], h_max)
        val = complex(integrate(lambda t: _kernel(f, t, cdtype) * phi(t), edges, dtype=rdtype))
        return PfResult(val, 0.0)

    d = complex(lau.d_minus1)
    phi_t0 = float(phi(t0))
    eps = _check_schedule(eps_schedule or default_eps_schedule())
    kernel = _SplitKernel(f, lau, cdtype)
    raw = []
    for e in eps:
        u, w = _omega_rule(t0, e, a, b, h_max, rdtype)
        raw.append(complex(np.sum(w * kernel(u) * phi(t0 + u.astype(float)))))

    if not counterterm:
        e = np.array(eps)
        A = np.column_stack([1 / e, np.ones_like(e), e]).astype(complex)
        coef = np.linalg.lstsq(A, np.array(raw), rcond=None)[0]
        fit = DivergenceFit(complex(coef[0]), complex(coef[1]), 2 * abs(d * phi_t0))
        trace = [{"eps": x, "value": [v.real, v.imag]} for x, v in zip(eps, raw)]
        return PfResult(fit.beta, math.inf, trace, [], fit)

    values = [r + d * np.exp(-1j * t0) * phi_t0 / math.tan(e / 2) for r, e in zip(raw, eps)]
    extrap, err, trace = _extrapolate(eps, [complex(v) for v in values], tol, "Pf pairing")
    return PfResult(extrap[-1], err, trace, extrap)


# approximate identity ----------------------------------------------------


class LimitEstimate(NamedTuple):
    value: complex
    error: float
    trace: list
    target: complex


def approx_identity_limit(f: RationalGF, k: int, m_schedule: Sequence[int] = (8, 16, 32, 64),
                          panels: int = 128) -> LimitEstimate:
    """<D^(k-1), phi_m> = (-1)^(k-1) int f'(e^{it}) e^{it} phi_m^(k-1)(t) dt for each m.

    The limit estimate extrapolates in 1/m^2 (phi_m is even, so the
    pairing error expands in even powers of 1/m). ``target`` is
    (d/dt)^(k-1) [f'(e^{it}) e^{it}] at 0 = i^(k-1) times the exact sum.

    The pairing is an O(1) value obtained by cancelling terms of size
    m^(k-1) sup|psi^(k-1)|, which grows like ((k-1)!)^2. ``error`` therefore
    includes a rounding bound unit_roundoff * int |integrand|; beyond k of
    about 5 that bound dominates in double precision.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k - 1 > MAX_BUMP_DERIVATIVE:
        raise ValueError(f"k - 1 must not exceed {MAX_BUMP_DERIVATIVE}")
    ms = [int(m) for m in m_schedule]
    if not ms or any(m < 1 for m in ms) or any(b <= a for a, b in zip(ms, ms[1:])):
        raise ValueError("m_schedule must be increasing positive integers")
    rdtype, cdtype = working_dtypes()
    lau = _admissible_laurent(f)
    if lau is not None:
        gap = min(lau.t0, 2 * math.pi - lau.t0)
        for m in ms:
            if 1.0 / m >= gap:
                raise ValueError(f"support of phi_{m} overlaps singularity at t0 = {lau.t0:.6g}; "
                                 "increase m")
    sign = (-1) ** (k - 1)
    values = []
    roundoff = 0.0
    unit = float(np.finfo(rdtype).eps)
    for m in ms:
        phi = Mollifier(m)
        edges = np.linspace(-1.0 / m, 1.0 / m, panels + 1)

        def integrand(t, phi=phi):
            return _kernel(f, t, cdtype) * phi(t.astype(float), k - 1)

        values.append(complex(sign * integrate(integrand, edges, dtype=rdtype)))
        mass = integrate(lambda t: np.abs(integrand(t)), edges, dtype=rdtype)
        roundoff = max(roundoff, unit * float(mass))
    hs = [1.0 / m**2 for m in ms]
    if len(ms) >= 3:
        extrap = richardson_powers(hs, values, (1, 2))
        best, err = extrap[-1], (abs(extrap[-1] - extrap[-2]) if len(extrap) > 1
                                 else abs(extrap[-1] - values[-1]))
    elif len(ms) == 2:
        extrap = richardson_powers(hs, values, (1,))
        best, err = extrap[-1], abs(extrap[-1] - values[-1])
    else:
        best, err = values[-1], math.inf
    err = max(err, roundoff)
    exact = regularized_sum(f, k).value * I ** (k - 1)
    trace = [{"m": m, "value": [v.real, v.imag]} for m, v in zip(ms, values)]
    return LimitEstimate(best, err, trace, complex(exact))
