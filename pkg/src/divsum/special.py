"""Bernoulli numbers, Euler polynomial values E_k(0), Apostol-Bernoulli numbers.

Convention: B_1 = -1/2, i.e. t/(e^t - 1) = sum B_m t^m / m!. The other
common convention (B_1 = +1/2) differs only at m = 1.

Each family has a recurrence route (memoized, the default) and an
independent generating-function route through jets (``*_via_jet``) that
the test suite uses for cross-validation.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exact import ONE, ZERO, ComplexQ, ScalarLike, format_scalar
from .jets import Jet, jet_div_formal, jet_exp

_lock = threading.Lock()
_bernoulli: list[Fraction] = [Fraction(1)]
_apostol: dict[ComplexQ, list[ComplexQ]] = {}


class DegenerateParameterError(ValueError):
    pass


def bernoulli(m: int) -> Fraction:
    """B_m from sum_{j=0}^{m} C(m+1, j) B_j = 0 (m >= 1), B_0 = 1."""
    if m < 0:
        raise ValueError("m must be >= 0")
    with _lock:
        table = _bernoulli
        for n in range(len(table), m + 1):
            s = sum((comb(n + 1, j) * table[j] for j in range(n)), Fraction(0))
            table.append(-s / (n + 1))
        return table[m]


def euler_at_zero(k: int) -> Fraction:
    """E_k(0) = 2 (1 - 2^(k+1)) B_(k+1) / (k+1)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return 2 * (1 - 2 ** (k + 1)) * bernoulli(k + 1) / (k + 1)


def apostol_bernoulli(m: int, eps: ScalarLike) -> ComplexQ:
    """B_m(eps), the coefficients of t/(eps e^t - 1) times m!.

    Recurrence: (eps - 1) B_m = [m == 1] - eps * sum_{j<m} C(m, j) B_j.
    Any exact eps != 1 is accepted.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    eps = ComplexQ.of(eps)
    if eps == ONE:
        raise DegenerateParameterError("degenerate: Apostol parameter equals 1; use bernoulli()")
    with _lock:
        table = _apostol.setdefault(eps, [ZERO])
        inv = (eps - 1).inverse()
        for n in range(len(table), m + 1):
            s = ZERO
            for j in range(1, n):
                if table[j]:
                    s = s + table[j] * comb(n, j)
            rhs = (ONE if n == 1 else ZERO) - eps * s
            table.append(rhs * inv)
        return table[m]


# independent generating-function routes ---------------------------------


def _coeffs_times_factorial(jet: Jet, n: int) -> list[ComplexQ]:
    return [jet.coeffs[m] * factorial(m) for m in range(n + 1)]


def bernoulli_via_jet(n: int) -> list[Fraction]:
    """B_0..B_n read off t/(e^t - 1)."""
    order = n + 1
    t = Jet.variable(order)
    q = jet_div_formal(t, jet_exp(order) - 1)
    return [c.re for c in _coeffs_times_factorial(q, n)]


def euler_at_zero_via_jet(n: int) -> list[Fraction]:
    """E_0(0)..E_n(0) read off 2/(e^t + 1)."""
    q = jet_div_formal(Jet.constant(2, n), jet_exp(n) + 1)
    return [c.re for c in _coeffs_times_factorial(q, n)]


def apostol_bernoulli_via_jet(n: int, eps: ScalarLike) -> list[ComplexQ]:
    """B_0(eps)..B_n(eps) read off t/(eps e^t - 1)."""
    eps = ComplexQ.of(eps)
    if eps == ONE:
        raise DegenerateParameterError("degenerate: Apostol parameter equals 1; use bernoulli()")
    t = Jet.variable(n)
    q = jet_div_formal(t, jet_exp(n) * eps - 1)
    return _coeffs_times_factorial(q, n)


@dataclass(frozen=True)
class Table:
    kind: str  # "bernoulli" | "euler0" | "apostol"
    values: tuple
    eps: ComplexQ | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.eps is not None:
            out["eps"] = format_scalar(self.eps)
        out["values"] = [format_scalar(v) for v in self.values]
        return out


def bernoulli_table(n: int) -> Table:
    return Table("bernoulli", tuple(bernoulli(m) for m in range(n + 1)))


def euler0_table(n: int) -> Table:
    return Table("euler0", tuple(euler_at_zero(k) for k in range(n + 1)))


def apostol_table(n: int, eps: ScalarLike) -> Table:
    eps = ComplexQ.of(eps)
    return Table("apostol", tuple(apostol_bernoulli(m, eps) for m in range(n + 1)), eps)
