"""Truncated Taylor series (jets) over ComplexQ.

A jet of order K stores c_0..c_K for sum c_j t^j + O(t^(K+1)); the k-th
derivative at the expansion point is k! * c_k. Everything is exact.
"""

from __future__ import annotations

from math import factorial
from typing import Iterable, Sequence

from .exact import ONE, ZERO, ComplexQ, I, Poly, ScalarLike


class JetError(ValueError):
    pass


class Jet:
    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[ScalarLike], order: int | None = None):
        cs = [ComplexQ.of(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise JetError("jet order must be >= 0")
        cs = cs[: order + 1] + [ZERO] * (order + 1 - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @classmethod
    def constant(cls, c: ScalarLike, order: int) -> "Jet":
        return cls([c], order)

    @classmethod
    def variable(cls, order: int) -> "Jet":
        """The jet of t itself."""
        return cls([0, 1], order)

    def __getitem__(self, j):
        return self.coeffs[j]

    def __len__(self):
        return len(self.coeffs)

    def _same_order(self, other: "Jet"):
        if self.order != other.order:
            raise JetError(f"jet order mismatch: {self.order} vs {other.order}")

    def _lift(self, other):
        if isinstance(other, Jet):
            self._same_order(other)
            return other
        return Jet.constant(ComplexQ.of(other), self.order)

    def __add__(self, other):
        other = self._lift(other)
        return Jet((a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Jet((a - b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet((-c for c in self.coeffs), self.order)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = ComplexQ.of(other)
            return Jet((a * c for a in self.coeffs), self.order)
        self._same_order(other)
        K = self.order
        a, b = self.coeffs, other.coeffs
        nz_b = [j for j in range(K + 1) if b[j]]
        out = [ZERO] * (K + 1)
        for i in range(K + 1):
            ai = a[i]
            if not ai:
                continue
            for j in nz_b:
                if i + j > K:
                    break
                out[i + j] = out[i + j] + ai * b[j]
        return Jet(out, K)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div_formal(self, other)
        return self * ComplexQ.of(other).inverse()

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None for the zero jet."""
        for j, c in enumerate(self.coeffs):
            if c:
                return j
        return None

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetError("cannot raise the order of a jet")
        return Jet(self.coeffs[: order + 1], order)

    def derivative_at_point(self, k: int) -> ComplexQ:
        return derivative_at_point(self, k)

    def __repr__(self):
        return f"Jet([{', '.join(str(c) for c in self.coeffs)}])"


def jet_add(a: Jet, b: Jet) -> Jet:
    a._same_order(b)
    return a + b


def jet_mul(a: Jet, b: Jet) -> Jet:
    a._same_order(b)
    return a * b


def jet_reciprocal(a: Jet) -> Jet:
    """1/a mod t^(K+1) by the triangular recurrence."""
    c0 = a.coeffs[0]
    if not c0:
        raise JetError("non-invertible jet: zero constant term")
    inv0 = c0.inverse()
    K = a.order
    out = [inv0]
    for n in range(1, K + 1):
        s = ZERO
        for j in range(1, n + 1):
            if a.coeffs[j]:
                s = s + a.coeffs[j] * out[n - j]
        out.append(-s * inv0)
    return Jet(out, K)


def jet_div_formal(num: Jet, den: Jet) -> Jet:
    """Quotient num/den after cancelling a common factor t^r.

    r is the valuation of ``den``. Cancelling it costs r orders of
    accuracy, so the result has order ``K - r``; build the inputs at
    order ``K + r`` to get a quotient of order K.
    """
    num._same_order(den)
    r = den.valuation()
    if r is None:
        raise JetError("division by the zero jet")
    vn = num.valuation()
    if vn is not None and vn < r:
        raise JetError(f"quotient has a pole of order {r - vn} at the expansion point")
    K = num.order - r
    n_shift = Jet(num.coeffs[r:], K)
    d_shift = Jet(den.coeffs[r:], K)
    return _divide(n_shift, d_shift)


def _divide(num: Jet, den: Jet) -> Jet:
    d0 = den.coeffs[0]
    inv0 = d0.inverse()
    K = num.order
    dc = den.coeffs
    nz = [j for j in range(1, K + 1) if dc[j]]
    out: list[ComplexQ] = []
    for n in range(K + 1):
        s = num.coeffs[n]
        for j in nz:
            if j > n:
                break
            s = s - dc[j] * out[n - j]
        out.append(s * inv0)
    return Jet(out, K)


def derivative_at_point(jet: Jet, k: int) -> ComplexQ:
    if k < 0 or k > jet.order:
        raise JetError(f"derivative order {k} exceeds jet order {jet.order}")
    return jet.coeffs[k] * factorial(k)


def jet_exp(order: int, scale: ScalarLike = 1) -> Jet:
    """Jet of exp(scale * t): coefficients scale^j / j!."""
    if order < 0:
        raise JetError("jet order must be >= 0")
    a = ComplexQ.of(scale)
    out = [ONE]
    for j in range(1, order + 1):
        out.append(out[-1] * a / j)
    return Jet(out, order)


def jet_exp_circle(order: int) -> Jet:
    """Jet of e^(it) at t = 0: coefficients i^j / j!."""
    return jet_exp(order, I)


def poly_on_jet(p: Poly, x: Jet) -> Jet:
    """Evaluate a polynomial at a jet by Horner's rule."""
    acc = Jet.constant(ZERO, x.order)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def jet_of_poly(p: Poly | Sequence[ScalarLike], order: int) -> Jet:
    """Truncate a polynomial (a power series in t) to a jet."""
    coeffs = p.coeffs if isinstance(p, Poly) else p
    return Jet(coeffs, order)
