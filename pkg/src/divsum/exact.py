"""Exact scalars and dense polynomials over the Gaussian rationals.

``Rational`` is :class:`fractions.Fraction` (always canonical: positive
denominator, reduced). ``ComplexQ`` pairs two of them. ``Poly`` holds
ascending coefficients with trailing zeros stripped; the zero polynomial
is the empty tuple.

Textual scalar format, shared by the CLI and JSON output::

    "3"  "-1/12"  "1/2+3/4i"  "1/2-3/4i"  "3/4i"  "-i"

``format_scalar`` and ``parse_scalar`` round-trip exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

Rational = Fraction

ScalarLike = Union[int, Fraction, "ComplexQ", str]


def rat_add(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) + Fraction(b)


def rat_mul(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) * Fraction(b)


def rat_div(a: Fraction, b: Fraction) -> Fraction:
    """Exact quotient; raises :class:`ZeroDivisionError` when ``b == 0``."""
    b = Fraction(b)
    if b == 0:
        raise ZeroDivisionError("rational division by zero")
    return Fraction(a) / b


class ComplexQ:
    """Immutable complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        if not isinstance(re, _RationalABC) or not isinstance(im, _RationalABC):
            raise TypeError("ComplexQ parts must be exact rationals")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexQ is immutable")

    @classmethod
    def of(cls, value: ScalarLike) -> "ComplexQ":
        """Coerce an int, Fraction, ComplexQ or textual scalar."""
        if isinstance(value, ComplexQ):
            return value
        if isinstance(value, str):
            return parse_scalar(value)
        if isinstance(value, _RationalABC):
            return cls(value, 0)
        raise TypeError(f"cannot convert {type(value).__name__} to ComplexQ exactly")

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ComplexQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ComplexQ(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ComplexQ(a * c, 0)
        return ComplexQ(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __neg__(self):
        return ComplexQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "ComplexQ":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("complex rational division by zero")
        return ComplexQ(self.re / n, -self.im / n)

    def conjugate(self) -> "ComplexQ":
        return ComplexQ(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    # comparison / conversion -----------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"ComplexQ({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


def _coerce(value):
    if isinstance(value, ComplexQ):
        return value
    if isinstance(value, _RationalABC):
        return ComplexQ(value, 0)
    return NotImplemented


ZERO = ComplexQ(0, 0)
ONE = ComplexQ(1, 0)
I = ComplexQ(0, 1)


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(z: ScalarLike) -> str:
    z = ComplexQ.of(z)
    if not z.im:
        return _fmt_rat(z.re)
    if not z.re:
        return _fmt_rat(z.im) + "i"
    sign = "+" if z.im > 0 else "-"
    return f"{_fmt_rat(z.re)}{sign}{_fmt_rat(abs(z.im))}i"


_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_IMAG_RE = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?i$")


def _parse_rat(text: str) -> Fraction:
    if not _RAT_RE.match(text):
        raise ValueError(f"malformed rational {text!r}")
    return Fraction(text)


def _parse_imag(text: str) -> Fraction:
    m = _IMAG_RE.match(text)
    if not m:
        raise ValueError(f"malformed imaginary part {text!r}")
    sign, mag = m.groups()
    value = Fraction(mag) if mag else Fraction(1)
    return -value if sign == "-" else value


def parse_scalar(text: str) -> ComplexQ:
    """Parse the textual scalar format; raises ``ValueError`` on bad input."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if not s.endswith("i"):
        return ComplexQ(_parse_rat(s), 0)
    # split at the last sign that is not the leading one
    cut = max(s.rfind("+", 1), s.rfind("-", 1))
    if cut <= 0:
        return ComplexQ(0, _parse_imag(s))
    return ComplexQ(_parse_rat(s[:cut]), _parse_imag(s[cut:]))


class Poly:
    """Dense univariate polynomial with ComplexQ coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[ScalarLike] = ()):
        cs = [ComplexQ.of(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: ScalarLike = 1) -> "Poly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> ComplexQ:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, j: int) -> ComplexQ:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ZERO

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __call__(self, z):
        """Horner evaluation at an exact scalar."""
        z = ComplexQ.of(z)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[j] + other[j] for j in range(n))

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[j] - other[j] for j in range(n))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = ComplexQ.of(other)
            return Poly(a * c for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        result = Poly([1])
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(c * j for j, c in enumerate(self.coeffs) if j)

    def antiderivative(self) -> "Poly":
        """Antiderivative with zero constant term."""
        return Poly([ZERO] + [c / (j + 1) for j, c in enumerate(self.coeffs)])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = other.leading().inverse()
        quot = [ZERO] * max(len(rem) - dq, 0)
        for shift in range(len(rem) - dq - 1, -1, -1):
            c = rem[shift + dq] * inv_lead
            quot[shift] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[shift + j] = rem[shift + j] - c * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.leading().inverse()

    def to_complex(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]

    def __repr__(self):
        return f"Poly([{', '.join(format_scalar(c) for c in self.coeffs)}])"


def poly_eval(p: Poly, z: ScalarLike) -> ComplexQ:
    return p(ComplexQ.of(z))


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q(i); gcd(0, 0) is the zero polynomial."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = lead * prod(part**mult)`` with squarefree, coprime parts.

    Only parts of positive degree are returned.
    """
    if p.degree < 1:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    mult = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a, mult))
        b = b // a
        c = d // a
        d = c - b.derivative()
        mult += 1
    return out


def root_multiplicity(p: Poly, root: ComplexQ) -> int:
    """Number of exact factors ``(z - root)`` in ``p``."""
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    lin = Poly([-root, 1])
    mult = 0
    q, r = p.divmod(lin)
    while r.is_zero():
        mult += 1
        p = q
        q, r = p.divmod(lin)
    return mult


def as_poly(coeffs: Sequence[ScalarLike] | Poly) -> Poly:
    return coeffs if isinstance(coeffs, Poly) else Poly(coeffs)
