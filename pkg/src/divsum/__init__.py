"""Exact regularized sums of divergent series sum n^k a_n via generating functions."""

from .exact import ComplexQ, Poly, format_scalar, parse_scalar
from .genfun import RationalGF, classify_poles, laurent_at, taylor_coeffs
from .special import apostol_bernoulli, bernoulli, euler_at_zero
from .summation import (
    abel_value,
    alternating_sum,
    apostol_sum,
    homothetic_check,
    natural_sum,
    regularized_sum,
)

__all__ = [
    "ComplexQ",
    "Poly",
    "RationalGF",
    "abel_value",
    "alternating_sum",
    "apostol_bernoulli",
    "apostol_sum",
    "bernoulli",
    "classify_poles",
    "euler_at_zero",
    "format_scalar",
    "homothetic_check",
    "laurent_at",
    "natural_sum",
    "parse_scalar",
    "regularized_sum",
    "taylor_coeffs",
]
