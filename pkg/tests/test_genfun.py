from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES, alternating, circle, half, q
from divsum.exact import ComplexQ, Poly
from divsum.genfun import (
    GFError,
    HigherOrderPoleError,
    LaurentData,
    PoleAtOriginError,
    RationalGF,
    analytic_part,
    classify_poles,
    eval_f_prime,
    laurent_at,
    parse_gf,
    taylor_coeffs,
    theta_value,
)
from divsum.roots import RootFindingError, find_roots


def test_taylor_examples():
    assert taylor_coeffs(alternating(), 4) == [q(s) for s in ("1", "-1", "1", "-1")]
    assert taylor_coeffs(half(), 3) == [q(s) for s in ("1/2", "1/4", "1/8")]
    assert taylor_coeffs(RationalGF(Poly([0, 1]), Poly([1])), 3) == [q("1"), q("0"), q("0")]


def test_taylor_unreduced_input():
    # z(1+z)/((1+z)^2): the common factor cancels, leaving z/(1+z)
    f = RationalGF(Poly([0, 1]) * Poly([1, 1]), Poly([1, 1]) ** 2)
    assert taylor_coeffs(f, 6) == taylor_coeffs(alternating(), 6)


def test_construction_errors():
    with pytest.raises(GFError, match="f\\(0\\) must be 0"):
        RationalGF(Poly([1, 1]), Poly([1, 2]))
    with pytest.raises(PoleAtOriginError, match="pole at origin"):
        RationalGF(Poly([0, 1]), Poly([0, 0, 1]))
    with pytest.raises(GFError):
        RationalGF(Poly([0, 1]), Poly([]))


def test_hint_validation():
    f = parse_gf("0,1", "1,1", "-1^1")
    assert f.den_roots_hint == ((q("-1"), 1),)
    with pytest.raises(GFError, match="does not reproduce"):
        parse_gf("0,1", "1,1", "1^1")
    with pytest.raises(GFError):
        parse_gf("0,1", "1,2,1", "-1^1")
    f2 = parse_gf("0,1", "2,4,2", "-1^2")  # leading unit 2 is allowed
    assert classify_poles(f2).on_circle[0].multiplicity == 2


def test_classify_examples():
    rep = classify_poles(alternating())
    assert [(p.root, p.multiplicity) for p in rep.on_circle] == [(q("-1"), 1)]
    assert rep.inside == () and rep.outside == ()
    assert rep.admissible()

    rep = classify_poles(half())
    assert [(p.root, p.multiplicity) for p in rep.outside] == [(q("2"), 1)]

    rep = classify_poles(RationalGF(Poly([0, 1]), Poly([1, -1])))
    assert [(p.root, p.multiplicity) for p in rep.on_circle] == [(q("1"), 1)]
    assert not rep.admissible()
    assert any("z = 1" in v for v in rep.violations())


def test_classify_without_hint_is_exact_for_rational_roots():
    f = parse_gf("0,1", "1,1")
    rep = classify_poles(f)
    assert rep.exact and rep.on_circle[0].root == q("-1")
    f = parse_gf("0,3", "25,-30,9")  # (5 - 3z)^2: double pole at 5/3
    rep = classify_poles(f)
    assert rep.exact and rep.outside[0].root == q("5/3") and rep.outside[0].multiplicity == 2


def test_classify_numeric_roots():
    f = parse_gf("0,1", "1,1,1")  # primitive cube roots of unity
    rep = classify_poles(f)
    assert len(rep.on_circle) == 2 and not rep.exact
    assert not rep.admissible()
    assert rep.admissible(allow_multi_pole=True)
    for p in rep.on_circle:
        assert abs(abs(complex(p.root)) - 1) < 1e-12


def test_classify_inside_and_higher_order():
    rep = classify_poles(parse_gf("0,1", "1,-2"))  # pole at 1/2
    assert rep.inside and not rep.admissible()
    rep = classify_poles(parse_gf("0,1", "1,2,1"))  # (1+z)^2
    assert rep.on_circle[0].multiplicity == 2 and not rep.admissible()


def test_laurent_examples():
    lau = laurent_at(alternating(), -1)
    assert (lau.c_minus1, lau.d_minus1, lau.t0, lau.exact) == (q("-1"), q("1"), math.pi, True)
    # f = z/(z - 2i) = 1 + 2i/(z - 2i), so c_minus1 = 2i
    f = RationalGF(Poly([0, 1]), Poly([q("-2i"), 1]))
    assert laurent_at(f, q("2i")).c_minus1 == q("2i")
    with pytest.raises(HigherOrderPoleError, match="higher-order pole unsupported"):
        laurent_at(parse_gf("0,1", "1,2,1"), -1)
    with pytest.raises(GFError):
        laurent_at(RationalGF(Poly([0, 1]), Poly([1, -1])), 1)
    with pytest.raises(GFError):
        laurent_at(alternating(), q("1/2"))


def test_laurent_on_circle_fixture():
    lau = laurent_at(circle(), q("3/5-4/5i"))
    assert lau.d_minus1 == -lau.c_minus1
    assert cmath.isclose(cmath.exp(1j * lau.t0), complex(lau.z0), abs_tol=1e-15)
    assert 0 < lau.t0 < 2 * math.pi


def test_eval_f_prime_examples():
    assert eval_f_prime(alternating(), 1) == q("1/4")
    assert eval_f_prime(RationalGF(Poly([0, 1]), Poly([1])), q("7/3+i")) == 1
    assert eval_f_prime(half(), 0) == q("1/2")
    with pytest.raises(ZeroDivisionError):
        eval_f_prime(alternating(), -1)


@pytest.mark.parametrize("name,kappa", [("z/(1+z)", 0), ("(z/2)/(1-z/2)", 0),
                                        ("circle", 0), ("double", 1)])
def test_coefficient_growth(name, kappa):
    f = {"circle": circle, "double": lambda: parse_gf("0,1", "1,2,1")}.get(name) or FIXTURES[name]
    a = np.array([abs(complex(c)) for c in taylor_coeffs(f(), 200)])
    n = np.arange(1, 201)
    nz = a > 0
    slope, _ = np.polyfit(np.log(n[nz]), np.log(a[nz]), 1)
    assert slope <= kappa + 1e-6
    M = np.max(a / (1 + n) ** kappa)
    assert np.all(a <= M * (1 + n) ** kappa * (1 + 1e-12))


def _g(f, lau, z):
    num, den = f.reduced
    fz = np.polyval(num.to_complex()[::-1], z) / np.polyval(den.to_complex()[::-1], z)
    return fz - complex(lau.c_minus1) / (z - complex(lau.z0))


def _ring(lau, delta):
    """Exact points z0 + delta w with w a rational point close to e^{i theta}."""
    d = Fraction(delta).limit_denominator(10**8)
    for th in np.linspace(0, 2 * np.pi, 13)[:-1]:
        w = ComplexQ(Fraction(math.cos(th)).limit_denominator(10**6),
                     Fraction(math.sin(th)).limit_denominator(10**6))
        yield lau.z0 + w * d


def _g_exact(f, lau, z):
    return complex(f(z) - lau.c_minus1 / (z - lau.z0))


@pytest.mark.parametrize("make", [alternating, circle])
def test_residue_subtraction_removable(make):
    f = make()
    lau = laurent_at(f, classify_poles(f).on_circle[0].root)
    for delta in (1e-3, 1e-5):
        vals = [_g_exact(f, lau, z) for z in _ring(lau, delta)]
        assert max(abs(v - vals[0]) for v in vals) < 1e-6


def test_residue_subtraction_generic():
    # g is not constant here, so it moves by about |g'(z0)| delta around the ring
    f = RationalGF(Poly([0, 1, 2]), Poly([1, 1]) * Poly([3, -1]))
    lau = laurent_at(f, -1)
    for delta in (1e-3, 1e-5):
        vals = [_g_exact(f, lau, z) for z in _ring(lau, delta)]
        assert max(abs(v - vals[0]) for v in vals) < 10 * delta


def test_analytic_part_numeric_matches_exact():
    f = RationalGF(Poly([0, 1, 2]), Poly([1, 1]) * Poly([3, -1]))
    exact = laurent_at(f, -1)
    numeric = LaurentData(complex(exact.z0) + 1e-17j, exact.t0, complex(exact.c_minus1),
                          complex(exact.d_minus1), False)
    r1, q1 = analytic_part(f, exact)
    r2, q2 = analytic_part(f, numeric)
    zs = np.exp(1j * np.linspace(0.1, 6.0, 7))
    P = np.polynomial.polynomial
    assert np.allclose(P.polyval(zs, r1) / P.polyval(zs, q1), P.polyval(zs, r2) / P.polyval(zs, q2),
                       rtol=1e-12, atol=1e-12)
    assert np.allclose(P.polyval(zs, r1) / P.polyval(zs, q1), _g(f, exact, zs), atol=1e-12)


scal = st.builds(ComplexQ, st.integers(-5, 5), st.integers(-5, 5))


@settings(max_examples=40)
@given(scal, scal)
def test_taylor_linearity(alpha, beta):
    f, h = alternating(), half()
    (p1, q1), (p2, q2) = f.reduced, h.reduced
    combo = RationalGF(p1 * q2 * alpha + p2 * q1 * beta, q1 * q2)
    lhs = taylor_coeffs(combo, 12)
    rhs = [alpha * a + beta * b for a, b in zip(taylor_coeffs(f, 12), taylor_coeffs(h, 12))]
    assert lhs == rhs


def test_theta_value_matches_sum_on_polynomial():
    f = RationalGF(Poly([0, 2, 0, 5]), Poly([1]))  # 2z + 5z^3
    for k in range(5):
        assert theta_value(f, k, 1) == 2 + 5 * 3**k


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False,
                                   allow_infinity=False), min_size=1, max_size=6, unique=True))
def test_root_finder_recovers_roots(roots):
    # keep roots apart so the problem is well conditioned
    if min((abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]), default=1) < 0.05:
        return
    coeffs = np.poly(roots)[::-1]
    found = find_roots(list(coeffs))
    for r in roots:
        assert min(abs(r - z) for z in found) < 1e-8


def test_root_finder_cap_reports_residual():
    with pytest.raises(RootFindingError) as info:
        find_roots([1, 0, 0, 0, 0, 0, 0, 1], max_iter=1)
    assert info.value.residual > 1e-12
