"""Tests for truncated rational Laurent series in the deformation parameter."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bicross.paramseries import (
    EvalDomainError,
    ParamSeries,
    SeriesContext,
    SeriesWindowError,
    ps_add,
    ps_div_monomial,
    ps_equal,
    ps_eval,
    ps_eval_exact,
    ps_exp_of,
    ps_exp_series,
    ps_make,
    ps_monomial,
    ps_mul,
    ps_neg,
    ps_one,
    ps_param,
    ps_pow,
    ps_rational,
    ps_restrict,
    ps_scale,
    ps_str,
    ps_sub,
    ps_zero,
)

CTX = SeriesContext(param="z", bmax=2, zmax=8)
ICTX = SeriesContext(param="k", bmax=2, zmax=8, inverted=True)


def series(ctx=CTX, **degree_coeffs):
    return ps_make(ctx, {int(k[1:]): Fraction(v) for k, v in degree_coeffs.items()})


@st.composite
def random_series(draw, ctx=CTX, min_degree=0, max_degree=4):
    n = draw(st.integers(min_value=0, max_value=3))
    coeffs = {}
    for _ in range(n):
        d = draw(st.integers(min_value=min_degree, max_value=max_degree))
        num = draw(st.integers(min_value=-9, max_value=9))
        den = draw(st.integers(min_value=1, max_value=9))
        coeffs[d] = coeffs.get(d, Fraction(0)) + Fraction(num, den)
    return ps_make(ctx, coeffs)


def test_construction_drops_zeros_and_sorts():
    s = ps_make(CTX, {3: 1, 1: 0, 0: Fraction(-1, 2)})
    assert s.terms == ((0, Fraction(-1, 2)), (3, Fraction(1)))
    assert not s.truncated


def test_construction_truncates_above_cap_with_flag():
    s = ps_make(CTX, {9: 1, 0: 1})
    assert s.terms == ((0, Fraction(1)),)
    assert s.truncated


def test_construction_rejects_below_floor():
    with pytest.raises(SeriesWindowError):
        ps_make(CTX, {-3: 1})
    # inside the floor is fine
    assert ps_make(CTX, {-2: 1}).terms == ((-2, Fraction(1)),)


def test_exp_series_example():
    # second exponential term of -2z is (-2z)^2/2! = 2 z^2
    s = ps_exp_series(ps_scale(ps_param(CTX), -2), 2)
    assert s == ps_monomial(CTX, 2, 2)


def test_exp_of_requires_positive_valuation():
    with pytest.raises(ValueError):
        ps_exp_of(ps_one(CTX))
    e = ps_exp_of(ps_scale(ps_param(CTX), -2))
    # 1 - 2z + 2z^2 - 4/3 z^3 ...
    assert e.coeff(0) == 1
    assert e.coeff(1) == -2
    assert e.coeff(2) == 2
    assert e.coeff(3) == Fraction(-4, 3)
    assert e.truncated


def test_exp_of_matches_mpmath():
    e = ps_exp_of(ps_scale(ps_param(CTX), -2))
    z = 0.17
    approx = ps_eval(e, z)
    exact = mpmath.e ** (-2 * z)
    # truncated at z^8: error ~ (2z)^9/9!
    assert abs(approx - float(exact)) < (2 * z) ** 9


def test_param_display_in_inverted_context():
    p = ps_param(ICTX)  # the displayed parameter k has internal degree -1
    assert p.terms == ((-1, Fraction(1)),)
    u = ps_monomial(ICTX, 1, 1)  # internal variable = 1/k
    assert ps_str(u) == "k^-1"
    assert ps_str(p) == "k"


def test_eval_inverted_context():
    s = ps_make(ICTX, {0: 1, 1: Fraction(1, 2)})  # 1 + (1/2)(1/k)
    assert ps_eval_exact(s, Fraction(2)) == Fraction(5, 4)
    with pytest.raises(EvalDomainError):
        ps_eval(s, 0)


def test_eval_negative_degrees():
    s = ps_make(CTX, {-1: 1, 1: 1})  # 1/z + z
    assert ps_eval_exact(s, Fraction(1, 2)) == Fraction(5, 2)
    with pytest.raises(EvalDomainError):
        ps_eval(s, 0)
    # no negative degrees: z = 0 is fine
    assert ps_eval(series(d0=3, d2=1), 0) == 3.0


def test_eval_horner_matches_direct_sum():
    s = series(d0=Fraction(1, 3), d1=-2, d4=Fraction(7, 5))
    for z in (0.0, 0.25, -1.5, 3.0):
        direct = sum(float(c) * z**d for d, c in s.terms)
        assert ps_eval(s, z) == pytest.approx(direct, rel=1e-14, abs=1e-14)


def test_str_golden():
    assert ps_str(ps_zero(CTX)) == "0"
    assert ps_str(series(d0=Fraction(3, 2), d2=-1, d3=Fraction(1, 3))) == "3/2 - z^2 + 1/3*z^3"
    assert ps_str(ps_monomial(CTX, -2, 1)) == "-2*z"
    assert ps_str(ps_make(CTX, {-1: Fraction(-1, 4)})) == "-1/4*z^-1"


def test_restrict_and_windowed_equality():
    a = series(d0=1, d3=5)
    b = series(d0=1, d3=7)
    assert not ps_equal(a, b)
    assert ps_equal(a, b, zcap=2)
    assert ps_restrict(a, 2) == series(d0=1)


def test_division_by_parameter_monomial():
    a = series(d1=4, d2=-8)
    q = ps_div_monomial(a, ps_scale(ps_param(CTX), 4))
    assert q == series(d0=1, d1=-2)
    with pytest.raises(ValueError):
        ps_div_monomial(a, series(d0=1, d1=1))


def test_division_can_hit_window_floor():
    a = series(d0=1)
    with pytest.raises(SeriesWindowError):
        ps_div_monomial(ps_div_monomial(a, ps_param(CTX)), ps_pow(ps_param(CTX), 2))


@given(random_series(), random_series(), random_series())
def test_ring_axioms(a, b, c):
    assert ps_add(a, b) == ps_add(b, a)
    assert ps_mul(a, b) == ps_mul(b, a)
    assert ps_add(ps_add(a, b), c) == ps_add(a, ps_add(b, c))
    assert ps_mul(ps_mul(a, b), c) == ps_mul(a, ps_mul(b, c))
    assert ps_mul(a, ps_add(b, c)) == ps_add(ps_mul(a, b), ps_mul(a, c))
    assert ps_add(a, ps_neg(a)) == ps_zero(CTX)
    assert ps_sub(a, b) == ps_add(a, ps_neg(b))
    assert ps_mul(a, ps_one(CTX)) == a


@given(random_series(), random_series())
def test_eval_is_ring_homomorphism(a, b):
    z = Fraction(3, 7)
    assert ps_eval_exact(ps_mul(a, b), z) == ps_eval_exact(a, z) * ps_eval_exact(b, z)
    assert ps_eval_exact(ps_add(a, b), z) == ps_eval_exact(a, z) + ps_eval_exact(b, z)


@given(random_series())
def test_truncation_flag_propagates(a):
    spiked = ps_add(a, ps_make(CTX, {9: 1}))
    assert spiked.truncated
    assert ps_mul(spiked, ps_one(CTX)).truncated
    # flag never participates in equality
    assert spiked == ps_make(CTX, dict(a.terms))


def test_mul_respects_cap():
    a = ps_monomial(CTX, 1, 5)
    b = ps_monomial(CTX, 1, 4)
    prod = ps_mul(a, b)
    assert prod.is_zero()
    assert prod.truncated


def test_pow_negative_monomial():
    p = ps_pow(ps_scale(ps_param(CTX), 2), -1)
    assert p == ps_make(CTX, {-1: Fraction(1, 2)})
