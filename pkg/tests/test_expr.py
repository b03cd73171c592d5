"""Tests for expression parsing and exp-polynomial arithmetic."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from bicross.expr import (
    ExprContext,
    ExprError,
    ep_add,
    ep_coord,
    ep_const,
    ep_derive,
    ep_equal,
    ep_eval,
    ep_eval_series,
    ep_mul,
    ep_parse,
    ep_pow,
    ep_print,
    ep_sub,
    parse,
    to_exppoly,
)
from bicross.paramseries import (
    SeriesContext,
    ps_make,
    ps_monomial,
    ps_param,
    ps_scale,
)

ZCTX = SeriesContext(param="z", bmax=2, zmax=8)
KCTX = SeriesContext(param="k", bmax=2, zmax=8, inverted=True)

POINCARE = ExprContext(coords=("Pm", "Pp"), sctx=ZCTX)
KGAL = ExprContext(coords=("P", "H"), sctx=KCTX)


def test_parse_syntax_error():
    with pytest.raises(ExprError):
        parse("1 + * 2")
    with pytest.raises(ExprError):
        parse("(1 + 2")
    with pytest.raises(ExprError):
        parse("2 $ 3")
    with pytest.raises(ExprError):
        parse("1 2")


def test_unknown_symbol():
    with pytest.raises(ExprError, match="unknown symbol"):
        ep_parse("Pz + 1", POINCARE)


def test_nonlinear_exp_rejected():
    with pytest.raises(ExprError, match="nonlinear exp"):
        ep_parse("exp(P*P)", KGAL)
    with pytest.raises(ExprError, match="nonlinear exp"):
        ep_parse("exp(exp(P))", KGAL)
    with pytest.raises(ExprError):
        ep_parse("exp(1 + P)", KGAL)  # constant part of parameter order 0


def test_division_rules():
    f = ep_parse("P^2/(2*k)", KGAL)
    assert len(f.terms) == 1
    t = f.terms[0]
    assert t.powers == (2, 0)
    # 1/(2k) is (1/2) * internal-variable^1 in the inverted context
    assert t.coeff == ps_monomial(KCTX, Fraction(1, 2), 1)
    with pytest.raises(ExprError):
        ep_parse("1/(1+z)", POINCARE)
    with pytest.raises(ExprError):
        ep_parse("1/Pm", POINCARE)
    with pytest.raises(ExprError):
        ep_parse("1/exp(-2*z*Pp)", POINCARE)


def test_two_term_example():
    # -(1/(4*z))*(1 - exp(-4*z*P)) over Galilei coordinates (H, P)
    ctx = ExprContext(coords=("H", "P"), sctx=ZCTX)
    f = ep_parse("-(1/(4*z))*(1 - exp(-4*z*P))", ctx)
    assert len(f.terms) == 2
    plain = [t for t in f.terms if all(w.is_zero() for w in t.expw)]
    dressed = [t for t in f.terms if not all(w.is_zero() for w in t.expw)]
    assert len(plain) == len(dressed) == 1
    assert plain[0].coeff == ps_make(ZCTX, {-1: Fraction(-1, 4)})
    assert dressed[0].coeff == ps_make(ZCTX, {-1: Fraction(1, 4)})
    assert dressed[0].expw[1] == ps_scale(ps_param(ZCTX), -4)


def test_exp_merge_is_eager():
    f = ep_parse("exp(-2*z*Pp)*exp(-2*z*Pp)", POINCARE)
    assert len(f.terms) == 1
    assert f.terms[0].expw[1] == ps_scale(ps_param(ZCTX), -4)
    assert ep_equal(f, ep_parse("exp(-4*z*Pp)", POINCARE))


def test_exp_of_positive_order_constant():
    # exp(z + Pm): the constant part z is series-expanded into the coefficient
    f = ep_parse("exp(z + Pm)", POINCARE)
    assert len(f.terms) == 1
    t = f.terms[0]
    assert t.expw[0] == ps_make(ZCTX, {0: 1})
    assert t.coeff.coeff(0) == 1 and t.coeff.coeff(1) == 1
    assert t.coeff.coeff(2) == Fraction(1, 2)


def test_derive_examples():
    ctx = ExprContext(coords=("P", "H"), sctx=KCTX)
    f = ep_parse("P*exp(H/(2*k))", ctx)
    dH = ep_derive(f, 1)
    assert ep_equal(dH, ep_parse("(1/(2*k))*P*exp(H/(2*k))", ctx))
    dP = ep_derive(f, 0)
    assert ep_equal(dP, ep_parse("exp(H/(2*k))", ctx))
    g = ep_parse("Pm^3", POINCARE)
    assert ep_equal(ep_derive(g, 0), ep_parse("3*Pm^2", POINCARE))
    assert ep_derive(g, 1).is_zero()


def test_print_roundtrip_catalog_strings():
    samples = [
        (POINCARE, "2*Pm"),
        (POINCARE, "(1/z)*(exp(-2*z*Pp) - 1)"),
        (POINCARE, "-(1/(4*z))*(1 - exp(-4*z*Pp))"),
        (POINCARE, "Pm*(exp(2*z*Pp) - 1)"),
        (KGAL, "P^2/(2*k)"),
        (KGAL, "P*exp(H/(2*k))"),
        (KGAL, "-P"),
    ]
    for ctx, text in samples:
        f = ep_parse(text, ctx)
        assert ep_equal(ep_parse(ep_print(f), ctx), f), text


def test_print_golden():
    f = ep_parse("P^2/(2*k)", KGAL)
    assert ep_print(f) == "1/2*k^-1*P^2"
    g = ep_parse("-2*Pm + Pm*Pp^2", POINCARE)
    assert ep_print(g) == "-2*Pm + Pm*Pp^2"
    assert ep_print(ep_parse("0", POINCARE)) == "0"


coord_polys = st.integers(min_value=0, max_value=2)


@st.composite
def random_exppoly(draw, ctx=POINCARE):
    """Small random exp-polynomials with exponential weights from the catalog shape."""
    nterms = draw(st.integers(min_value=0, max_value=3))
    out = None
    for _ in range(nterms):
        c = Fraction(draw(st.integers(-6, 6)), draw(st.integers(1, 4)))
        d = draw(st.integers(0, 2))
        term = ep_const(ctx, ps_make(ctx.sctx, {d: c}))
        for j in range(len(ctx.coords)):
            p = draw(st.integers(0, 2))
            term = ep_mul(term, ep_pow(ep_coord(ctx, j), p))
        if draw(st.booleans()):
            w = draw(st.integers(-2, 2))
            term = ep_mul(term, ep_parse(f"exp({w}*z*Pp)", ctx))
        out = term if out is None else ep_add(out, term)
    return out if out is not None else ep_parse("0", ctx)


@given(random_exppoly(), random_exppoly())
def test_derive_leibniz(f, g):
    for j in range(2):
        lhs = ep_derive(ep_mul(f, g), j)
        rhs = ep_add(ep_mul(ep_derive(f, j), g), ep_mul(f, ep_derive(g, j)))
        assert ep_equal(lhs, rhs)


@given(random_exppoly(), random_exppoly())
def test_derive_linearity(f, g):
    for j in range(2):
        assert ep_equal(
            ep_derive(ep_add(f, g), j), ep_add(ep_derive(f, j), ep_derive(g, j))
        )


@given(random_exppoly(), random_exppoly())
def test_eval_multiplicative(f, g):
    pt = (0.7, -0.4)
    z = 0.3
    lhs = ep_eval(ep_mul(f, g), pt, z)
    rhs = ep_eval(f, pt, z) * ep_eval(g, pt, z)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_eval_against_sympy_oracle():
    text = "-(1/(4*z))*(1 - exp(-4*z*Pp)) + 2*Pm*Pp"
    f = ep_parse(text, POINCARE)
    Pm, Pp, z = sympy.symbols("Pm Pp z")
    expr = sympy.sympify(text, locals={"Pm": Pm, "Pp": Pp, "z": z})
    for pt, zv in [((0.5, -0.25), 0.3), ((1.0, 0.75), 0.17)]:
        mine = ep_eval(f, pt, zv)
        ref = float(expr.subs({Pm: pt[0], Pp: pt[1], z: zv}))
        assert mine == pytest.approx(ref, rel=1e-12)


def test_eval_series_exact():
    ctx = ExprContext(coords=("P", "H"), sctx=KCTX)
    f = ep_parse("P*exp(H/(2*k))", ctx)
    s = ep_eval_series(f, (Fraction(2), Fraction(1)))
    # 2 * exp(u/2) with u = 1/k: coefficients 2 * (1/2)^n / n!
    assert s.coeff(0) == 2
    assert s.coeff(1) == 1
    assert s.coeff(2) == Fraction(1, 4)
    with pytest.raises(ValueError):
        # weight of parameter order 0 cannot stay symbolic
        ep_eval_series(ep_parse("exp(Pm)", POINCARE), (Fraction(1), Fraction(0)))


def test_eval_numeric_vs_series():
    ctx = ExprContext(coords=("P", "H"), sctx=KCTX)
    f = ep_parse("P*exp(H/(2*k))", ctx)
    s = ep_eval_series(f, (Fraction(2), Fraction(1)))
    from bicross.paramseries import ps_eval

    kappa = 4.0
    direct = ep_eval(f, (2.0, 1.0), kappa)
    via_series = ps_eval(s, kappa)
    # series truncated at internal degree 8; error ~ (1/(2*4))^9/9!
    assert abs(direct - via_series) < 1e-9
    assert direct == pytest.approx(2.0 * math.exp(1.0 / 8.0), rel=1e-14)
