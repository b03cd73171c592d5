"""Tests for the noncommutative normal-ordering layer."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bicross.expr import ExprError
from bicross.ncalg import (
    AlgebraSpec,
    GenInfo,
    SpecError,
    StraighteningError,
    adjoint_power_expand,
    antipode_mono,
    apply_coproduct,
    apply_counit,
    counit_mono,
    delta_mono,
    nc_add,
    nc_const,
    nc_gen,
    nc_make,
    nc_mul,
    nc_one,
    nc_pow,
    nc_restrict,
    nc_scale,
    nc_str,
    nc_zero,
    normal_order,
    parse_algfile,
    parse_nc,
    parse_tensor_sum,
    primitive_spec,
    tensor_expand_slot,
    tensor_map_slot,
    tensor_mul,
    tensor_multiply_out,
    tensor_restrict,
    tensor_scalar_slot,
    tensor_str,
    write_algfile,
)
from bicross.paramseries import SeriesContext, ps_add, ps_make, ps_one, ps_rational

# ---------------------------------------------------------------------------
# straightening goldens
# ---------------------------------------------------------------------------


class TestNormalOrder:
    def test_kappa_single_swap(self, kappa):
        assert nc_str(normal_order(kappa, ["H", "K"])) == "K*H - P"

    def test_kappa_double_swap(self, kappa):
        out = normal_order(kappa, ["H", "K", "K"])
        assert nc_str(out) == "K^2*H - 2*K*P - 1/2*k^-1*P^2"

    def test_poincare_boost_past_pm(self, poincare):
        assert nc_str(normal_order(poincare, ["Pm", "K"])) == "K*Pm + 2*Pm"

    def test_poincare_boost_past_pp_exact(self, poincare):
        out = normal_order(poincare, ["Pp", "K"])
        expected = {(1, 0, 1): ps_one(poincare.sctx)}
        for n in range(1, 9):
            coeff = Fraction((-2) ** n, math.factorial(n))
            expected[(0, 0, n)] = ps_make(poincare.sctx, [(n - 1, coeff)])
        assert out.terms == expected
        assert out.truncated

    def test_poincare_boost_rule_sympy_oracle(self, poincare):
        z, t = sympy.symbols("z t")
        series = sympy.series((sympy.exp(-2 * z * t) - 1) / z, t, 0, 9).removeO()
        poly = sympy.Poly(sympy.expand(series), t)
        rule = poincare.rule_value(0, 2)
        for n in range(1, 9):
            got = rule.terms[(0, 0, n)]
            want = poly.coeff_monomial(t**n) / z ** (n - 1)
            assert got.coeff(n - 1) == Fraction(str(sympy.nsimplify(want)))

    def test_galilei_cross_rule_coefficients(self, galilei):
        rule = galilei.rule_value(0, 1)
        for n in range(1, 9):
            coeff = Fraction((-4) ** n, 4 * math.factorial(n))
            assert rule.terms[(0, 0, n)] == ps_make(galilei.sctx, [(n - 1, coeff)])

    def test_written_order_matters(self, poincare):
        forward = parse_nc("Pp*K", poincare)
        reverse = parse_nc("K*Pp", poincare)
        assert forward == normal_order(poincare, ["Pp", "K"])
        assert reverse == normal_order(poincare, ["K", "Pp"])
        assert forward != reverse

    def test_empty_word_is_unit(self, kappa):
        assert normal_order(kappa, []) == nc_one(kappa)

    def test_split_product_consistency_fixed(self, kappa):
        word = ["H", "P", "K", "H", "K"]
        whole = normal_order(kappa, word)
        for cut in range(len(word) + 1):
            left = normal_order(kappa, word[:cut])
            right = normal_order(kappa, word[cut:])
            assert nc_mul(left, right) == whole

    @settings(max_examples=40, deadline=None)
    @given(
        word=st.lists(st.integers(min_value=0, max_value=2), max_size=6),
        cut=st.integers(min_value=0, max_value=6),
    )
    def test_split_product_consistency_random(self, dual_poincare, word, cut):
        alg = dual_poincare
        cut = min(cut, len(word))
        whole = normal_order(alg, word)
        split = nc_mul(normal_order(alg, word[:cut]), normal_order(alg, word[cut:]))
        assert split == whole

    def test_associativity_mixed(self, kappa, dual_galilei):
        for alg in (kappa, dual_galilei):
            a = nc_add(nc_gen(alg, 2), nc_scale(nc_gen(alg, 0), ps_rational(alg.sctx, 2)))
            b = nc_mul(nc_gen(alg, 2), nc_gen(alg, 1))
            c = nc_add(nc_one(alg), nc_gen(alg, 0))
            assert nc_mul(nc_mul(a, b), c) == nc_mul(a, nc_mul(b, c))

    def test_step_limit_trips(self, alg_texts):
        alg = parse_algfile(alg_texts["galilei-kappa"])
        alg.step_limit = alg._steps  # anything new now goes over
        with pytest.raises(StraighteningError):
            normal_order(alg, ["H", "H", "K", "K", "H"])


class TestAdjointExpansion:
    def test_matches_direct_product_all_pairs(self, kappa, poincare):
        for alg in (kappa, poincare):
            for i in range(alg.nvars):
                a = nc_gen(alg, i)
                for j in range(alg.nvars):
                    ap = nc_gen(alg, j)
                    for m in range(5):
                        left = adjoint_power_expand(a, ap, m, "left")
                        assert left == nc_mul(nc_pow(a, m), ap)
                        right = adjoint_power_expand(a, ap, m, "right")
                        assert right == nc_mul(ap, nc_pow(a, m))

    def test_composite_element(self, kappa):
        a = nc_add(nc_gen(kappa, 0), nc_gen(kappa, 1))
        ap = nc_mul(nc_gen(kappa, 2), nc_gen(kappa, 1))
        assert adjoint_power_expand(a, ap, 3, "left") == nc_mul(nc_pow(a, 3), ap)

    def test_bad_side_rejected(self, kappa):
        with pytest.raises(ValueError):
            adjoint_power_expand(nc_gen(kappa, 0), nc_gen(kappa, 1), 2, "middle")


# ---------------------------------------------------------------------------
# tensors and structure maps
# ---------------------------------------------------------------------------


class TestTensor:
    def test_primitive_square_binomial(self):
        sctx = SeriesContext(param="z", bmax=2, zmax=8)
        free = primitive_spec("free-pair", ["X1", "X2"], sctx)
        d = delta_mono(free, (2, 0))
        one = ps_one(sctx)
        assert d.terms == {
            ((2, 0), (0, 0)): one,
            ((1, 0), (1, 0)): ps_rational(sctx, 2),
            ((0, 0), (2, 0)): one,
        }

    def test_primitive_mixed_product(self):
        sctx = SeriesContext(param="z", bmax=2, zmax=8)
        free = primitive_spec("free-pair", ["X1", "X2"], sctx)
        d = delta_mono(free, (1, 1))
        one = ps_one(sctx)
        assert d.terms == {
            ((1, 1), (0, 0)): one,
            ((1, 0), (0, 1)): one,
            ((0, 1), (1, 0)): one,
            ((0, 0), (1, 1)): one,
        }

    def test_multiply_out(self):
        sctx = SeriesContext(param="z", bmax=2, zmax=8)
        free = primitive_spec("free-pair", ["X1", "X2"], sctx)
        folded = tensor_multiply_out(delta_mono(free, (2, 0)))
        assert folded == nc_scale(
            nc_pow(nc_gen(free, 0), 2), ps_rational(sctx, 4)
        )

    def test_coassociativity_instance(self):
        sctx = SeriesContext(param="z", bmax=2, zmax=8)
        free = primitive_spec("free-pair", ["X1", "X2"], sctx)
        d = delta_mono(free, (1, 1))
        left = tensor_expand_slot(d, 0, lambda m: delta_mono(free, m))
        right = tensor_expand_slot(d, 1, lambda m: delta_mono(free, m))
        assert left == right

    def test_counit_slot_recovers_element(self, kappa):
        for name in kappa.names:
            g = nc_gen(kappa, name)
            d = apply_coproduct(g)
            out = tensor_scalar_slot(d, 0, lambda m: counit_mono(kappa, m))
            assert out == g

    def test_restrict_total_degree(self, kappa):
        d = apply_coproduct(nc_gen(kappa, "K"))
        small = tensor_restrict(d, maxdeg=2)
        assert set(small.terms) == {
            ((1, 0, 0), (0, 0, 0)),
            ((0, 0, 0), (1, 0, 0)),
            ((0, 0, 1), (1, 0, 0)),
        }

    def test_antipode_axiom_instance_kappa(self, kappa):
        # m(S (x) id) Delta(g) == counit(g) * 1 == 0 for every generator.
        for name in kappa.names:
            d = apply_coproduct(nc_gen(kappa, name))
            lhs = tensor_multiply_out(
                tensor_map_slot(d, 0, lambda m: antipode_mono(kappa, m))
            )
            assert nc_restrict(lhs, maxdeg=8) == nc_zero(kappa)

    def test_antipode_axiom_instance_dual(self, dual_poincare):
        alg = dual_poincare
        for name in alg.names:
            d = apply_coproduct(nc_gen(alg, name))
            lhs = tensor_multiply_out(
                tensor_map_slot(d, 0, lambda m: antipode_mono(alg, m))
            )
            rhs = tensor_multiply_out(
                tensor_map_slot(d, 1, lambda m: antipode_mono(alg, m))
            )
            assert nc_restrict(lhs, maxdeg=8) == nc_zero(alg)
            assert nc_restrict(rhs, maxdeg=8) == nc_zero(alg)

    def test_counit_application(self, kappa):
        el = nc_add(normal_order(kappa, ["H", "K"]), nc_const(kappa, ps_rational(kappa.sctx, 7)))
        assert apply_counit(el) == ps_rational(kappa.sctx, 7)


# ---------------------------------------------------------------------------
# parsing, printing, files
# ---------------------------------------------------------------------------


class TestRoundTrips:
    @pytest.mark.parametrize(
        "name",
        [
            "poincare-null-plane",
            "poincare-null-plane-dual",
            "galilei-nonstandard",
            "galilei-nonstandard-dual",
            "galilei-kappa",
            "galilei-kappa-dual",
        ],
    )
    def test_algfile_write_parse(self, name, alg_texts):
        spec = parse_algfile(alg_texts[name])
        spec2 = parse_algfile(write_algfile(spec))
        assert spec2.name == spec.name
        assert spec2.gens == spec.gens
        assert spec2.sctx == spec.sctx
        assert spec2.rules == spec.rules
        assert spec2.coproduct == spec.coproduct
        assert spec2.counit == spec.counit
        assert spec2.antipode == spec.antipode
        assert spec2.style == spec.style

    def test_element_print_parse(self, kappa, poincare):
        for alg, word in ((kappa, ["H", "K", "K"]), (poincare, ["Pp", "K", "Pm"])):
            el = normal_order(alg, word)
            assert parse_nc(nc_str(el), alg) == el

    def test_tensor_print_parse(self, kappa, dual_galilei):
        for alg, name in ((kappa, "K"), (dual_galilei, "x")):
            d = apply_coproduct(nc_gen(alg, name))
            assert parse_tensor_sum(tensor_str(d), alg) == d

    def test_styles_detected(self, all_algebras):
        expected = {
            "poincare-null-plane": "primal",
            "poincare-null-plane-dual": "dual",
            "galilei-nonstandard": "primal",
            "galilei-nonstandard-dual": "dual",
            "galilei-kappa": "primal",
            "galilei-kappa-dual": "dual",
        }
        for name, alg in all_algebras.items():
            assert alg.style == expected[name], name


class TestValidation:
    def test_sector_order_enforced(self):
        bad = "[algebra]\nname = bad\nparam = z\n\n[generators]\nP : L\nK : K\n"
        with pytest.raises(SpecError, match="precede"):
            parse_algfile(bad)

    def test_cross_rule_constant_rejected(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("H, K = -P", "H, K = 1 - P")
        with pytest.raises(SpecError, match="constant"):
            parse_algfile(bad)

    def test_cross_rule_mixed_sectors_rejected(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("H, K = -P", "H, K = K")
        with pytest.raises(SpecError, match="admissible"):
            parse_algfile(bad)

    def test_same_sector_higher_index_rejected(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("H, P = 0", "H, P = H")
        with pytest.raises(SpecError, match="index"):
            parse_algfile(bad)

    def test_same_sector_escape_rejected(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("H, P = 0", "H, P = K^2")
        with pytest.raises(SpecError, match="sector"):
            parse_algfile(bad)

    def test_monotone_degree_one_rejected(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("H, P = 0", "H, P = P")
        with pytest.raises(SpecError, match="degree-1"):
            parse_algfile(bad)

    def test_relation_order_dependency_detected(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace(
            "P, K = P^2/(2*k)\nH, K = -P",
            "P, K = -H*K + K*H\nH, K = -P",
        )
        with pytest.raises(SpecError, match="dependency order"):
            parse_algfile(bad)

    def test_counit_must_be_scalar(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("[counit]\nK = 0", "[counit]\nK = P")
        with pytest.raises(SpecError, match="scalar"):
            parse_algfile(bad)

    def test_relation_key_must_be_ordered(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("H, K = -P", "K, H = P")
        with pytest.raises(SpecError, match="later generator"):
            parse_algfile(bad)

    def test_generator_param_collision(self, alg_texts):
        bad = alg_texts["galilei-kappa"].replace("P : L", "k : L")
        with pytest.raises(SpecError, match="parameter"):
            parse_algfile(bad)

    def test_missing_coproduct_reported(self):
        sctx = SeriesContext(param="z", bmax=2, zmax=8)
        alg = AlgebraSpec(name="bare", gens=(GenInfo("a", "K"),), sctx=sctx)
        with pytest.raises(SpecError, match="coproduct"):
            delta_mono(alg, (1,))

    def test_exp_argument_restrictions(self, kappa, poincare):
        with pytest.raises(ExprError, match="single generator"):
            parse_nc("exp(P*H)", kappa)
        with pytest.raises(ExprError, match="mixes"):
            parse_nc("exp(P + H)", kappa)
        with pytest.raises(ExprError, match="single generator"):
            parse_nc("exp(Pp^2)", poincare)

    def test_division_restrictions(self, kappa, poincare):
        with pytest.raises(ExprError, match="division"):
            parse_nc("P/(1 + k)", kappa)
        with pytest.raises(ExprError, match="division"):
            parse_nc("Pm/Pp", poincare)
        with pytest.raises(ExprError, match="negative powers"):
            parse_nc("K^-2", poincare)
        el = parse_nc("z^-1*Pm", poincare)
        assert el.terms == {(0, 1, 0): ps_make(poincare.sctx, [(-1, 1)])}


# ---------------------------------------------------------------------------
# random element properties
# ---------------------------------------------------------------------------


def _coeff_strategy():
    return st.builds(
        Fraction,
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=1, max_value=3),
    )


def _element_strategy():
    mono = st.tuples(
        st.integers(min_value=0, max_value=1),
        st.integers(min_value=0, max_value=1),
        st.integers(min_value=0, max_value=2),
    )
    pair = st.tuples(mono, st.tuples(st.integers(min_value=0, max_value=1), _coeff_strategy()))
    return st.lists(pair, min_size=0, max_size=3)


def _build_element(alg, data):
    terms = {}
    for mono, (deg, coeff) in data:
        series = ps_make(alg.sctx, [(deg, coeff)])
        terms[mono] = ps_add(terms[mono], series) if mono in terms else series
    return nc_make(alg, terms)


class TestRandomProperties:
    @settings(max_examples=30, deadline=None)
    @given(a=_element_strategy(), b=_element_strategy(), c=_element_strategy())
    def test_mul_associative(self, kappa, a, b, c):
        alg = kappa
        ea, eb, ec = (_build_element(alg, d) for d in (a, b, c))
        assert nc_mul(nc_mul(ea, eb), ec) == nc_mul(ea, nc_mul(eb, ec))

    @settings(max_examples=30, deadline=None)
    @given(a=_element_strategy(), b=_element_strategy())
    def test_coproduct_is_algebra_map(self, kappa, a, b):
        alg = kappa
        ea, eb = _build_element(alg, a), _build_element(alg, b)
        lhs = apply_coproduct(nc_mul(ea, eb))
        rhs = tensor_mul(apply_coproduct(ea), apply_coproduct(eb))
        assert tensor_restrict(lhs, maxdeg=8, zorder=8) == tensor_restrict(
            rhs, maxdeg=8, zorder=8
        )

    @settings(max_examples=30, deadline=None)
    @given(a=_element_strategy())
    def test_counit_vanishes_on_augmentation(self, kappa, a):
        alg = kappa
        ea = _build_element(alg, a)
        unit_part = ea.terms.get((0, 0, 0))
        eps = apply_counit(ea)
        if unit_part is None:
            assert eps.is_zero()
        else:
            assert eps == unit_part
