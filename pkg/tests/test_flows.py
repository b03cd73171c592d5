"""Flow machinery: induced fields, formal series, integration, strata.

The closed-form flow maps shipped by the catalog act as independent oracles
twice over: symbolically (their Taylor coefficients in the flow time,
extracted with sympy, must equal the engine's iterated-derivation series
exactly) and numerically (fixed-step integration must land on them within
tight tolerances on sampled grids).
"""

from __future__ import annotations

import itertools
import math

import pytest
import sympy as sp

from bicross.bicrossprod import BicrossData
from bicross.catalog import ENTRY_NAMES
from bicross.expr import ExprContext, ep_coord, ep_parse, ep_sub, ep_zero
from bicross.flows import (
    FlowDomainError,
    FlowSeries,
    VectorField,
    apply_field,
    check_first_integral,
    classify_point,
    field_from_action,
    flow_compose,
    flow_map,
    flow_numeric,
    flow_series,
    flow_time_sum,
    identity_flow,
    trajectory_csv,
)
from bicross.ncalg import parse_nc

# Five-point initial grids inside every flow's domain for s up to 0.5 at the
# default parameter values (z = 0.3, kappa = 1.0).
GRIDS = {
    "poincare-null-plane": [
        (1.0, -0.5),
        (-0.8, 0.4),
        (0.5, 0.2),
        (2.0, -1.0),
        (-1.5, -0.25),
    ],
    "galilei-nonstandard": [
        (0.0, 1.0),
        (1.0, -1.0),
        (-0.5, 0.5),
        (2.0, 2.0),
        (-1.0, -0.3),
    ],
    "galilei-kappa": [
        (1.0, 0.0),
        (0.5, 1.0),
        (-1.0, 0.5),
        (2.0, -1.0),
        (-0.4, 2.0),
    ],
}

FLOW_TIMES = (0.1, 0.25, 0.5)


def ep_to_sympy(ep, coord_syms, param_sym):
    """Exact translation of an exp-polynomial into a sympy expression."""
    inverted = ep.ctx.sctx.inverted

    def series_to_sym(ps):
        total = sp.Integer(0)
        for d, c in ps.terms:
            expo = -d if inverted else d
            total += sp.Rational(c.numerator, c.denominator) * param_sym**expo
        return total

    total = sp.Integer(0)
    for t in ep.terms:
        term = series_to_sym(t.coeff)
        for x, p in zip(coord_syms, t.powers):
            term *= x**p
        arg = sp.Integer(0)
        for x, w in zip(coord_syms, t.expw):
            if w.terms:
                arg += series_to_sym(w) * x
        if arg != 0:
            term *= sp.exp(arg)
        total += term
    return total


def sympy_closed_flow(name):
    """(flow-time symbol, coordinate symbols, param symbol, expressions)."""
    s = sp.Symbol("s")
    if name == "poincare-null-plane":
        z = sp.Symbol("z", positive=True)
        am, ap = sp.symbols("am ap", real=True)
        exprs = [
            am * sp.exp(2 * s),
            sp.log(1 - sp.exp(-2 * s) * (1 - sp.exp(2 * z * ap))) / (2 * z),
        ]
        return s, (am, ap), z, exprs
    if name == "galilei-nonstandard":
        z = sp.Symbol("z", positive=True)
        b, a = sp.symbols("b a", real=True)  # coordinates (H, P)
        exprs = [b - s * (1 - sp.exp(-4 * z * a)) / (4 * z), a]
        return s, (b, a), z, exprs
    kap = sp.Symbol("k", positive=True)
    a, b = sp.symbols("a b", real=True)  # coordinates (P, H)
    exprs = [
        a / (1 - s * a / (2 * kap)),
        b + 2 * kap * sp.log(1 - s * a / (2 * kap)),
    ]
    return s, (a, b), kap, exprs


def entry_field(entry) -> VectorField:
    return field_from_action(entry.coupling, 0)


class TestField:
    def test_components_kappa(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-kappa"])
        assert X.ctx.coords == ("P", "H")
        assert X.components[0] == ep_parse("P^2/(2*k)", X.ctx)
        assert X.components[1] == ep_parse("-P", X.ctx)

    def test_components_galilei(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-nonstandard"])
        assert X.ctx.coords == ("H", "P")
        assert X.components[0] == ep_parse("-(1 - exp(-4*z*P))/(4*z)", X.ctx)
        assert X.components[1].is_zero()

    def test_components_poincare(self, catalog_entries):
        X = entry_field(catalog_entries["poincare-null-plane"])
        assert X.ctx.coords == ("Pm", "Pp")
        assert X.components[0] == ep_parse("2*Pm", X.ctx)
        assert X.components[1] == ep_parse("(exp(-2*z*Pp) - 1)/z", X.ctx)

    def test_zero_action_gives_zero_field(self, coupling_data):
        base = coupling_data["poincare-null-plane"]
        data = BicrossData(
            name="tensor-product",
            kspec=base.kspec,
            lspec=base.lspec,
            action={},
            dressing={},
        )
        X = field_from_action(data, "K")
        assert all(comp.is_zero() for comp in X.components)

    def test_unknown_generator_rejected(self, coupling_data):
        with pytest.raises(ValueError):
            field_from_action(coupling_data["galilei-kappa"], 3)

    def test_truncated_action_value_rejected(self, coupling_data):
        base = coupling_data["poincare-null-plane"]
        expanded = parse_nc("(exp(-2*z*Pp) - 1)/z", base.lspec)
        assert expanded.truncated
        data = BicrossData(
            name="no-closed-form",
            kspec=base.kspec,
            lspec=base.lspec,
            action={(1, 0): expanded},
            dressing=dict(base.dressing),
        )
        with pytest.raises(ValueError, match="truncated"):
            field_from_action(data, 0)

    def test_polynomial_action_needs_no_mirror(self, coupling_data):
        base = coupling_data["poincare-null-plane"]
        data = BicrossData(
            name="polynomial-only",
            kspec=base.kspec,
            lspec=base.lspec,
            action={(0, 0): parse_nc("2*Pm", base.lspec)},
            dressing={},
        )
        X = field_from_action(data, 0)
        assert X.components[0] == ep_parse("2*Pm", X.ctx)
        assert X.components[1].is_zero()


class TestFlowSeriesSymbolic:
    def test_order_zero_is_the_observable(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-kappa"])
        f = ep_parse("P^2 + 3*H", X.ctx)
        assert flow_series(X, f, 0) == (f,)

    def test_kappa_momentum_series_golden(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-kappa"])
        coeffs = flow_series(X, ep_parse("P", X.ctx), 2)
        assert coeffs[0] == ep_parse("P", X.ctx)
        assert coeffs[1] == ep_parse("P^2/(2*k)", X.ctx)
        assert coeffs[2] == ep_parse("P^3/(4*k^2)", X.ctx)

    def test_conserved_observable_series_terminates(self, catalog_entries):
        entry = catalog_entries["galilei-kappa"]
        X = entry_field(entry)
        coeffs = flow_series(X, entry.first_integrals["h"], 5)
        assert coeffs[0] == entry.first_integrals["h"]
        assert all(c.is_zero() for c in coeffs[1:])

    @pytest.mark.parametrize("name", ENTRY_NAMES)
    def test_taylor_matches_closed_form_exactly(self, catalog_entries, name):
        X = entry_field(catalog_entries[name])
        flow8 = flow_map(X, 8)
        s, syms, param, exprs = sympy_closed_flow(name)
        for j, expr in enumerate(exprs):
            taylor = sp.series(expr, s, 0, 9).removeO().expand()
            for n in range(9):
                ours = ep_to_sympy(flow8.coefficient(j, n), syms, param)
                theirs = taylor.coeff(s, n)
                assert sp.simplify(sp.expand(ours - theirs)) == 0, (j, n)

    def test_order_cap_enforced(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-kappa"])
        with pytest.raises(ValueError, match="cap"):
            flow_series(X, ep_parse("P", X.ctx), 99)

    def test_window_overflow_is_an_error_not_a_zero(self, catalog_entries):
        # order 9 on the inverse-parameter entry needs degree 9, window is 8
        X = entry_field(catalog_entries["galilei-kappa"])
        with pytest.raises(ValueError, match="window"):
            flow_series(X, ep_parse("P", X.ctx), 9)

    def test_flow_map_starts_at_identity(self, catalog_entries):
        X = entry_field(catalog_entries["poincare-null-plane"])
        F = flow_map(X, 4)
        for j in range(2):
            assert F.coefficient(j, 0) == ep_coord(X.ctx, j)


class TestGroupLaw:
    @pytest.mark.parametrize("name", ENTRY_NAMES)
    def test_symbolic_group_law_order_six(self, catalog_entries, name):
        X = entry_field(catalog_entries[name])
        F = flow_map(X, 6)
        assert flow_compose([F, F]) == flow_time_sum(F, 2)

    def test_single_flow_composes_to_itself(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-kappa"])
        F = flow_map(X, 4)
        assert flow_compose([F]) == F

    def test_zero_time_flow_is_neutral(self, catalog_entries):
        X = entry_field(catalog_entries["poincare-null-plane"])
        F = flow_map(X, 4)
        composed = flow_compose([F, identity_flow(X.ctx, 4)])
        for j in range(2):
            for n in range(5):
                assert composed.coefficient(j, (n, 0)) == F.coefficient(j, n)
            entries = {m for m, _ in composed.coords[j]}
            assert all(m[1] == 0 for m in entries)

    def test_order_mismatch_rejected(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-kappa"])
        with pytest.raises(ValueError, match="order"):
            flow_compose([flow_map(X, 4), flow_map(X, 5)])

    @pytest.mark.parametrize("name", ENTRY_NAMES)
    def test_numeric_group_law(self, catalog_entries, name):
        entry = catalog_entries[name]
        X = entry_field(entry)
        p = entry.default_param
        for x0 in GRIDS[name]:
            for s1, s2 in ((0.1, 0.25), (0.25, 0.1), (0.2, 0.3)):
                via = flow_numeric(X, flow_numeric(X, x0, s1, p).point, s2, p)
                direct = flow_numeric(X, x0, s1 + s2, p)
                delta = max(
                    abs(a - b) for a, b in zip(via.point, direct.point)
                )
                assert delta < 1e-9, (name, x0, s1, s2, delta)


class TestFirstIntegrals:
    @pytest.mark.parametrize("name", ENTRY_NAMES)
    def test_registered_integral_conserved_exactly(self, catalog_entries, name):
        entry = catalog_entries[name]
        X = entry_field(entry)
        residual = check_first_integral(X, entry.first_integrals["h"])
        assert residual.is_zero()

    def test_galilei_momentum_conserved(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-nonstandard"])
        assert check_first_integral(X, ep_parse("P", X.ctx)).is_zero()

    def test_sign_variant_residual_pinned(self, catalog_entries):
        # The nearby sign-variant is NOT conserved; its Lie derivative is
        # exactly -2*Pm*(exp(-2*z*Pp) - 1)^2, and the regression guards
        # against anyone "fixing" the registered integral back to it.
        entry = catalog_entries["poincare-null-plane"]
        X = entry_field(entry)
        variant = entry.nonconserved_variant
        assert variant is not None
        residual = check_first_integral(X, variant)
        assert not residual.is_zero()
        want = ep_parse("-2*Pm*(exp(-2*z*Pp) - 1)^2", X.ctx)
        assert ep_sub(residual, want).is_zero()

    def test_variant_only_ships_where_needed(self, catalog_entries):
        assert catalog_entries["galilei-nonstandard"].nonconserved_variant is None
        assert catalog_entries["galilei-kappa"].nonconserved_variant is None


class TestNumeric:
    def test_zero_time_returns_start(self, catalog_entries):
        X = entry_field(catalog_entries["poincare-null-plane"])
        result = flow_numeric(X, (1.0, -0.5), 0.0, 0.3)
        assert result.point == (1.0, -0.5)
        assert result.error == 0.0

    @pytest.mark.parametrize("name", ENTRY_NAMES)
    def test_matches_closed_flow_on_grid(self, catalog_entries, name):
        entry = catalog_entries[name]
        X = entry_field(entry)
        flow = entry.closed_flows[entry.coupling.kspec.names[0]]
        p = entry.default_param
        for x0, s in itertools.product(GRIDS[name], FLOW_TIMES):
            assert flow.in_domain(s, x0, p)
            numeric = flow_numeric(X, x0, s, p)
            closed = flow.advance(s, x0, p)
            delta = max(abs(a - b) for a, b in zip(numeric.point, closed))
            assert delta < 1e-8, (name, x0, s, delta)

    def test_kappa_known_endpoint(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-kappa"])
        result = flow_numeric(X, (1.0, 0.0), 1.0, 1.0)
        assert abs(result.point[0] - 2.0) < 1e-8
        assert abs(result.point[1] + 2.0 * math.log(2.0)) < 1e-8

    def test_galilei_momentum_component_constant(self, catalog_entries):
        X = entry_field(catalog_entries["galilei-nonstandard"])
        for x0 in GRIDS["galilei-nonstandard"]:
            result = flow_numeric(X, x0, 0.37, 0.3)
            assert abs(result.point[1] - x0[1]) < 1e-12

    @pytest.mark.parametrize("name", ENTRY_NAMES)
    def test_closed_flow_identity_at_time_zero(self, catalog_entries, name):
        entry = catalog_entries[name]
        flow = entry.closed_flows[entry.coupling.kspec.names[0]]
        for x0 in GRIDS[name]:
            moved = flow.advance(0.0, x0, entry.default_param)
            assert max(abs(a - b) for a, b in zip(moved, x0)) < 1e-12

    def test_blowup_detected_past_boundary(self, catalog_entries):
        # Backward in time with a negative second coordinate the trajectory
        # leaves its domain at 0.5*ln(1 - exp(2*z*x2)); crossing it must
        # raise, staying above it must agree with the closed form.
        entry = catalog_entries["poincare-null-plane"]
        X = entry_field(entry)
        flow = entry.closed_flows["K"]
        z = 0.3
        x0 = (1.0, -0.5)
        boundary = 0.5 * math.log(1.0 - math.exp(2.0 * z * x0[1]))
        assert boundary < 0.0
        assert not flow.in_domain(boundary - 0.02, x0, z)
        with pytest.raises(FlowDomainError):
            flow_numeric(X, x0, boundary - 0.02, z)
        s_ok = boundary + 0.1
        assert flow.in_domain(s_ok, x0, z)
        numeric = flow_numeric(X, x0, s_ok, z)
        closed = flow.advance(s_ok, x0, z)
        assert max(abs(a - b) for a, b in zip(numeric.point, closed)) < 1e-6

    def test_kappa_closed_flow_domain_guard(self, catalog_entries):
        entry = catalog_entries["galilei-kappa"]
        flow = entry.closed_flows["K"]
        assert not flow.in_domain(2.5, (1.0, 0.0), 1.0)
        with pytest.raises(FlowDomainError):
            flow.advance(2.5, (1.0, 0.0), 1.0)

    def test_trajectory_csv_shape(self, catalog_entries):
        entry = catalog_entries["galilei-kappa"]
        X = entry_field(entry)
        text = trajectory_csv(X, (1.0, 0.0), 0.2, 1.0, samples=4)
        lines = text.strip().splitlines()
        assert lines[0] == "s,P,H,error"
        assert len(lines) == 6
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[1]) == 1.0
        last = lines[-1].split(",")
        assert abs(float(last[0]) - 0.2) < 1e-15
        assert float(last[3]) < 1e-10


class TestStrata:
    def test_poincare_origin_is_the_fixed_point(self, catalog_entries):
        entry = catalog_entries["poincare-null-plane"]
        X = entry_field(entry)
        report = classify_point(
            X, entry.closed_flows["K"], (0.0, 0.0), 0.3, entry.first_integrals
        )
        assert report.fixed
        assert entry.fixed_predicate((0.0, 0.0), 0.3)
        assert not entry.fixed_predicate((1.0, -0.5), 0.3)

    def test_galilei_fixed_line(self, catalog_entries):
        entry = catalog_entries["galilei-nonstandard"]
        X = entry_field(entry)
        for b in (-2.0, 0.0, 5.0):
            report = classify_point(
                X, entry.closed_flows["K"], (b, 0.0), 0.3, entry.first_integrals
            )
            assert report.fixed
            assert entry.fixed_predicate((b, 0.0), 0.3)
        moving = classify_point(X, entry.closed_flows["K"], (0.0, 1.0), 0.3)
        assert not moving.fixed

    def test_kappa_moving_point_orbit_label(self, catalog_entries):
        entry = catalog_entries["galilei-kappa"]
        X = entry_field(entry)
        report = classify_point(
            X, entry.closed_flows["K"], (1.0, 0.0), 1.0, entry.first_integrals
        )
        assert not report.fixed
        assert dict(report.integrals)["h"] == pytest.approx(1.0, abs=1e-12)

    def test_orbit_label_constant_along_trajectory(self, catalog_entries):
        entry = catalog_entries["poincare-null-plane"]
        X = entry_field(entry)
        h = entry.first_integrals["h"]
        x0 = (1.0, -0.5)
        start = classify_point(X, None, x0, 0.3, {"h": h})
        moved = flow_numeric(X, x0, 0.4, 0.3).point
        end = classify_point(X, None, moved, 0.3, {"h": h})
        assert dict(start.integrals)["h"] == pytest.approx(
            dict(end.integrals)["h"], abs=1e-9
        )

    def test_report_json_schema(self, catalog_entries):
        entry = catalog_entries["galilei-kappa"]
        X = entry_field(entry)
        report = classify_point(
            X, entry.closed_flows["K"], (1.0, 0.0), 1.0, entry.first_integrals
        )
        blob = report.to_json()
        assert set(blob) == {
            "point",
            "param",
            "fixed",
            "field",
            "inDomain",
            "integrals",
        }
        assert blob["inDomain"] is True
        assert blob["integrals"] == {"h": pytest.approx(1.0)}


class TestCatalogEntryWiring:
    @pytest.mark.parametrize("name", ENTRY_NAMES)
    def test_entries_fully_populated(self, catalog_entries, name):
        entry = catalog_entries[name]
        assert entry.name == name
        assert entry.primal.names[0] == "K"
        assert entry.pair.primal is entry.primal
        assert entry.pair.dual is entry.dual
        assert set(entry.closed_flows) == set(entry.coupling.kspec.names)
        assert set(entry.induced_closed) == set(entry.coupling.lspec.names)
        assert entry.star, "primal presentations carry involution data"
        assert "h" in entry.first_integrals

    def test_induced_closed_matches_flow_coordinates(self, catalog_entries):
        entry = catalog_entries["galilei-kappa"]
        flow = entry.closed_flows["K"]
        a = (1.0, 0.0)
        moved = flow.advance(0.5, a, 1.0)
        assert entry.induced_closed["P"](0.5, a, 1.0) == moved[0]
        assert entry.induced_closed["H"](0.5, a, 1.0) == moved[1]

    def test_unknown_entry_name(self):
        from bicross.catalog import CatalogError, get

        with pytest.raises(CatalogError):
            get("poincare-euclidean")
