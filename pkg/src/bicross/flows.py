"""Vector fields induced on the commutative sector, their flows and integrals.

Each primitive generator of the cocommutative factor acts on the commutative
factor by a derivation, so on the coordinate functions it induces a vector
field on ℝˢ: component ``j`` is the closed exp-polynomial form of
``(coordinate j) ⊲ k``.  Everything downstream is built from that field:

* :func:`flow_series` — the formal one-parameter flow as a polynomial in the
  flow time with exp-polynomial coefficients ``(1/n!)·Xⁿf``, computed by
  iterated differentiation (exp-polynomials are closed under ``d/dx`` and
  products, so the coefficients are exact);
* :func:`flow_numeric` — fixed-step classical Runge–Kutta integration with a
  Richardson half-step error estimate, raising :class:`FlowDomainError` when
  the trajectory blows up (the catalog flows are local, not global);
* :func:`check_first_integral` — the Lie derivative ``X(h)`` in canonical
  form, zero exactly when ``h`` is conserved;
* :func:`flow_compose` — composition of several one-parameter flows by series
  substitution, one time variable per factor; with two copies of the same
  flow this checks the group law exactly;
* :func:`classify_point` — stratum data for a point: fixed-point flag, field
  value, domain membership and the values of registered first integrals.

Exactness discipline: intermediate products can push parameter degrees past
the series window, where the scalar layer would truncate (and a term whose
coefficient truncates to nothing would vanish without a trace).  All series
work here therefore runs in a context widened far enough — from a computable
drift bound — that no truncation can occur, and results are narrowed back
with an explicit window check that raises instead of dropping.

Closed-form flow maps involve logarithms, which exp-polynomials cannot
express; they enter only as numeric callables (:class:`ClosedFlow`) shipped
by the catalog and are compared against the two computations above in tests.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple, Sequence

from .bicrossprod import BicrossData
from .expr import (
    ExprContext,
    ExpPoly,
    ExpTerm,
    ep_add,
    ep_const,
    ep_coord,
    ep_derive,
    ep_eval,
    ep_make,
    ep_mul,
    ep_one,
    ep_scale,
    ep_zero,
)
from .multiindex import MultiIndex, iter_upto, mtotal, mzero
from .paramseries import ParamSeries, ps_one, ps_scale, ps_zero


class FlowDomainError(ValueError):
    """A numeric trajectory left the local-flow domain (blow-up detected)."""


#: Hard ceiling on requested series orders; protects against runaway loops.
ORDER_CAP = 24

#: Default fixed step for the Runge–Kutta integrator.
DEFAULT_STEP = 1e-3

#: State-norm bound beyond which a trajectory counts as blown up.
NORM_CAP = 1e9

#: Richardson error-estimate bound beyond which the step is untrustworthy.
ERROR_CAP = 1e-4


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VectorField:
    """A vector field on the coordinate space with exp-polynomial components."""

    ctx: ExprContext
    components: tuple[ExpPoly, ...]

    def __post_init__(self) -> None:
        if len(self.components) != len(self.ctx.coords):
            raise ValueError(
                f"field has {len(self.components)} components for "
                f"{len(self.ctx.coords)} coordinates"
            )
        for comp in self.components:
            if comp.ctx != self.ctx:
                raise ValueError("component uses a different coordinate context")


def _nc_to_exppoly(el, ctx: ExprContext) -> ExpPoly:
    """Exact conversion of a commutative polynomial element to an ExpPoly."""
    if el.truncated or any(c.truncated for c in el.terms.values()):
        raise ValueError(
            "action value only exists as a truncated expansion; a closed "
            "exp-polynomial form is required for flows"
        )
    zeros = tuple(ps_zero(ctx.sctx) for _ in ctx.coords)
    return ep_make(
        ctx, [ExpTerm(coeff, mono, zeros) for mono, coeff in el.terms.items()]
    )


def field_from_action(data: BicrossData, k: int | str = 0) -> VectorField:
    """The vector field induced by one cocommutative generator.

    Component ``j`` is the closed form of ``(coordinate j) ⊲ k``.  Closed
    forms recorded in ``data.action_closed`` are used directly; pairs without
    one fall back to the polynomial action value, which must be exact
    (untruncated) to qualify.

    Raises:
        ValueError: unknown generator, or an action value that has no exact
            exp-polynomial form.
    """
    ki = data.kspec.index(k) if isinstance(k, str) else k
    if not 0 <= ki < data.kspec.nvars:
        raise ValueError(f"no cocommutative generator with index {ki}")
    ctx = data.expr_context()
    comps: list[ExpPoly] = []
    for j in range(data.lspec.nvars):
        closed = data.action_closed.get((j, ki))
        if closed is not None:
            comps.append(closed)
            continue
        el = data.action.get((j, ki))
        comps.append(ep_zero(ctx) if el is None else _nc_to_exppoly(el, ctx))
    return VectorField(ctx, tuple(comps))


# ---------------------------------------------------------------------------
# widened-window plumbing
# ---------------------------------------------------------------------------


def _degree_bound(*polys: ExpPoly) -> int:
    """Largest |parameter degree| in the given data (at least 1)."""
    bound = 1
    for poly in polys:
        for t in poly.terms:
            for series in (t.coeff, *t.expw):
                for d, _ in series.terms:
                    bound = max(bound, abs(d))
    return bound


def _wide_context(ctx: ExprContext, pad: int) -> ExprContext:
    return ExprContext(ctx.coords, ctx.sctx.widened(pad))


def _ep_recontext(f: ExpPoly, ectx: ExprContext, what: str) -> ExpPoly:
    """Move an exact exp-polynomial between same-shaped contexts verbatim."""
    sctx = ectx.sctx
    terms = []
    for t in f.terms:
        if t.coeff.truncated or any(w.truncated for w in t.expw):
            raise ValueError(
                f"{what} carries truncated coefficients; an exact closed "
                "form is required"
            )
        terms.append(
            ExpTerm(
                ParamSeries(sctx, t.coeff.terms),
                t.powers,
                tuple(ParamSeries(sctx, w.terms) for w in t.expw),
            )
        )
    return ExpPoly(ectx, tuple(terms))


def _ep_narrow(f: ExpPoly, ectx: ExprContext, what: str) -> ExpPoly:
    """Return ``f`` in the original context, refusing out-of-window degrees."""
    sctx = ectx.sctx
    terms = []
    for t in f.terms:
        if t.coeff.truncated or any(w.truncated for w in t.expw):
            raise ValueError(f"{what} overflowed even the widened window")
        for series in (t.coeff, *t.expw):
            for d, _ in series.terms:
                if d > sctx.zmax or d < -sctx.bmax:
                    raise ValueError(
                        f"{what} needs parameter degree {d}, outside the "
                        f"window [-{sctx.bmax}, {sctx.zmax}]; widen the "
                        "series context"
                    )
        terms.append(
            ExpTerm(
                ParamSeries(sctx, t.coeff.terms),
                t.powers,
                tuple(ParamSeries(sctx, w.terms) for w in t.expw),
            )
        )
    return ExpPoly(ectx, tuple(terms))


# ---------------------------------------------------------------------------
# formal flow series
# ---------------------------------------------------------------------------


def _ep_scale_rat(f: ExpPoly, q: Fraction) -> ExpPoly:
    return ep_make(
        f.ctx, [ExpTerm(ps_scale(t.coeff, q), t.powers, t.expw) for t in f.terms]
    )


def flow_series(field: VectorField, f: ExpPoly, order: int) -> tuple[ExpPoly, ...]:
    """Coefficients of ``f`` transported along the flow: ``(1/n!)·Xⁿf``.

    The returned tuple has ``order + 1`` entries; entry 0 is ``f`` itself.
    The iteration runs in a parameter window widened beyond the worst-case
    degree drift, so every returned coefficient is exact; a coefficient that
    does not fit back into the original window raises instead of truncating.

    Raises:
        ValueError: order outside ``0..ORDER_CAP``, context mismatch, inexact
            inputs, or a result outside the parameter window.
    """
    if order < 0 or order > ORDER_CAP:
        raise ValueError(f"series order {order} outside 0..{ORDER_CAP} cap")
    if f.ctx != field.ctx:
        raise ValueError("function and field use different coordinate contexts")
    ctx = field.ctx
    pad = _degree_bound(f, *field.components) * (order + 1) * (order + 2)
    wide = _wide_context(ctx, pad)
    wide_comps = [
        _ep_recontext(c, wide, "field component") for c in field.components
    ]
    power = _ep_recontext(f, wide, "flow observable")
    out = [_ep_narrow(power, ctx, "flow coefficient")]
    for n in range(1, order + 1):
        acc = ep_zero(wide)
        for j, comp in enumerate(wide_comps):
            if not comp.is_zero():
                acc = ep_add(acc, ep_mul(comp, ep_derive(power, j)))
        power = acc
        coeff = _ep_scale_rat(power, Fraction(1, math.factorial(n)))
        out.append(_ep_narrow(coeff, ctx, "flow coefficient"))
    return tuple(out)


def apply_field(field: VectorField, f: ExpPoly) -> ExpPoly:
    """The derivation ``X(f) = Σ_j X_j · ∂f/∂x_j``, exact and windowed."""
    return flow_series(field, f, 1)[1]


def check_first_integral(field: VectorField, h: ExpPoly) -> ExpPoly:
    """The Lie derivative ``X(h)`` in canonical form; zero means conserved."""
    return apply_field(field, h)


# ---------------------------------------------------------------------------
# flow maps as time polynomials
# ---------------------------------------------------------------------------

#: One coordinate of a (possibly multi-time) flow: time monomial → coefficient.
TimeTable = tuple[tuple[MultiIndex, ExpPoly], ...]


@dataclass(frozen=True)
class FlowSeries:
    """A formal flow map truncated at total time degree ``order``.

    ``coords[j]`` lists, per monomial in the ``times`` flow-time variables,
    the exp-polynomial coefficient of coordinate ``j``'s image.  The constant
    (time-free) coefficient of coordinate ``j`` is the coordinate function
    itself, so every flow starts at the identity.
    """

    ctx: ExprContext
    order: int
    times: int
    coords: tuple[TimeTable, ...]

    def __post_init__(self) -> None:
        if self.times < 1 or self.order < 0:
            raise ValueError("a flow series needs times >= 1 and order >= 0")
        if len(self.coords) != len(self.ctx.coords):
            raise ValueError("coordinate count mismatch")
        zero_m = mzero(self.times)
        for j, table in enumerate(self.coords):
            base = None
            for tmono, coeff in table:
                if len(tmono) != self.times or mtotal(tmono) > self.order:
                    raise ValueError(f"time monomial {tmono} out of window")
                if coeff.ctx != self.ctx or coeff.is_zero():
                    raise ValueError(
                        "table coefficients must be nonzero and share the "
                        "flow's coordinate context"
                    )
                for t in coeff.terms:
                    if t.coeff.truncated or any(w.truncated for w in t.expw):
                        raise ValueError(
                            "flow coefficients must be exact (untruncated)"
                        )
                if tmono == zero_m:
                    base = coeff
            if base != ep_coord(self.ctx, j):
                raise ValueError(
                    "the time-free coefficient must be the coordinate itself "
                    "(flows start at the identity)"
                )

    def coefficient(self, j: int, tmono: int | MultiIndex) -> ExpPoly:
        """Coefficient of coordinate ``j`` at a time monomial (int for times=1)."""
        if isinstance(tmono, int):
            if self.times != 1:
                raise ValueError("an integer time degree needs times == 1")
            tmono = (tmono,)
        for m, coeff in self.coords[j]:
            if m == tuple(tmono):
                return coeff
        return ep_zero(self.ctx)


def _freeze(table: dict[MultiIndex, ExpPoly]) -> TimeTable:
    return tuple(
        sorted(
            ((m, v) for m, v in table.items() if not v.is_zero()),
            key=lambda item: item[0],
        )
    )


def flow_map(field: VectorField, order: int) -> FlowSeries:
    """The formal flow of ``field``: every coordinate transported to ``order``."""
    tables: list[TimeTable] = []
    for j in range(len(field.ctx.coords)):
        coeffs = flow_series(field, ep_coord(field.ctx, j), order)
        tables.append(_freeze({(n,): c for n, c in enumerate(coeffs)}))
    return FlowSeries(field.ctx, order, 1, tuple(tables))


def identity_flow(ctx: ExprContext, order: int, times: int = 1) -> FlowSeries:
    """The do-nothing flow: every coordinate maps to itself at all times."""
    zero_m = mzero(times)
    tables = tuple(
        _freeze({zero_m: ep_coord(ctx, j)}) for j in range(len(ctx.coords))
    )
    return FlowSeries(ctx, order, times, tables)


def _tp_add_into(acc: dict, other: Mapping[MultiIndex, ExpPoly]) -> None:
    for m, v in other.items():
        prev = acc.get(m)
        acc[m] = v if prev is None else ep_add(prev, v)


def _tp_mul(a: Mapping, b: Mapping, order: int) -> dict:
    out: dict[MultiIndex, ExpPoly] = {}
    for ma, va in a.items():
        for mb, vb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            if mtotal(m) > order:
                continue
            prod = ep_mul(va, vb)
            prev = out.get(m)
            out[m] = prod if prev is None else ep_add(prev, prod)
    return {m: v for m, v in out.items() if not v.is_zero()}


def _subst(f: ExpPoly, state: Sequence[dict], order: int, times: int) -> dict:
    """Substitute flow-transported coordinates into ``f``, mod time order.

    ``state[j]`` is the time polynomial for coordinate ``j``; its time-free
    coefficient is exactly the coordinate function, so the deviation from the
    identity carries at least one power of time and exponentials expand to a
    finite sum: ``exp(w·y_j) = exp(w·x_j) · Σ_m (w·(y_j − x_j))^m / m!``.
    """
    ctx = f.ctx
    zero_m = mzero(times)
    out: dict[MultiIndex, ExpPoly] = {}
    for term in f.terms:
        acc: dict[MultiIndex, ExpPoly] = {zero_m: ep_const(ctx, term.coeff)}
        for j, p in enumerate(term.powers):
            for _ in range(p):
                acc = _tp_mul(acc, state[j], order)
        carried = [(j, w) for j, w in enumerate(term.expw) if not w.is_zero()]
        if carried:
            base = ep_make(
                ctx,
                [ExpTerm(ps_one(ctx.sctx), mzero(len(ctx.coords)), term.expw)],
            )
            acc = {m: ep_mul(v, base) for m, v in acc.items()}
            for j, w in carried:
                delta = {
                    m: ep_scale(v, w)
                    for m, v in state[j].items()
                    if m != zero_m
                }
                expfac: dict[MultiIndex, ExpPoly] = {zero_m: ep_one(ctx)}
                power: dict[MultiIndex, ExpPoly] = {zero_m: ep_one(ctx)}
                for mth in range(1, order + 1):
                    power = _tp_mul(power, delta, order)
                    if not power:
                        break
                    _tp_add_into(
                        expfac,
                        {
                            m: _ep_scale_rat(v, Fraction(1, math.factorial(mth)))
                            for m, v in power.items()
                        },
                    )
                acc = _tp_mul(acc, expfac, order)
        _tp_add_into(out, acc)
    return {m: v for m, v in out.items() if not v.is_zero()}


def flow_compose(series: Sequence[FlowSeries]) -> FlowSeries:
    """Compose one-parameter flows by series substitution, first entry first.

    The result carries one time variable per input flow, in input order, and
    is truncated at the shared total time degree.  A single input is returned
    unchanged.  Substitution runs in a widened parameter window and narrows
    at the end, so the result is exact or an error — never silently cut.

    Raises:
        ValueError: empty input, coordinate mismatch, order mismatch, a
            multi-time input, or a result outside the parameter window.
    """
    if not series:
        raise ValueError("nothing to compose")
    first = series[0]
    for flow in series:
        if flow.ctx != first.ctx:
            raise ValueError("coordinate mismatch between flow series")
        if flow.order != first.order:
            raise ValueError("order mismatch between flow series")
        if flow.times != 1:
            raise ValueError("only one-parameter flow series can be composed")
    if len(series) == 1:
        return first
    r = len(series)
    order = first.order
    ctx = first.ctx
    ncoords = len(ctx.coords)
    all_coeffs = [c for flow in series for table in flow.coords for _, c in table]
    pad = _degree_bound(*all_coeffs) * (order + 1) * (order + 2)
    wide = _wide_context(ctx, pad)

    def widen_table(table: TimeTable, embed) -> dict:
        return {
            embed(m): _ep_recontext(c, wide, "flow coefficient")
            for m, c in table
        }

    state: list[dict[MultiIndex, ExpPoly]] = [
        widen_table(table, lambda m: (m[0],) + (0,) * (r - 1))
        for table in first.coords
    ]
    for i in range(1, r):
        new_state: list[dict[MultiIndex, ExpPoly]] = []
        for j in range(ncoords):
            acc: dict[MultiIndex, ExpPoly] = {}
            for (n,), coeff in series[i].coords[j]:
                wide_coeff = _ep_recontext(coeff, wide, "flow coefficient")
                sub = _subst(wide_coeff, state, order - n, r)
                shifted = {
                    m[:i] + (m[i] + n,) + m[i + 1:]: v for m, v in sub.items()
                }
                _tp_add_into(acc, shifted)
            new_state.append({m: v for m, v in acc.items() if not v.is_zero()})
        state = new_state
    tables = tuple(
        _freeze(
            {m: _ep_narrow(v, ctx, "composed flow coefficient") for m, v in d.items()}
        )
        for d in state
    )
    return FlowSeries(ctx, order, r, tables)


def flow_time_sum(flow: FlowSeries, copies: int) -> FlowSeries:
    """The flow evaluated at the *sum* of ``copies`` time variables.

    Expands each ``tⁿ`` coefficient multinomially; composing a flow with
    itself must reproduce exactly this series (the one-parameter group law).
    """
    if flow.times != 1:
        raise ValueError("time-sum expansion needs a one-parameter flow")
    if copies < 1:
        raise ValueError("need at least one copy")
    tables: list[TimeTable] = []
    for table in flow.coords:
        acc: dict[MultiIndex, ExpPoly] = {}
        for (n,), coeff in table:
            for m in iter_upto(copies, n):
                if mtotal(m) != n:
                    continue
                weight = Fraction(math.factorial(n))
                for part in m:
                    weight /= math.factorial(part)
                _tp_add_into(acc, {m: _ep_scale_rat(coeff, weight)})
        tables.append(_freeze(acc))
    return FlowSeries(flow.ctx, flow.order, copies, tuple(tables))


# ---------------------------------------------------------------------------
# numeric integration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedFlow:
    """A closed-form flow map as a numeric callable plus domain predicate.

    ``advance(s, x, param)`` returns the flowed point; ``in_domain(s, x,
    param)`` says whether the trajectory from ``x`` survives to time ``s``.
    Time zero is the identity on the declared domain.
    """

    advance: Callable[[float, Sequence[float], float], tuple[float, ...]]
    in_domain: Callable[[float, Sequence[float], float], bool]


class FlowPoint(NamedTuple):
    """A numerically integrated endpoint with its Richardson error estimate."""

    point: tuple[float, ...]
    error: float


def _rk4(f, x0: Sequence[float], s: float, h: float, norm_cap: float):
    x = tuple(float(v) for v in x0)
    sign = 1.0 if s >= 0 else -1.0
    nfull = int(abs(s) / h + 1e-12)
    leftover = s - sign * h * nfull
    steps = [sign * h] * nfull
    if abs(leftover) > 1e-14:
        steps.append(leftover)
    for dt in steps:
        try:
            k1 = f(x)
            k2 = f(tuple(xi + 0.5 * dt * v for xi, v in zip(x, k1)))
            k3 = f(tuple(xi + 0.5 * dt * v for xi, v in zip(x, k2)))
            k4 = f(tuple(xi + dt * v for xi, v in zip(x, k3)))
        except OverflowError:
            raise FlowDomainError(
                "trajectory blew up (numeric overflow); the local flow has "
                "left its domain"
            ) from None
        x = tuple(
            xi + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
            for xi, a, b, c, d in zip(x, k1, k2, k3, k4)
        )
        if any(not math.isfinite(v) for v in x) or max(
            abs(v) for v in x
        ) > norm_cap:
            raise FlowDomainError(
                f"trajectory norm exceeded {norm_cap:g}; the local flow has "
                "left its domain"
            )
    return x


def flow_numeric(
    field: VectorField,
    x0: Sequence[float],
    s: float,
    param_value: float,
    h: float = DEFAULT_STEP,
    norm_cap: float = NORM_CAP,
    error_cap: float = ERROR_CAP,
) -> FlowPoint:
    """Integrate ``ẋ = X(x)`` from ``x0`` to time ``s`` with fixed-step RK4.

    Runs the classical fourth-order scheme at steps ``h`` and ``h/2`` and
    returns the finer solution with the Richardson error estimate
    ``max|coarse − fine| / 15``.  Blow-up (state norm beyond ``norm_cap``,
    numeric overflow, or an estimate beyond ``error_cap``) raises
    :class:`FlowDomainError` — the catalog flows are local, and leaving the
    domain is a signal, not a number.
    """
    if len(x0) != len(field.ctx.coords):
        raise ValueError("initial point dimension mismatch")
    if h <= 0:
        raise ValueError("step size must be positive")

    def rhs(pt):
        return tuple(ep_eval(c, pt, param_value) for c in field.components)

    coarse = _rk4(rhs, x0, s, h, norm_cap)
    fine = _rk4(rhs, x0, s, h / 2.0, norm_cap)
    err = max(abs(a - b) for a, b in zip(coarse, fine)) / 15.0 if coarse else 0.0
    if err > error_cap:
        raise FlowDomainError(
            f"Richardson error estimate {err:.3e} exceeds {error_cap:g}; "
            "the trajectory is leaving the local-flow domain"
        )
    return FlowPoint(tuple(fine), err)


def trajectory_rows(
    field: VectorField,
    x0: Sequence[float],
    s_end: float,
    param_value: float,
    h: float = DEFAULT_STEP,
    samples: int = 25,
) -> list[tuple[float, tuple[float, ...], float]]:
    """Sampled trajectory as ``(s, point, error)`` rows, endpoints included."""
    if samples < 1:
        raise ValueError("need at least one sample interval")
    rows: list[tuple[float, tuple[float, ...], float]] = []
    for i in range(samples + 1):
        s = s_end * i / samples
        result = flow_numeric(field, x0, s, param_value, h)
        rows.append((s, result.point, result.error))
    return rows


def trajectory_csv(
    field: VectorField,
    x0: Sequence[float],
    s_end: float,
    param_value: float,
    h: float = DEFAULT_STEP,
    samples: int = 25,
) -> str:
    """CSV text for a sampled trajectory: ``s``, one column per coordinate,
    and the per-row error estimate."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["s", *field.ctx.coords, "error"])
    for s, point, err in trajectory_rows(field, x0, s_end, param_value, h, samples):
        writer.writerow([repr(s), *(repr(v) for v in point), repr(err)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# strata
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StratumReport:
    """Where a point sits relative to a flow: fixed or moving, and on which
    orbit (labelled by the registered first integrals)."""

    point: tuple[float, ...]
    param_value: float
    fixed: bool
    field_value: tuple[float, ...]
    in_domain: bool
    integrals: tuple[tuple[str, float], ...]

    def to_json(self) -> dict:
        return {
            "point": list(self.point),
            "param": self.param_value,
            "fixed": self.fixed,
            "field": list(self.field_value),
            "inDomain": self.in_domain,
            "integrals": {name: value for name, value in self.integrals},
        }


def classify_point(
    field: VectorField,
    flow: ClosedFlow | None,
    x: Sequence[float],
    param_value: float,
    integrals: Mapping[str, ExpPoly] | None = None,
    tol: float = 1e-9,
) -> StratumReport:
    """Stratum descriptor for a point: fixed-point flag and orbit labels."""
    if len(x) != len(field.ctx.coords):
        raise ValueError("point dimension mismatch")
    values = tuple(ep_eval(c, x, param_value) for c in field.components)
    fixed = all(abs(v) <= tol for v in values)
    in_domain = True if flow is None else bool(flow.in_domain(0.0, x, param_value))
    labels = tuple(
        (name, ep_eval(h, x, param_value))
        for name, h in (integrals or {}).items()
    )
    return StratumReport(
        point=tuple(float(v) for v in x),
        param_value=float(param_value),
        fixed=fixed,
        field_value=values,
        in_domain=in_domain,
        integrals=labels,
    )
