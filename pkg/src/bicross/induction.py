"""Representations induced by evaluation points of the commutative factor.

An evaluation point ``a`` of the commutative factor is a character; it
induces a representation of the whole coupled algebra on polynomial
functions of the cocommutative factor's group coordinates, truncated at a
model degree ``N``:

* each cocommutative generator acts through the regular-action matrix that
  the factorial duality pairing prescribes (for a single abelian generator
  this is the coordinate derivative, asserted as a regression elsewhere);
* each commutative generator acts by multiplication with the coordinate
  series obtained by evaluating its flow expansion at the inducing point,
  so the constant term is the inducing value itself.

On top of the model this module provides

* :func:`check_rep_relations` — commutators of the operators against the
  straightened commutators of the presentation, exhaustively on a basis
  window,
* :func:`local_rep` / :func:`local_scalar` — the group-level action on
  points: a scalar character factor times the closed flow,
* :class:`CoSpaceElement` / :func:`cospace_act` — the two-sided actions on
  the mixed pairs (function on the cocommutative group) × (point of the
  commutative spectrum) and (group point) × (function on the spectrum),
* :func:`equivalence_check` — numeric verification that models induced
  along one flow orbit are intertwined by translation, with a
  forced-identification negative control for points on different orbits,
* :func:`check_skew_pairing` — formal skew-symmetry of a cocommutative
  generator under the factorial pairing: the model matrix must be the
  transpose of multiplication by the generator's star image (star ``-k``
  encodes the group-level inverse), so
  ``<rho(k)f, g> + <f, k*.g> = 0`` exactly on the truncated model.

Exactness discipline: characters are stored as exact rationals, model
coefficients are parameter series, and every symbolic check in this module
is exact within the series window.  Numeric routes (closed flows or
fixed-step integration) appear only where a check is explicitly
evaluation-based, with stated tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .bicrossprod import BicrossData, ConditionResult
from .expr import (
    ExpPoly,
    ExprContext,
    ExpTerm,
    ep_eval,
    ep_eval_series,
    ep_make,
    ep_mul,
    ep_parse,
)
from .flows import (
    DEFAULT_STEP,
    ClosedFlow,
    field_from_action,
    flow_compose,
    flow_map,
    flow_numeric,
)
from .multiindex import MultiIndex, iter_upto, mfactorial, mtotal, mzero
from .ncalg import (
    AlgebraSpec,
    GenInfo,
    NCElement,
    SpecError,
    nc_gen,
    nc_make,
    nc_mul,
    nc_sub,
)
from .pairing import make_dual_pair, pair
from .paramseries import (
    ParamSeries,
    ps_add,
    ps_eval_exact,
    ps_mul,
    ps_one,
    ps_rational,
    ps_restrict,
    ps_scale,
    ps_str,
    ps_zero,
)

__all__ = [
    "Character",
    "as_character",
    "model_context",
    "InducedRep",
    "induce",
    "rep_apply",
    "series_coefficient",
    "series_string",
    "RepReport",
    "check_rep_relations",
    "check_skew_pairing",
    "local_rep",
    "local_scalar",
    "KGroupElement",
    "CoSpaceElement",
    "cospace_act",
    "translate",
    "EquivalenceReport",
    "equivalence_check",
]

DEFAULT_ORDER = 8
DEFAULT_EVAL_GRID = (-0.4, -0.15, 0.0, 0.2, 0.35, 0.5)

Character = Sequence[float]
Coeffs = dict[MultiIndex, ParamSeries]


def as_character(data: BicrossData, values: Character) -> tuple[Fraction, ...]:
    """Validate and freeze an inducing point: one finite entry per coordinate.

    Entries are converted to exact rationals (binary floats convert
    exactly), which keeps every induced series coefficient exact.
    """
    vals = tuple(values)
    if len(vals) != data.lspec.nvars:
        raise ValueError(
            f"character needs {data.lspec.nvars} entries "
            f"({', '.join(data.lspec.names)}), got {len(vals)}"
        )
    out = []
    for v in vals:
        if isinstance(v, float) and not math.isfinite(v):
            raise ValueError("character entries must be finite")
        out.append(Fraction(v))
    return tuple(out)


def model_context(
    data: BicrossData, coords: Sequence[str] | None = None
) -> ExprContext:
    """Coordinate context for the truncated model of the dual function space.

    ``coords`` names the group coordinates dual to the cocommutative
    generators (one per generator).  The default lowercases the generator
    names, appending ``"c"`` on a clash with the parameter name or a
    duplicate.
    """
    sctx = data.kspec.sctx
    if coords is None:
        chosen: list[str] = []
        for n in data.kspec.names:
            cand = n.lower()
            while cand == sctx.param or cand in chosen:
                cand += "c"
            chosen.append(cand)
        coords = chosen
    coords = tuple(coords)
    if len(coords) != data.kspec.nvars:
        raise ValueError("one model coordinate per cocommutative generator")
    if len(set(coords)) != len(coords) or sctx.param in coords:
        raise ValueError("model coordinates must be distinct from each other and the parameter")
    return ExprContext(coords, sctx)


# ---------------------------------------------------------------------------
# coefficient-table helpers (polynomials in the model coordinates)
# ---------------------------------------------------------------------------


def _poly_coeffs(f: ExpPoly) -> Coeffs:
    """Coefficient table of a polynomial element of the model."""
    out: Coeffs = {}
    for t in f.terms:
        if any(not w.is_zero() for w in t.expw):
            raise ValueError(
                "the truncated model holds polynomial coordinate series; "
                "exponential terms cannot be represented"
            )
        out[t.powers] = t.coeff
    return out


def _poly_make(ctx: ExprContext, coeffs: Coeffs) -> ExpPoly:
    zero_w = tuple(ps_zero(ctx.sctx) for _ in ctx.coords)
    return ep_make(
        ctx, [ExpTerm(c, mono, zero_w) for mono, c in coeffs.items()]
    )


def _coeffs_sub(a: Coeffs, b: Coeffs) -> Coeffs:
    out = dict(a)
    for mono, c in b.items():
        cur = out.get(mono)
        nxt = ps_add(cur, ps_scale(c, -1)) if cur is not None else ps_scale(c, -1)
        if nxt.is_zero():
            out.pop(mono, None)
        else:
            out[mono] = nxt
    return {m: c for m, c in out.items() if not c.is_zero()}


def _convolve(a: Coeffs, b: Coeffs, order: int) -> Coeffs:
    """Product of two coefficient tables, cut at total degree ``order``."""
    out: Coeffs = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            if mtotal(mono) > order:
                continue
            prod = ps_mul(ca, cb)
            cur = out.get(mono)
            out[mono] = ps_add(cur, prod) if cur is not None else prod
    return {m: c for m, c in out.items() if not c.is_zero()}


def _matrix_apply(
    mat: dict[tuple[MultiIndex, MultiIndex], ParamSeries], f: Coeffs
) -> Coeffs:
    out: Coeffs = {}
    for (row, col), entry in mat.items():
        fc = f.get(col)
        if fc is None:
            continue
        prod = ps_mul(entry, fc)
        cur = out.get(row)
        out[row] = ps_add(cur, prod) if cur is not None else prod
    return {m: c for m, c in out.items() if not c.is_zero()}


def _regular_matrix(
    kspec: AlgebraSpec, generator: int, order: int
) -> dict[tuple[MultiIndex, MultiIndex], ParamSeries]:
    """Regular-action matrix of one cocommutative generator on the model.

    Row ``m``, column ``q`` holds ``<k_i k_m, coord^q> / m!`` under the
    factorial duality, i.e. the coefficient of ``k^q`` in the straightened
    product ``k_i * k^m`` times ``q!/m!``.  For one abelian generator this
    is the coordinate-derivative matrix.
    """
    one = ps_one(kspec.sctx)
    gi = nc_gen(kspec, generator)
    mat: dict[tuple[MultiIndex, MultiIndex], ParamSeries] = {}
    for m in iter_upto(kspec.nvars, order):
        prod = nc_mul(gi, nc_make(kspec, {m: one}))
        for q, c in prod.terms.items():
            if mtotal(q) > order or c.is_zero():
                continue
            mat[(m, q)] = ps_scale(
                c, Fraction(mfactorial(q), mfactorial(m))
            )
    return mat


# ---------------------------------------------------------------------------
# the induced representation
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class InducedRep:
    """Operators of the coupled algebra on the truncated coordinate model.

    ``kmatrices[i]`` is the regular-action matrix of cocommutative
    generator ``i``; ``mult_series[j]`` is the multiplication series of
    commutative generator ``j`` (a polynomial in the model coordinates with
    parameter-series coefficients whose constant term is the inducing
    value).  ``order`` is the model truncation degree: the operators act on
    polynomials of total degree <= order.
    """

    data: BicrossData
    character: tuple[Fraction, ...]
    order: int
    ctx: ExprContext
    kmatrices: tuple[dict[tuple[MultiIndex, MultiIndex], ParamSeries], ...]
    mult_series: tuple[ExpPoly, ...]

    def generator_slot(self, generator: int | str) -> tuple[str, int]:
        """Resolve a generator to its block: ("K", i) or ("L", j).

        Integers index the combined presentation, cocommutative block
        first; strings match either factor's generator names.
        """
        r = self.data.kspec.nvars
        if isinstance(generator, str):
            if generator in self.data.kspec.names:
                return "K", self.data.kspec.index(generator)
            if generator in self.data.lspec.names:
                return "L", self.data.lspec.index(generator)
            raise SpecError(f"unknown generator {generator!r}")
        if 0 <= generator < r:
            return "K", generator
        if r <= generator < r + self.data.lspec.nvars:
            return "L", generator - r
        raise SpecError(f"generator index {generator} out of range")

    def to_json(self, param_value: float | Fraction | None = None) -> dict:
        def render(ps: ParamSeries) -> str:
            if param_value is None:
                return ps_str(ps)
            return str(ps_eval_exact(ps, param_value))

        kblock = {}
        for i, name in enumerate(self.data.kspec.names):
            entries = [
                [list(m), list(q), render(v)]
                for (m, q), v in sorted(self.kmatrices[i].items())
            ]
            kblock[name] = {"matrix": entries}
        lblock = {}
        for j, name in enumerate(self.data.lspec.names):
            entries = [
                [list(mono), render(c)]
                for mono, c in sorted(_poly_coeffs(self.mult_series[j]).items())
            ]
            lblock[name] = {"series": entries}
        return {
            "algebra": self.data.name,
            "character": [str(v) for v in self.character],
            "order": self.order,
            "coords": list(self.ctx.coords),
            "cocommutative": kblock,
            "commutative": lblock,
        }


def induce(
    data: BicrossData,
    character: Character,
    order: int = DEFAULT_ORDER,
    coords: Sequence[str] | None = None,
) -> InducedRep:
    """Build the representation induced by an evaluation point.

    The multiplication series of commutative generator ``j`` collects, per
    model monomial, the flow-expansion coefficient of coordinate ``j``
    evaluated exactly at the inducing point; with several cocommutative
    generators the per-generator flows are composed left to right.  The
    matrices come from :func:`_regular_matrix`.  Raises a series-window
    error if a coefficient would need parameter degrees outside the window.
    """
    a = as_character(data, character)
    ctx = model_context(data, coords)
    r = data.kspec.nvars
    if order < 0:
        raise ValueError("model order must be nonnegative")

    fields = [field_from_action(data, i) for i in range(r)]
    if r == 1:
        tables = flow_map(fields[0], order).coords
    else:
        tables = flow_compose([flow_map(f, order) for f in fields]).coords

    mult: list[ExpPoly] = []
    for j in range(data.lspec.nvars):
        coeffs: Coeffs = {}
        for tmono, coeff in tables[j]:
            ps = ep_eval_series(coeff, a)
            if ps.is_zero():
                if ps.truncated:
                    raise ValueError(
                        f"multiplication-series coefficient of "
                        f"{data.lspec.names[j]} at {tmono} lies entirely "
                        "outside the parameter window; widen the series context"
                    )
                continue
            coeffs[tmono] = ps
        mult.append(_poly_make(ctx, coeffs))

    kmats = tuple(_regular_matrix(data.kspec, i, order) for i in range(r))
    return InducedRep(
        data=data,
        character=a,
        order=order,
        ctx=ctx,
        kmatrices=kmats,
        mult_series=tuple(mult),
    )


def _apply_slot(rep: InducedRep, slot: tuple[str, int], f: Coeffs) -> Coeffs:
    block, idx = slot
    if block == "K":
        return _matrix_apply(rep.kmatrices[idx], f)
    return _convolve(_poly_coeffs(rep.mult_series[idx]), f, rep.order)


def rep_apply(
    rep: InducedRep, generator: int | str, f: ExpPoly | str
) -> ExpPoly:
    """Apply one generator's operator to a model polynomial."""
    if isinstance(f, str):
        f = ep_parse(f, rep.ctx)
    if f.ctx != rep.ctx:
        raise ValueError("polynomial uses a different model context")
    coeffs = _poly_coeffs(f)
    if any(mtotal(m) > rep.order for m in coeffs):
        raise ValueError(
            f"polynomial degree exceeds the model order {rep.order}"
        )
    return _poly_make(rep.ctx, _apply_slot(rep, rep.generator_slot(generator), coeffs))


def series_coefficient(
    rep: InducedRep, generator: int | str, mono: MultiIndex | int
) -> ParamSeries:
    """One coefficient of a commutative generator's multiplication series."""
    block, idx = rep.generator_slot(generator)
    if block != "L":
        raise ValueError("only commutative generators carry a multiplication series")
    if isinstance(mono, int):
        if rep.data.kspec.nvars != 1:
            raise ValueError("plain-integer monomials need a single model coordinate")
        mono = (mono,)
    return _poly_coeffs(rep.mult_series[idx]).get(
        tuple(mono), ps_zero(rep.ctx.sctx)
    )


def series_string(
    rep: InducedRep,
    generator: int | str,
    param_value: float | Fraction | None = None,
) -> str:
    """Display form of a multiplication series, optionally at a parameter value."""
    block, idx = rep.generator_slot(generator)
    if block != "L":
        raise ValueError("only commutative generators carry a multiplication series")
    coeffs = _poly_coeffs(rep.mult_series[idx])
    if not coeffs:
        return "0"
    pieces: list[str] = []
    for mono in sorted(coeffs, key=lambda m: (mtotal(m), m)):
        ps = coeffs[mono]
        body = "*".join(
            name if p == 1 else f"{name}^{p}"
            for name, p in zip(rep.ctx.coords, mono)
            if p
        )
        if param_value is None:
            head = ps_str(ps)
            wrapped = head if (head.isdigit() and not body) else f"({head})"
            text = wrapped if not body else f"{wrapped}*{body}"
            sign = "+"
        else:
            value = Fraction(ps_eval_exact(ps, param_value))
            if value == 0:
                continue
            sign = "+" if value > 0 else "-"
            mag = abs(value)
            if not body:
                text = str(mag) if mag.denominator == 1 else f"({mag})"
            elif mag == 1:
                text = body
            else:
                coef = str(mag) if mag.denominator == 1 else f"({mag})"
                text = f"{coef}*{body}"
        if not pieces:
            pieces.append(text if sign == "+" else f"-{text}")
        else:
            pieces.append(f"{sign} {text}")
    return " ".join(pieces) if pieces else "0"


# ---------------------------------------------------------------------------
# representation-property check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepReport:
    """Exhaustive commutator check of an induced representation."""

    algebra: str
    character: tuple[str, ...]
    order: int
    window: int
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "character": list(self.character),
            "order": self.order,
            "window": self.window,
            "passed": self.passed,
            "conditions": [r.to_json() for r in self.results],
        }


def _apply_nc(rep: InducedRep, el: NCElement, f: Coeffs) -> Coeffs:
    """Apply a combined-presentation element to a model polynomial.

    The model is a right module: a word acts letter by letter with the
    leftmost letter first, so a normal monomial applies its cocommutative
    letters before its commutative ones.
    """
    r = rep.data.kspec.nvars
    out: Coeffs = {}
    for mono, c in el.terms.items():
        cur = dict(f)
        for i in range(r):
            for _ in range(mono[i]):
                cur = _apply_slot(rep, ("K", i), cur)
        for j, p in enumerate(mono[r:]):
            for _ in range(p):
                cur = _apply_slot(rep, ("L", j), cur)
        for m, v in cur.items():
            prod = ps_mul(c, v)
            old = out.get(m)
            nxt = ps_add(old, prod) if old is not None else prod
            if nxt.is_zero():
                out.pop(m, None)
            else:
                out[m] = nxt
    return {m: c for m, c in out.items() if not c.is_zero()}


def _mono_label(names: Sequence[str], mono: MultiIndex) -> str:
    parts = [
        name if p == 1 else f"{name}^{p}"
        for name, p in zip(names, mono)
        if p
    ]
    return "*".join(parts) if parts else "1"


def check_rep_relations(
    rep: InducedRep, spec: AlgebraSpec, window: int = 4
) -> RepReport:
    """Verify the representation property on a basis window, exactly.

    For every generator pair the straightened commutator of the combined
    presentation is applied through the operators and compared with the
    commutator of the operators on every model monomial of total degree
    <= ``window``.  The model is a right module, so the product ``x*y``
    acts as "apply x, then y"; the commutator is composed accordingly.
    Output coefficients are compared up to model degree ``order - g``
    where ``g`` counts the cocommutative letters involved: a
    degree-lowering matrix applied after a truncated multiplication could
    otherwise pull discarded degrees back into view.  When the
    straightened commutator is itself a truncated expansion (its letters
    beyond the degree cap were dropped, taking their top-order parameter
    content with them), the comparison drops one parameter order.
    """
    kspec, lspec = rep.data.kspec, rep.data.lspec
    r = kspec.nvars
    if spec.names != kspec.names + lspec.names:
        raise SpecError(
            "presentation generators do not match the coupling blocks"
        )
    sctx = kspec.sctx
    one = ps_one(sctx)
    results: list[ConditionResult] = []
    for x in range(spec.nvars):
        for y in range(x + 1, spec.nvars):
            gx, gy = nc_gen(spec, x), nc_gen(spec, y)
            comm = nc_sub(nc_mul(gx, gy), nc_mul(gy, gx))
            guard = (1 if x < r else 0) + (1 if y < r else 0)
            guard = max(
                guard,
                max((mtotal(m[:r]) for m in comm.terms), default=0),
            )
            cap = rep.order - guard
            zcap = sctx.zmax - (1 if comm.truncated else 0)
            sx, sy = rep.generator_slot(x), rep.generator_slot(y)
            counter = None
            for q in iter_upto(r, window):
                f: Coeffs = {q: one}
                lhs = _coeffs_sub(
                    _apply_slot(rep, sy, _apply_slot(rep, sx, f)),
                    _apply_slot(rep, sx, _apply_slot(rep, sy, f)),
                )
                rhs = _apply_nc(rep, comm, f)
                diff = _coeffs_sub(lhs, rhs)
                bad = sorted(
                    m
                    for m, c in diff.items()
                    if mtotal(m) <= cap and not ps_restrict(c, zcap).is_zero()
                )
                if bad:
                    m = bad[0]
                    counter = (
                        f"input {_mono_label(rep.ctx.coords, q)}: output "
                        f"{_mono_label(rep.ctx.coords, m)} differs by "
                        f"{ps_str(ps_restrict(diff[m], zcap))}"
                    )
                    break
            results.append(
                ConditionResult(
                    condition=f"commutator {spec.names[x]},{spec.names[y]}",
                    status="pass" if counter is None else "fail",
                    counterexample=counter,
                    degree=window,
                    param_order=zcap,
                )
            )
    return RepReport(
        algebra=rep.data.name,
        character=tuple(str(v) for v in rep.character),
        order=rep.order,
        window=window,
        results=tuple(results),
    )


def check_skew_pairing(rep: InducedRep, generator: int | str = 0) -> ConditionResult:
    """Formal skew-symmetry of a cocommutative generator, exactly.

    Checks ``<rho(k)f, g> + <f, k*.g> = 0`` for all model monomials ``f``
    and enveloping monomials ``g`` up to the model order: the model matrix
    (implementation route) must be the factorial-pairing transpose of
    multiplication by the star image (independent route through the
    straightening engine and the pairing module).  With the shipped
    convention ``k* = -k`` this is the truncated stand-in for
    skew-adjointness of the generator.
    """
    kspec = rep.data.kspec
    block, i = rep.generator_slot(generator)
    if block != "K":
        raise ValueError("skew-symmetry concerns cocommutative generators")
    star_img = kspec.star.get(i)
    if star_img is None:
        raise SpecError(
            f"no star image declared for {kspec.names[i]!r}"
        )
    coordspec = AlgebraSpec(
        name=f"{rep.data.name}:model-coordinates",
        gens=tuple(
            GenInfo(c, g.sector) for c, g in zip(rep.ctx.coords, kspec.gens)
        ),
        sctx=kspec.sctx,
        maxdeg=kspec.maxdeg,
    )
    dp = make_dual_pair(kspec, coordspec)
    one = ps_one(kspec.sctx)
    mat = rep.kmatrices[i]
    counter = None
    for q in iter_upto(kspec.nvars, rep.order):
        rho_f = _matrix_apply(mat, {q: one})
        rho_f_nc = nc_make(coordspec, rho_f)
        f_nc = nc_make(coordspec, {q: one})
        for m in iter_upto(kspec.nvars, rep.order):
            g_nc = nc_make(kspec, {m: one})
            left = pair(dp, g_nc, rho_f_nc)
            right = pair(dp, nc_mul(star_img, g_nc), f_nc)
            total = ps_add(left, right)
            if not total.is_zero():
                counter = (
                    f"f={_mono_label(rep.ctx.coords, q)}, "
                    f"g={_mono_label(kspec.names, m)}: sum {ps_str(total)}"
                )
                break
        if counter:
            break
    return ConditionResult(
        condition=f"skew-pairing {kspec.names[i]}",
        status="pass" if counter is None else "fail",
        counterexample=counter,
        degree=rep.order,
        param_order=kspec.sctx.zmax,
    )


# ---------------------------------------------------------------------------
# group-level local action
# ---------------------------------------------------------------------------


def _advance_point(
    data: BicrossData,
    k: int,
    flow: ClosedFlow | None,
    x: Sequence[float],
    t: float,
    param_value: float,
    step: float,
) -> tuple[float, ...]:
    pt = tuple(float(v) for v in x)
    if flow is not None:
        return tuple(flow.advance(t, pt, param_value))
    field = field_from_action(data, k)
    return flow_numeric(field, pt, t, param_value, h=step).point


def local_rep(
    data: BicrossData,
    c: Sequence[float],
    l: Sequence[float],
    s: float,
    param_value: float,
    *,
    k: int | str = 0,
    flow: ClosedFlow | None = None,
    step: float = DEFAULT_STEP,
) -> tuple[float, tuple[float, ...]]:
    """Action of a group element on a point: scalar factor and moved point.

    ``c`` assigns one real value per cocommutative generator (a character
    of the enveloping factor); the group element built on generator ``k``
    with time ``s`` acts as the scalar ``exp(s*c_k)`` times the flow map.
    Uses the closed flow when given, a fixed-step integration otherwise;
    either signals a domain exit.
    """
    ki = data.kspec.index(k) if isinstance(k, str) else k
    values = tuple(float(v) for v in c)
    if len(values) != data.kspec.nvars:
        raise ValueError(
            f"need one character value per cocommutative generator "
            f"({data.kspec.nvars}), got {len(values)}"
        )
    if not all(math.isfinite(v) for v in values):
        raise ValueError("character values must be finite")
    scalar = math.exp(s * values[ki])
    moved = _advance_point(data, ki, flow, l, s, param_value, step)
    return scalar, moved


def local_scalar(data: BicrossData, generator: int | str, l: Sequence[float]) -> float:
    """A commutative generator acts on a point by its evaluation there."""
    j = data.lspec.index(generator) if isinstance(generator, str) else generator
    if not 0 <= j < data.lspec.nvars:
        raise ValueError(f"generator index {j} out of range")
    return float(l[j])


# ---------------------------------------------------------------------------
# co-space elements and their two-sided actions
# ---------------------------------------------------------------------------


class KGroupElement(NamedTuple):
    """One-parameter group element on a cocommutative generator."""

    s: float
    k: int = 0


@dataclass(frozen=True)
class CoSpaceElement:
    """A mixed pair from one of the two dual co-spaces.

    ``"function-point"``: a polynomial in the group coordinates of the
    cocommutative factor times an evaluation point of the commutative
    spectrum.  ``"point-function"``: a group point (flow time on one
    cocommutative generator) times a function on the commutative spectrum
    (a closed-form expression or, after flow pullbacks, a callable).
    """

    form: str
    function: ExpPoly | Callable[..., float]
    point: tuple[float, ...] | float

    def __post_init__(self) -> None:
        if self.form not in ("function-point", "point-function"):
            raise ValueError(f"unknown co-space form {self.form!r}")
        if self.form == "function-point":
            object.__setattr__(
                self, "point", tuple(float(v) for v in self.point)
            )
            if not isinstance(self.function, ExpPoly):
                raise ValueError(
                    "function-point elements carry a polynomial function part"
                )
        else:
            object.__setattr__(self, "point", float(self.point))


def translate(f: ExpPoly, axis: int, shift) -> ExpPoly:
    """Exact coordinate translation of a polynomial: x_axis -> x_axis + shift."""
    coeffs = _poly_coeffs(f)
    d = Fraction(shift)
    out: Coeffs = {}
    for mono, c in coeffs.items():
        p = mono[axis]
        for t in range(p + 1):
            w = Fraction(math.comb(p, t)) * d ** (p - t)
            if w == 0:
                continue
            key = tuple(t if i == axis else v for i, v in enumerate(mono))
            scaled = ps_scale(c, w)
            cur = out.get(key)
            out[key] = ps_add(cur, scaled) if cur is not None else scaled
    return _poly_make(f.ctx, {m: c for m, c in out.items() if not c.is_zero()})


def _require_abelian(kspec: AlgebraSpec) -> None:
    if kspec.rules:
        raise NotImplementedError(
            "group translations on the coordinate model are implemented "
            "for an abelian cocommutative factor only"
        )


def _mult_series_poly(
    data: BicrossData,
    generator: int,
    point: Sequence[float],
    order: int,
    ctx: ExprContext,
) -> ExpPoly:
    """Multiplication series of one commutative generator at a point."""
    rep_coords = ctx.coords
    rep = induce(data, [Fraction(v) for v in point], order, rep_coords)
    return rep.mult_series[generator]


def _as_callable(
    fn: ExpPoly | Callable[..., float], param_value: float
) -> Callable[[Sequence[float]], float]:
    if isinstance(fn, ExpPoly):
        return lambda pt: ep_eval(fn, tuple(pt), param_value)
    return lambda pt: float(fn(tuple(pt)))


def cospace_act(
    element: CoSpaceElement,
    actor,
    side: str,
    *,
    data: BicrossData | None = None,
    param_value: float | None = None,
    flow: ClosedFlow | None = None,
    order: int = DEFAULT_ORDER,
    step: float = DEFAULT_STEP,
):
    """Act on a co-space element from one side.

    Actors: :class:`KGroupElement` for group elements of the cocommutative
    factor, or a commutative generator (name/index, ``data`` required).
    On ``"function-point"`` elements: group elements translate the function
    part (both sides) and move the point via the flow (left side only);
    commutative generators act from the left by the scalar evaluation at
    the point (returned as ``(scalar, element)``) and from the right by
    multiplying the function part with the generator's multiplication
    series at the point.  On ``"point-function"`` elements the actions are
    plain algebra multiplications: group times shift the point part, and a
    right group factor (or a left commutative factor) drags the function
    part through the flow, which turns it into a callable.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")

    if element.form == "function-point":
        point = element.point
        if isinstance(actor, KGroupElement):
            if data is not None:
                _require_abelian(data.kspec)
            shifted = translate(element.function, actor.k, Fraction(actor.s))
            if side == "right":
                return CoSpaceElement("function-point", shifted, point)
            if data is None or param_value is None:
                raise ValueError(
                    "left group action needs coupling data and a parameter value"
                )
            moved = _advance_point(
                data, actor.k, flow, point, actor.s, param_value, step
            )
            return CoSpaceElement("function-point", shifted, moved)
        if data is None:
            raise ValueError("commutative-generator actions need coupling data")
        j = (
            data.lspec.index(actor)
            if isinstance(actor, str)
            else int(actor)
        )
        if side == "left":
            return local_scalar(data, j, point), element
        series = _mult_series_poly(
            data, j, point, order, element.function.ctx
        )
        product = ep_mul(series, element.function)
        kept = {
            m: c
            for m, c in _poly_coeffs(product).items()
            if mtotal(m) <= order
        }
        return CoSpaceElement(
            "function-point", _poly_make(element.function.ctx, kept), point
        )

    # point-function form: multiplication in the coupled algebra
    s0 = element.point
    if isinstance(actor, KGroupElement):
        if data is not None:
            _require_abelian(data.kspec)
        if side == "left":
            return CoSpaceElement(
                "point-function", element.function, actor.s + s0
            )
        if param_value is None:
            raise ValueError("right group action needs a parameter value")
        if data is None and flow is None:
            raise ValueError(
                "right group action needs coupling data or a closed flow"
            )
        base = _as_callable(element.function, param_value)

        def dragged(pt: Sequence[float]) -> float:
            moved = _advance_point(
                data, actor.k, flow, pt, actor.s, param_value, step
            )
            return base(moved)

        return CoSpaceElement("point-function", dragged, s0 + actor.s)
    if data is None:
        raise ValueError("commutative-generator actions need coupling data")
    j = data.lspec.index(actor) if isinstance(actor, str) else int(actor)
    ectx = data.expr_context()
    coord = ep_parse(data.lspec.names[j], ectx)
    if side == "right" and isinstance(element.function, ExpPoly):
        return CoSpaceElement(
            "point-function", ep_mul(element.function, coord), s0
        )
    if param_value is None:
        raise ValueError("this action needs a parameter value")
    base = _as_callable(element.function, param_value)
    if side == "right":
        factor = _as_callable(coord, param_value)
        product = lambda pt: base(pt) * factor(pt)  # noqa: E731
        return CoSpaceElement("point-function", product, s0)

    def pulled(pt: Sequence[float]) -> float:
        moved = _advance_point(data, 0, flow, pt, s0, param_value, step)
        return float(moved[j]) * base(pt)

    return CoSpaceElement("point-function", pulled, s0)


# ---------------------------------------------------------------------------
# orbit equivalence of induced models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of the translation-intertwiner check along a flow orbit."""

    algebra: str
    point: tuple[float, ...]
    time: float
    target: tuple[float, ...]
    tolerance: float
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "point": list(self.point),
            "time": self.time,
            "target": list(self.target),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "conditions": [r.to_json() for r in self.results],
        }


def equivalence_check(
    data: BicrossData,
    l: Sequence[float],
    s: float,
    functions: Sequence[ExpPoly] | None = None,
    generators: Sequence[int | str] | None = None,
    *,
    param_value: float,
    flow: ClosedFlow | None = None,
    target: Sequence[float] | None = None,
    grid: Sequence[float] = DEFAULT_EVAL_GRID,
    k: int | str = 0,
    tol: float = 1e-8,
    step: float = DEFAULT_STEP,
    coords: Sequence[str] | None = None,
) -> EquivalenceReport:
    """Numerically verify that translation intertwines two induced models.

    The model induced at ``l`` and the model induced at the flow-advanced
    point are related by translating the group coordinate by ``s``: for
    every sampled commutative generator, sample function and grid value
    ``t``, the generator's action at ``l`` evaluated at ``t + s`` must
    equal its action at the advanced point evaluated at ``t`` (both routes
    go through independent flow evaluations), within ``tol``.  Passing an
    explicit ``target`` forces the identification with an arbitrary point;
    for targets off the orbit the check fails, which serves as the
    negative control.  Translation itself must commute with the
    regular-action matrices exactly; that condition is symbolic.
    """
    _require_abelian(data.kspec)
    ki = data.kspec.index(k) if isinstance(k, str) else k
    ctx = model_context(data, coords)
    if functions is None:
        one = ps_one(ctx.sctx)
        functions = [
            _poly_make(ctx, {mono: one})
            for mono in iter_upto(data.kspec.nvars, 2)
        ]
    if generators is None:
        generators = tuple(range(data.lspec.nvars))
    start = tuple(float(v) for v in l)
    moved = (
        tuple(float(v) for v in target)
        if target is not None
        else _advance_point(data, ki, flow, start, s, param_value, step)
    )
    sctx = data.kspec.sctx

    results: list[ConditionResult] = []
    for gen in generators:
        j = data.lspec.index(gen) if isinstance(gen, str) else int(gen)
        name = data.lspec.names[j]
        for f in functions:
            counter = None
            for t in grid:
                shifted = [0.0] * data.kspec.nvars
                shifted[ki] = t + s
                here = [0.0] * data.kspec.nvars
                here[ki] = t
                fval = ep_eval(f, tuple(shifted), param_value)
                lhs = (
                    _advance_point(
                        data, ki, flow, start, t + s, param_value, step
                    )[j]
                    * fval
                )
                rhs = (
                    _advance_point(
                        data, ki, flow, moved, t, param_value, step
                    )[j]
                    * fval
                )
                if abs(lhs - rhs) > tol:
                    counter = (
                        f"grid value {t}: {lhs!r} != {rhs!r} "
                        f"(difference {lhs - rhs:.3e})"
                    )
                    break
            results.append(
                ConditionResult(
                    condition=f"intertwiner {name} on {f}",
                    status="pass" if counter is None else "fail",
                    counterexample=counter,
                    degree=DEFAULT_ORDER,
                    param_order=sctx.zmax,
                )
            )

    mat = _regular_matrix(data.kspec, ki, DEFAULT_ORDER)
    shift = Fraction(s)
    for f in functions:
        coeffs = _poly_coeffs(f)
        lhs = _matrix_apply(
            mat, _poly_coeffs(translate(f, ki, shift))
        )
        rhs = _poly_coeffs(
            translate(_poly_make(ctx, _matrix_apply(mat, coeffs)), ki, shift)
        )
        diff = _coeffs_sub(lhs, rhs)
        counter = None
        if diff:
            m = sorted(diff)[0]
            counter = (
                f"output {_mono_label(ctx.coords, m)} differs by "
                f"{ps_str(diff[m])}"
            )
        results.append(
            ConditionResult(
                condition=f"translation-commutes {f}",
                status="pass" if counter is None else "fail",
                counterexample=counter,
                degree=DEFAULT_ORDER,
                param_order=sctx.zmax,
            )
        )

    return EquivalenceReport(
        algebra=data.name,
        point=start,
        time=float(s),
        target=tuple(moved),
        tolerance=tol,
        results=tuple(results),
    )
