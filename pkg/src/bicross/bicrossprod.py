"""Bicrossproduct assembly: coupling data in, coupled Hopf presentation out.

A right-left bicrossproduct couples a cocommutative factor (primitive
generators, the ``K`` block) to a commutative Hopf factor (the ``L`` block)
through two pieces of data: a right action of the first on the second, where
each primitive generator acts as a derivation given on the ``L`` generators
by a table, and a left coaction in *group-like dressing* form
``k ◄ = β_k ⊗ k`` with ``β_k`` an invertible ``L``-sector series.  The
assembled algebra has straightening rules ``[l, k] = l ⊲ k``, dressed
coproducts ``Δk = k⊗1 + β_k⊗k``, the ``L``-factor structure verbatim on the
``L`` block, and antipode ``S(k) = -S_L(β_k)·k`` (normal-ordered).

:func:`check_compatibility` verifies the five coupling conditions that make
the assembled object a Hopf algebra, sweeping monomials and words up to a
degree bound.  Both sides of every condition are recomputed from the factor
data alone — never through the assembled product — so the check cannot
confirm its own construction.

The involution (:func:`star_apply`) extends per-generator star data
antimultiplicatively over normal monomials.  All scalars in this engine are
series with rational coefficients in a real parameter, so the antilinear
conjugation on coefficients is the identity.

The ``.bicross`` file format carries the coupling data: sections
``[bicross]`` (metadata, as in ``.alg``), ``[generators]`` (K block first),
``[action]`` (keys ``l, k``), ``[coaction]`` (the dressing ``β_k`` per
``K``-generator), ``[coproduct]``/``[counit]``/``[antipode]`` for the
``L``-factor structure, and optional ``[star]`` with per-generator images
parsed in the owning factor.  All values use the shared expression grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .expr import ExprContext, ExpPoly, ep_parse
from .multiindex import MultiIndex, iter_upto, madd, mtotal, munit, mzero
from .ncalg import (
    AlgebraSpec,
    GenInfo,
    NCElement,
    SpecError,
    TensorElement,
    _min_letter,
    _mono_str,
    _mono_word,
    _split_sections,
    apply_antipode,
    apply_coproduct,
    apply_counit,
    nc_add,
    nc_gen,
    nc_make,
    nc_mul,
    nc_neg,
    nc_one,
    nc_pow,
    nc_restrict,
    nc_scale,
    nc_str,
    nc_sub,
    nc_zero,
    normal_order,
    parse_nc,
    parse_tensor_sum,
    primitive_spec,
    tensor_add,
    tensor_from_slots,
    tensor_map_slot,
    tensor_restrict,
    tensor_scale,
    tensor_str,
    tensor_sub,
    tensor_zero,
    validate_spec,
)
from .paramseries import (
    SeriesContext,
    ps_mul,
    ps_one,
    ps_restrict,
    ps_str,
    ps_sub,
    ps_zero,
)

Word = Sequence[int]


# ---------------------------------------------------------------------------
# coupling data
# ---------------------------------------------------------------------------


@dataclass
class BicrossData:
    """Action/coaction data coupling a cocommutative and a commutative factor.

    ``kspec`` is the primitive presentation of the cocommutative factor (its
    own coproduct is undeformed); ``lspec`` is the commutative factor with
    its full Hopf structure.  ``action[(l, k)]`` is the value ``l ⊲ k`` as an
    ``lspec`` element (missing pairs act as zero); ``dressing[k]`` is the
    group-like ``β_k`` (missing means trivial, ``β_k = 1``).  Optional star
    data lives per factor.

    ``action_closed`` mirrors ``action`` in closed exp-polynomial form.  The
    ``lspec`` elements expand exponentials into truncated polynomials, which
    is what the algebraic checks need, but the flow machinery needs the exact
    closed form; the file parser fills both from the same source text.
    Pairs absent from the mirror fall back to the polynomial value when it
    is exact (untruncated).
    """

    name: str
    kspec: AlgebraSpec
    lspec: AlgebraSpec
    action: dict[tuple[int, int], NCElement]
    dressing: dict[int, NCElement]
    star_k: dict[int, NCElement] = field(default_factory=dict)
    star_l: dict[int, NCElement] = field(default_factory=dict)
    action_closed: dict[tuple[int, int], ExpPoly] = field(default_factory=dict)
    _action_cache: dict = field(default_factory=dict, repr=False)

    def action_value(self, l: int, k: int) -> NCElement:
        return self.action.get((l, k), nc_zero(self.lspec))

    def expr_context(self) -> ExprContext:
        """The commutative factor's generators viewed as coordinates."""
        return ExprContext(self.lspec.names, self.lspec.sctx)

    def beta(self, k: int) -> NCElement:
        return self.dressing.get(k, nc_one(self.lspec))

    def kword(self, word: Sequence[int | str]) -> Word:
        return tuple(
            self.kspec.index(w) if isinstance(w, str) else w for w in word
        )


def validate_bicross_data(data: BicrossData) -> None:
    """Structural invariants of the coupling data (raises :class:`SpecError`).

    The compatibility *conditions* are a separate, report-producing check;
    this only rejects data the construction cannot consume at all.
    """
    kspec, lspec = data.kspec, data.lspec
    if kspec.sctx != lspec.sctx or kspec.maxdeg != lspec.maxdeg:
        raise SpecError(
            "the two factors must share the series context and expansion cap"
        )
    if kspec.rules:
        raise SpecError("the cocommutative factor must be presented relation-free")
    if lspec.rules:
        raise SpecError("the commutative factor must be presented relation-free")
    overlap = set(kspec.names) & set(lspec.names)
    if overlap:
        raise SpecError(f"factor generator names collide: {sorted(overlap)}")
    for j in range(lspec.nvars):
        for table, what in (
            (lspec.coproduct, "coproduct"),
            (lspec.counit, "counit"),
            (lspec.antipode, "antipode"),
        ):
            if j not in table:
                raise SpecError(
                    f"no {what} declared for {lspec.names[j]!r} in the "
                    "commutative factor"
                )
    for (l, k), value in data.action.items():
        if not (0 <= l < lspec.nvars and 0 <= k < kspec.nvars):
            raise SpecError(f"action key {(l, k)} out of range")
        if value.alg.signature() != lspec.signature():
            raise SpecError("action values must live in the commutative factor")
    for k, beta in data.dressing.items():
        if not 0 <= k < kspec.nvars:
            raise SpecError(f"coaction key {k} out of range")
        if beta.alg.signature() != lspec.signature():
            raise SpecError("dressings must live in the commutative factor")
        if mzero(lspec.nvars) not in beta.terms:
            raise SpecError(
                f"dressing for {kspec.names[k]!r} has no constant term and "
                "cannot be invertible"
            )
    ectx = data.expr_context()
    for pair, closed in data.action_closed.items():
        if pair not in data.action:
            raise SpecError(f"closed action value {pair} has no polynomial twin")
        if closed.ctx != ectx:
            raise SpecError(
                "closed action values must use the commutative factor's "
                "coordinates and series context"
            )


# ---------------------------------------------------------------------------
# the action, extended to all of the commutative factor and to words
# ---------------------------------------------------------------------------


def _action_letter_mono(data: BicrossData, mono: MultiIndex, k: int) -> NCElement:
    """``(normal monomial) ⊲ k`` by the derivation property, memoized."""
    key = (mono, k)
    cached = data._action_cache.get(key)
    if cached is not None:
        return cached
    lspec = data.lspec
    i = _min_letter(mono)
    if i is None:
        out = nc_zero(lspec)  # 1 ⊲ k = ε(k)·1 = 0 for primitive k
    else:
        rest = tuple(p - 1 if t == i else p for t, p in enumerate(mono))
        head = nc_mul(
            data.action_value(i, k), nc_make(lspec, {rest: ps_one(lspec.sctx)})
        )
        tail = nc_mul(nc_gen(lspec, i), _action_letter_mono(data, rest, k))
        out = nc_add(head, tail)
    data._action_cache[key] = out
    return out


def _require_in_lspec(data: BicrossData, el: NCElement) -> None:
    if el.alg.signature() != data.lspec.signature():
        raise SpecError("the action only applies to commutative-factor elements")


def action_letter(data: BicrossData, el: NCElement, k: int | str) -> NCElement:
    """Right action of one primitive generator on a commutative-factor element."""
    _require_in_lspec(data, el)
    ki = data.kspec.index(k) if isinstance(k, str) else k
    out = nc_zero(data.lspec)
    for mono, coeff in el.terms.items():
        out = nc_add(out, nc_scale(_action_letter_mono(data, mono, ki), coeff))
    return out


def action_extend(
    data: BicrossData, el: NCElement, kword: Sequence[int | str]
) -> NCElement:
    """Iterated action ``l ⊲ (k k' ...)``: leftmost letter acts first."""
    _require_in_lspec(data, el)
    for k in kword:
        el = action_letter(data, el, k)
    return el


# ---------------------------------------------------------------------------
# the coaction, extended to words
# ---------------------------------------------------------------------------
#
# Coaction values are maps ``K-monomial -> L-element``: the second tensor slot
# is a normal monomial of the cocommutative factor, the first slot its
# commutative-factor coefficient.

Coaction = dict[MultiIndex, NCElement]


def _coaction_add(acc: Coaction, key: MultiIndex, value: NCElement) -> None:
    acc[key] = nc_add(acc[key], value) if key in acc else value


def _coaction_prune(acc: Coaction) -> Coaction:
    return {k: v for k, v in acc.items() if not v.is_zero()}


def coaction_word(data: BicrossData, kword: Sequence[int | str]) -> Coaction:
    """Left coaction of a word in the cocommutative generators.

    Extends the generator data ``k ◄ = β_k ⊗ k`` one letter at a time by the
    product rule: appending ``k`` to a word with coaction ``Σ A_t ⊗ B_t``
    yields ``Σ (A_t ⊲ k) ⊗ B_t + A_t β_k ⊗ B_t k``.
    """
    kspec, lspec = data.kspec, data.lspec
    out: Coaction = {mzero(kspec.nvars): nc_one(lspec)}
    for k in data.kword(kword):
        beta = data.beta(k)
        unit = munit(kspec.nvars, k)
        nxt: Coaction = {}
        for mono, coeff in out.items():
            _coaction_add(nxt, mono, action_letter(data, coeff, k))
            _coaction_add(nxt, madd(mono, unit), nc_mul(coeff, beta))
        out = _coaction_prune(nxt)
    return out


def _coaction_split(data: BicrossData, left: Word, right: Word) -> Coaction:
    """Coaction of the concatenation ``left·right`` via the product rule.

    Independently recomputes ``(u w)◄`` from ``u◄``, the cocommutative
    coproduct of ``w``, and the letter-built coactions of its right legs:
    ``(u w)◄ = Σ (u⁽¹⁾ ⊲ w₍₁₎)·(w₍₂₎)⁽¹⁾ ⊗ u⁽²⁾·(w₍₂₎)⁽²⁾``.
    """
    kspec = data.kspec
    cu = coaction_word(data, left)
    dw = apply_coproduct(normal_order(kspec, list(right)))
    out: Coaction = {}
    for (w1, w2), coeff in dw.terms.items():
        cw2 = coaction_word(data, _mono_word(w2))
        for mono_u, a_u in cu.items():
            acted = action_extend(data, a_u, _mono_word(w1))
            if acted.is_zero():
                continue
            for mono_w, a_w in cw2.items():
                _coaction_add(
                    out,
                    madd(mono_u, mono_w),
                    nc_scale(nc_mul(acted, a_w), coeff),
                )
    return _coaction_prune(out)


def _coaction_restrict(c: Coaction, window: int, zorder: int) -> Coaction:
    out: Coaction = {}
    for mono, value in c.items():
        kdeg = mtotal(mono)
        if kdeg > window:
            continue
        clipped = nc_restrict(value, maxdeg=window - kdeg, zorder=zorder)
        if not clipped.is_zero():
            out[mono] = clipped
    return out


def _coaction_diff(
    a: Coaction, b: Coaction, window: int, zorder: int
) -> Coaction:
    keys = set(a) | set(b)
    diff: Coaction = {}
    for key in keys:
        va = a.get(key)
        vb = b.get(key)
        if va is None:
            d = nc_neg(vb)
        elif vb is None:
            d = va
        else:
            d = nc_sub(va, vb)
        if not d.is_zero():
            diff[key] = d
    return _coaction_restrict(diff, window, zorder)


def _coaction_str(data: BicrossData, c: Coaction) -> str:
    parts = []
    for mono in sorted(c, reverse=True):
        right = _mono_str(data.kspec, mono) or "1"
        parts.append(f"({nc_str(c[mono])}) @ {right}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# the five compatibility conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of one compatibility-condition sweep."""

    condition: str
    status: str  # "pass" or "fail"
    counterexample: str | None
    degree: int
    param_order: int

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "condition": self.condition,
            "status": self.status,
            "degree": self.degree,
            "paramOrder": self.param_order,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass(frozen=True)
class CompatibilityReport:
    """All five condition outcomes for one coupling-data set."""

    algebra: str
    degree: int
    param_order: int
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "degree": self.degree,
            "paramOrder": self.param_order,
            "passed": self.passed,
            "conditions": [r.to_json() for r in self.results],
        }


CONDITION_ORDER = (
    "action-counit",
    "action-coproduct",
    "coaction-unit",
    "coaction-product",
    "action-coaction-interchange",
)


def _clip(text: str, limit: int = 200) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _word_name(kspec: AlgebraSpec, word: Word) -> str:
    return "*".join(kspec.names[k] for k in word) if word else "1"


def check_compatibility(
    data: BicrossData, degree: int = 2, zorder: int | None = None
) -> CompatibilityReport:
    """Verify the five coupling conditions on degree-``degree`` sweeps.

    Sweeps run over normal monomials of the commutative factor and words in
    the cocommutative generators with the stated total-degree bounds; the
    report carries one entry per condition with the first counterexample.
    """
    validate_bicross_data(data)
    kspec, lspec = data.kspec, data.lspec
    if degree > lspec.maxdeg:
        raise ValueError(
            f"check degree {degree} exceeds the expansion cap {lspec.maxdeg}"
        )
    zcap = lspec.sctx.zmax if zorder is None else zorder
    window = lspec.maxdeg
    lmonos = list(lspec.basis(degree))
    kwords = [_mono_word(m) for m in iter_upto(kspec.nvars, degree)]
    results: list[ConditionResult] = []

    def record(condition: str, counterexample: str | None) -> None:
        results.append(
            ConditionResult(
                condition=condition,
                status="pass" if counterexample is None else "fail",
                counterexample=counterexample,
                degree=degree,
                param_order=zcap,
            )
        )

    def lmono_el(mono: MultiIndex) -> NCElement:
        return nc_make(lspec, {mono: ps_one(lspec.sctx)})

    def lmono_name(mono: MultiIndex) -> str:
        return _mono_str(lspec, mono) or "1"

    # --- counit of action values --------------------------------------------
    bad = None
    for lm in lmonos:
        el = lmono_el(lm)
        eps_l = apply_counit(el)
        for word in kwords:
            eps_k = apply_counit(normal_order(kspec, list(word)))
            eps_lhs = apply_counit(action_extend(data, el, word))
            resid = ps_restrict(ps_sub(eps_lhs, ps_mul(eps_l, eps_k)), zcap)
            if not resid.is_zero():
                bad = (
                    f"{lmono_name(lm)} ⊲ {_word_name(kspec, word)}: "
                    f"counit mismatch {ps_str(resid)}"
                )
                break
        if bad:
            break
    record("action-counit", bad)

    # --- coproduct of action values -----------------------------------------
    bad = None
    for lm in lmonos:
        el = lmono_el(lm)
        for word in kwords:
            if not word:
                continue
            lhs = apply_coproduct(action_extend(data, el, word))
            rhs = tensor_zero(lspec, 2)
            dl = apply_coproduct(el)
            dw = apply_coproduct(normal_order(kspec, list(word)))
            for (w1, w2), coeff in dw.terms.items():
                cw2 = coaction_word(data, _mono_word(w2))
                word1 = _mono_word(w1)
                for mono_b, a_b in cw2.items():
                    word_b = _mono_word(mono_b)
                    part = tensor_map_slot(
                        dl,
                        0,
                        lambda mm: nc_mul(
                            action_extend(data, lmono_el(mm), word1), a_b
                        ),
                    )
                    part = tensor_map_slot(
                        part,
                        1,
                        lambda mm: action_extend(data, lmono_el(mm), word_b),
                    )
                    rhs = tensor_add(rhs, tensor_scale(part, coeff))
            diff = tensor_restrict(
                tensor_sub(lhs, rhs), maxdeg=window, zorder=zcap
            )
            if not diff.is_zero():
                bad = (
                    f"{lmono_name(lm)} ⊲ {_word_name(kspec, word)}: "
                    f"residual {_clip(tensor_str(diff))}"
                )
                break
        if bad:
            break
    record("action-coproduct", bad)

    # --- unit coaction and group-like dressings ------------------------------
    bad = None
    empty = coaction_word(data, ())
    unit_expected: Coaction = {mzero(kspec.nvars): nc_one(lspec)}
    if _coaction_diff(empty, unit_expected, window, zcap):
        bad = f"1◄ = {_coaction_str(data, empty)}"
    else:
        for k in range(kspec.nvars):
            beta = data.beta(k)
            grouplike = tensor_restrict(
                tensor_sub(
                    apply_coproduct(beta), tensor_from_slots([beta, beta])
                ),
                maxdeg=window,
                zorder=zcap,
            )
            eps_beta = ps_restrict(
                ps_sub(apply_counit(beta), ps_one(lspec.sctx)), zcap
            )
            if not grouplike.is_zero():
                bad = (
                    f"dressing for {kspec.names[k]!r} is not group-like: "
                    f"residual {_clip(tensor_str(grouplike))}"
                )
                break
            if not eps_beta.is_zero():
                bad = (
                    f"dressing for {kspec.names[k]!r} has counit "
                    f"1 + {ps_str(eps_beta)}"
                )
                break
    record("coaction-unit", bad)

    # --- coaction of products ------------------------------------------------
    bad = None
    for left in kwords:
        for right in kwords:
            if len(left) + len(right) > degree:
                continue
            built = coaction_word(data, left + right)
            split = _coaction_split(data, left, right)
            diff = _coaction_diff(built, split, window, zcap)
            if diff:
                bad = (
                    f"split {_word_name(kspec, left)} | "
                    f"{_word_name(kspec, right)}: residual "
                    f"{_clip(_coaction_str(data, diff))}"
                )
                break
        if bad:
            break
    record("coaction-product", bad)

    # --- action/coaction interchange -----------------------------------------
    bad = None
    for lm in lmonos:
        el = lmono_el(lm)
        for word in kwords:
            dw = apply_coproduct(normal_order(kspec, list(word)))
            lhs: Coaction = {}
            rhs: Coaction = {}
            for (w1, w2), coeff in dw.terms.items():
                acted = action_extend(data, el, _mono_word(w2))
                for mono_b, a_b in coaction_word(data, _mono_word(w1)).items():
                    _coaction_add(
                        lhs, mono_b, nc_scale(nc_mul(a_b, acted), coeff)
                    )
                acted1 = action_extend(data, el, _mono_word(w1))
                for mono_b, a_b in coaction_word(data, _mono_word(w2)).items():
                    _coaction_add(
                        rhs, mono_b, nc_scale(nc_mul(acted1, a_b), coeff)
                    )
            diff = _coaction_diff(
                _coaction_prune(lhs), _coaction_prune(rhs), window, zcap
            )
            if diff:
                bad = (
                    f"{lmono_name(lm)}, {_word_name(kspec, word)}: residual "
                    f"{_clip(_coaction_str(data, diff))}"
                )
                break
        if bad:
            break
    record("action-coaction-interchange", bad)

    return CompatibilityReport(
        algebra=data.name,
        degree=degree,
        param_order=zcap,
        results=tuple(results),
    )


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def _shift_mono(mono: MultiIndex, offset: int, nvars: int) -> MultiIndex:
    out = [0] * nvars
    for t, p in enumerate(mono):
        out[offset + t] = p
    return tuple(out)


def _embed(el: NCElement, alg: AlgebraSpec, offset: int) -> NCElement:
    return nc_make(
        alg,
        {
            _shift_mono(m, offset, alg.nvars): c
            for m, c in el.terms.items()
        },
        el.truncated,
    )


def _embed_tensor(t: TensorElement, alg: AlgebraSpec, offset: int) -> TensorElement:
    terms = {
        tuple(_shift_mono(m, offset, alg.nvars) for m in key): c
        for key, c in t.terms.items()
    }
    return TensorElement(alg, t.arity, terms, t.truncated)


def build_bicross(data: BicrossData) -> AlgebraSpec:
    """Assemble the coupled Hopf presentation from validated coupling data.

    The generator order is the ``K`` block followed by the ``L`` block, so
    normal ordering puts cocommutative letters first.  Action values are
    ``K``-free by construction, which keeps the presentation inside the
    admissible straightening class; :func:`validate_spec` asserts this.
    """
    validate_bicross_data(data)
    kspec, lspec = data.kspec, data.lspec
    loff = kspec.nvars
    alg = AlgebraSpec(
        name=data.name,
        gens=kspec.gens + lspec.gens,
        sctx=kspec.sctx,
        maxdeg=kspec.maxdeg,
    )
    for (l, k), value in sorted(data.action.items()):
        if not value.is_zero():
            alg.rules[(k, l + loff)] = _embed(value, alg, loff)
    for k in range(kspec.nvars):
        gk = nc_gen(alg, k)
        one = nc_one(alg)
        alg.coproduct[k] = tensor_add(
            tensor_from_slots([gk, one]),
            tensor_from_slots([_embed(data.beta(k), alg, loff), gk]),
        )
        alg.counit[k] = kspec.counit[k]
    for j in range(lspec.nvars):
        alg.coproduct[j + loff] = _embed_tensor(lspec.coproduct[j], alg, loff)
        alg.counit[j + loff] = lspec.counit[j]
        alg.antipode[j + loff] = _embed(lspec.antipode[j], alg, loff)
    # Antipode on the cocommutative block: S(k) = -S_L(β_k)·k, straightened
    # against the freshly installed rules.
    alg.clear_caches()
    for k in range(kspec.nvars):
        s_beta = apply_antipode(data.beta(k))
        alg.antipode[k] = nc_neg(
            nc_mul(_embed(s_beta, alg, loff), nc_gen(alg, k))
        )
    for k, img in data.star_k.items():
        alg.star[k] = _embed(img, alg, 0)
    for l, img in data.star_l.items():
        alg.star[l + loff] = _embed(img, alg, loff)
    validate_spec(alg)
    return alg


# ---------------------------------------------------------------------------
# involution
# ---------------------------------------------------------------------------


def _star_mono(alg: AlgebraSpec, mono: MultiIndex) -> NCElement:
    """Star of a normal monomial (antimorphism: reversed word), cached."""
    cached = alg._star_cache.get(mono)
    if cached is not None:
        return cached
    out = nc_one(alg)
    for i, p in enumerate(mono):
        if not p:
            continue
        img = alg.star.get(i)
        if img is None:
            raise SpecError(f"no star image declared for {alg.gens[i].name!r}")
        out = nc_mul(nc_pow(img, p), out)
    alg._star_cache[mono] = out
    return out


def star_apply(alg: AlgebraSpec, el: NCElement) -> NCElement:
    """Involution from per-generator star data, extended antimultiplicatively.

    Coefficients are series with rational coefficients in a real parameter,
    so the antilinear conjugation is the identity on scalars.
    """
    if el.alg.signature() != alg.signature():
        raise SpecError("element does not belong to the given presentation")
    out = nc_zero(alg)
    for mono, coeff in el.terms.items():
        out = nc_add(out, nc_scale(_star_mono(alg, mono), coeff))
    return out


# ---------------------------------------------------------------------------
# .bicross file format
# ---------------------------------------------------------------------------


def parse_bicrossfile(text: str) -> BicrossData:
    """Parse a ``.bicross`` coupling-data file into validated data."""
    sections = _split_sections(text)
    if "bicross" not in sections or "generators" not in sections:
        raise SpecError(
            "a .bicross file needs [bicross] and [generators] sections"
        )
    meta = dict(sections["bicross"])
    name = meta.get("name", "unnamed")
    param = meta.get("param", "z")
    inverted = meta.get("param-style", "direct").lower() == "inverse"
    floor = int(meta.get("param-floor", 2))
    cap = int(meta.get("param-cap", 8))
    maxdeg = int(meta.get("maxdeg", 8))
    sctx = SeriesContext(param=param, bmax=floor, zmax=cap, inverted=inverted)

    knames: list[str] = []
    lnames: list[str] = []
    for gname, sector in sections["generators"]:
        sector = sector.strip().upper()
        if sector == "K":
            knames.append(gname)
        elif sector == "L":
            lnames.append(gname)
        else:
            raise SpecError(f"unknown sector tag {sector!r} for {gname!r}")
    if not knames or not lnames:
        raise SpecError("coupling data needs both a K block and an L block")

    kspec = primitive_spec(f"{name}:cocommutative", knames, sctx, maxdeg)
    lspec = AlgebraSpec(
        name=f"{name}:commutative",
        gens=tuple(GenInfo(n, "L") for n in lnames),
        sctx=sctx,
        maxdeg=maxdeg,
    )
    for key, value in sections.get("counit", []):
        el = parse_nc(value, lspec)
        scalar = el.terms.get(mzero(lspec.nvars))
        if el.terms and set(el.terms) != {mzero(lspec.nvars)}:
            raise SpecError(f"counit of {key!r} is not scalar")
        lspec.counit[lspec.index(key)] = (
            scalar if scalar is not None else ps_zero(sctx)
        )
    for key, value in sections.get("coproduct", []):
        lspec.coproduct[lspec.index(key)] = parse_tensor_sum(value, lspec)
    for key, value in sections.get("antipode", []):
        lspec.antipode[lspec.index(key)] = parse_nc(value, lspec)
    validate_spec(lspec)

    action: dict[tuple[int, int], NCElement] = {}
    action_closed: dict[tuple[int, int], ExpPoly] = {}
    ectx = ExprContext(lspec.names, sctx)
    for key, value in sections.get("action", []):
        names = [part.strip() for part in key.split(",")]
        if len(names) != 2:
            raise SpecError(f"action key {key!r} must be 'l, k'")
        lname, kname = names
        pair = (lspec.index(lname), kspec.index(kname))
        el = parse_nc(value, lspec)
        if not el.is_zero():
            action[pair] = el
            action_closed[pair] = ep_parse(value, ectx)
    dressing: dict[int, NCElement] = {}
    for key, value in sections.get("coaction", []):
        dressing[kspec.index(key)] = parse_nc(value, lspec)
    star_k: dict[int, NCElement] = {}
    star_l: dict[int, NCElement] = {}
    for key, value in sections.get("star", []):
        if key in knames:
            star_k[kspec.index(key)] = parse_nc(value, kspec)
        else:
            star_l[lspec.index(key)] = parse_nc(value, lspec)
    # Mirror the star data onto the factor presentations so the involution
    # can be applied inside either factor as well as in the assembly.
    kspec.star.update(star_k)
    lspec.star.update(star_l)

    data = BicrossData(
        name=name,
        kspec=kspec,
        lspec=lspec,
        action=action,
        dressing=dressing,
        star_k=star_k,
        star_l=star_l,
        action_closed=action_closed,
    )
    validate_bicross_data(data)
    return data
