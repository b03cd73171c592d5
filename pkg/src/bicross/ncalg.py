"""Noncommutative algebra layer: presentations, straightening, tensors.

An :class:`AlgebraSpec` presents a finitely generated algebra by an ordered
list of generators (split into a cocommutative ``K`` block followed by a
commutative-sector ``L`` block), a table of commutation rules
``[g_j, g_i] = g_j g_i - g_i g_j`` for ``i < j`` whose values are already
normal-ordered, and per-generator coproduct / counit / antipode data.
Elements (:class:`NCElement`) are linear combinations of normal-ordered
monomials ``g_0^{m_0} ... g_r^{m_r}`` with truncated-series coefficients.

Straightening moves every product back to normal order by the leftmost-swap
rewrite ``g b g a -> g a g b + [g_b, g_a]`` (memoized, step-bounded).
Products never drop monomials; truncation happens only (a) in the coefficient
parameter window and (b) when an exponential *value* (rule, coproduct or
antipode data) is expanded, cut off at ``maxdeg`` powers.  Admissible rule
styles guarantee a sector-letter count never decreases under rewriting, and
expanded exponentials sit in that monotone sector, so everything dropped by
(b) can only ever feed monomials beyond the cap — windowed comparisons below
it are exact.

The ``.alg`` file format mirrors the structure: sections ``[algebra]``,
``[generators]``, ``[relations]``, ``[coproduct]``, ``[counit]``,
``[antipode]`` and optional ``[star]`` (per-generator involution images) with
values in the shared expression grammar, read in *written order*
(noncommutative), plus ``@`` for tensor factors in coproducts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from .expr import (
    EAdd,
    EDiv,
    EExp,
    EMul,
    ENeg,
    ENum,
    EPow,
    ESub,
    ESym,
    ExprAst,
    ExprError,
    Parser,
    _ps_factor_str,
)
from .multiindex import MultiIndex, iter_upto, madd, mtotal, munit, mzero
from .paramseries import (
    ParamSeries,
    SeriesContext,
    ps_add,
    ps_invert_monomial,
    ps_make,
    ps_mul,
    ps_neg,
    ps_one,
    ps_param,
    ps_pow,
    ps_rational,
    ps_restrict,
    ps_scale,
    ps_str,
    ps_zero,
)


class SpecError(ValueError):
    """Invalid or inadmissible algebra presentation."""


class StraighteningError(RuntimeError):
    """Rewriting exceeded the step budget (non-terminating rule system?)."""


# ---------------------------------------------------------------------------
# presentation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenInfo:
    """One generator: display name and sector tag (``"K"`` or ``"L"``)."""

    name: str
    sector: str


@dataclass(eq=False)
class AlgebraSpec:
    """Presentation of a finitely generated normal-ordered algebra.

    ``rules[(i, j)]`` holds the normal-ordered value of ``[g_j, g_i]`` for
    ``i < j``; missing pairs commute.  ``maxdeg`` bounds exponential-value
    expansions and serves as the default comparison window.  Structure maps
    are optional until the Hopf layer needs them.
    """

    name: str
    gens: tuple[GenInfo, ...]
    sctx: SeriesContext
    maxdeg: int = 8
    rules: dict[tuple[int, int], "NCElement"] = field(default_factory=dict, repr=False)
    coproduct: dict[int, "TensorElement"] = field(default_factory=dict, repr=False)
    counit: dict[int, ParamSeries] = field(default_factory=dict, repr=False)
    antipode: dict[int, "NCElement"] = field(default_factory=dict, repr=False)
    star: dict[int, "NCElement"] = field(default_factory=dict, repr=False)
    style: str = "primal"
    step_limit: int = 5_000_000
    _mul_cache: dict = field(default_factory=dict, repr=False)
    _monomul_cache: dict = field(default_factory=dict, repr=False)
    _delta_cache: dict = field(default_factory=dict, repr=False)
    _antipode_cache: dict = field(default_factory=dict, repr=False)
    _star_cache: dict = field(default_factory=dict, repr=False)
    _steps: int = 0

    @property
    def nvars(self) -> int:
        return len(self.gens)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.gens)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.gens):
            if g.name == name:
                return i
        raise SpecError(f"unknown generator {name!r} in algebra {self.name!r}")

    def sector_indices(self, sector: str) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gens) if g.sector == sector)

    def signature(self) -> tuple:
        """Identity for cross-instance element comparisons."""
        return (self.gens, self.sctx, self.maxdeg)

    def rule_value(self, i: int, j: int) -> "NCElement":
        """Normal-ordered ``[g_j, g_i]`` for ``i < j`` (zero if commuting)."""
        if not i < j:
            raise ValueError("rule_value expects i < j")
        return self.rules.get((i, j), nc_zero(self))

    def basis(self, maxdeg: int) -> Iterator[MultiIndex]:
        """Normal monomials of total degree <= maxdeg, graded lex order."""
        return iter_upto(self.nvars, maxdeg)

    def _count_step(self) -> None:
        self._steps += 1
        if self._steps > self.step_limit:
            raise StraighteningError(
                f"straightening in {self.name!r} exceeded {self.step_limit} steps"
            )

    def clear_caches(self) -> None:
        """Flush memoized products; required after any rule-table change."""
        self._mul_cache.clear()
        self._monomul_cache.clear()
        self._delta_cache.clear()
        self._antipode_cache.clear()
        self._star_cache.clear()


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class NCElement:
    """Linear combination of normal-ordered monomials over one spec."""

    alg: AlgebraSpec
    terms: dict[MultiIndex, ParamSeries]
    truncated: bool = False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCElement):
            return NotImplemented
        return (
            self.alg.signature() == other.alg.signature()
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:  # pragma: no cover - delegated
        return nc_str(self)


@dataclass(eq=False)
class TensorElement:
    """Linear combination of tuples of normal monomials (componentwise caps)."""

    alg: AlgebraSpec
    arity: int
    terms: dict[tuple[MultiIndex, ...], ParamSeries]
    truncated: bool = False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            self.alg.signature() == other.alg.signature()
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:  # pragma: no cover - delegated
        return tensor_str(self)


def nc_make(
    alg: AlgebraSpec,
    terms: Mapping[MultiIndex, ParamSeries],
    truncated: bool = False,
) -> NCElement:
    """Normalize a term map: drop zero coefficients, propagate window flags."""
    out: dict[MultiIndex, ParamSeries] = {}
    for mono, coeff in terms.items():
        if coeff.is_zero():
            continue
        out[mono] = coeff
        truncated = truncated or coeff.truncated
    return NCElement(alg, out, truncated)


def nc_zero(alg: AlgebraSpec) -> NCElement:
    return NCElement(alg, {})


def nc_const(alg: AlgebraSpec, coeff: ParamSeries) -> NCElement:
    return nc_make(alg, {mzero(alg.nvars): coeff})


def nc_one(alg: AlgebraSpec) -> NCElement:
    return nc_const(alg, ps_one(alg.sctx))


def nc_gen(alg: AlgebraSpec, which: int | str) -> NCElement:
    i = alg.index(which) if isinstance(which, str) else which
    return nc_make(alg, {munit(alg.nvars, i): ps_one(alg.sctx)})


def nc_add(a: NCElement, b: NCElement) -> NCElement:
    _require_same_alg(a, b)
    acc = dict(a.terms)
    for m, c in b.terms.items():
        acc[m] = ps_add(acc[m], c) if m in acc else c
    return nc_make(a.alg, acc, truncated=a.truncated or b.truncated)


def nc_neg(a: NCElement) -> NCElement:
    return NCElement(a.alg, {m: ps_neg(c) for m, c in a.terms.items()}, a.truncated)


def nc_sub(a: NCElement, b: NCElement) -> NCElement:
    return nc_add(a, nc_neg(b))


def nc_scale(a: NCElement, s: ParamSeries) -> NCElement:
    return nc_make(
        a.alg, {m: ps_mul(c, s) for m, c in a.terms.items()}, truncated=a.truncated
    )


def _require_same_alg(a: NCElement | TensorElement, b: NCElement | TensorElement) -> None:
    if a.alg.signature() != b.alg.signature():
        raise ValueError(
            f"elements live in different algebras: {a.alg.name!r} vs {b.alg.name!r}"
        )


# ---------------------------------------------------------------------------
# straightening
# ---------------------------------------------------------------------------


def _min_letter(mono: MultiIndex) -> int | None:
    for i, p in enumerate(mono):
        if p:
            return i
    return None


def _mul_letter(
    alg: AlgebraSpec, g: int, mono: MultiIndex
) -> tuple[dict[MultiIndex, ParamSeries], bool]:
    """Normal form of ``g_g * (normal monomial)``: read-only map + tail flag.

    The flag records that a truncated rule value took part somewhere in the
    rewriting, so monomials beyond the exactness window may lack tails.
    """
    key = (g, mono)
    cached = alg._mul_cache.get(key)
    if cached is not None:
        return cached
    alg._count_step()
    i = _min_letter(mono)
    if i is None or g <= i:
        result = ({madd(mono, munit(alg.nvars, g)): ps_one(alg.sctx)}, False)
        alg._mul_cache[key] = result
        return result
    rest = tuple(p - 1 if t == i else p for t, p in enumerate(mono))
    out: dict[MultiIndex, ParamSeries] = {}
    # g * g_i * rest = g_i * (g * rest) + [g, g_i] * rest
    grest, flag = _mul_letter(alg, g, rest)
    for m, c in grest.items():
        sub, f2 = _mul_letter(alg, i, m)
        flag = flag or f2
        for m2, c2 in sub.items():
            prod = ps_mul(c, c2)
            out[m2] = ps_add(out[m2], prod) if m2 in out else prod
    rule = alg.rule_value(i, g)
    flag = flag or rule.truncated
    for rm, rc in rule.terms.items():
        sub, f3 = _mul_mono(alg, rm, rest)
        flag = flag or f3
        for m3, c3 in sub.items():
            prod = ps_mul(rc, c3)
            out[m3] = ps_add(out[m3], prod) if m3 in out else prod
    result = ({m: c for m, c in out.items() if not c.is_zero()}, flag)
    alg._mul_cache[key] = result
    return result


def _mono_word(mono: MultiIndex) -> tuple[int, ...]:
    word: list[int] = []
    for i, p in enumerate(mono):
        word.extend([i] * p)
    return tuple(word)


def _mul_mono(
    alg: AlgebraSpec, a: MultiIndex, b: MultiIndex
) -> tuple[dict[MultiIndex, ParamSeries], bool]:
    """Normal form of the product of two normal monomials: map + tail flag."""
    key = (a, b)
    cached = alg._monomul_cache.get(key)
    if cached is not None:
        return cached
    acc: dict[MultiIndex, ParamSeries] = {b: ps_one(alg.sctx)}
    flag = False
    for g in reversed(_mono_word(a)):
        nxt: dict[MultiIndex, ParamSeries] = {}
        for m, c in acc.items():
            sub, f = _mul_letter(alg, g, m)
            flag = flag or f
            for m2, c2 in sub.items():
                prod = ps_mul(c, c2)
                nxt[m2] = ps_add(nxt[m2], prod) if m2 in nxt else prod
        acc = {m: c for m, c in nxt.items() if not c.is_zero()}
    result = (acc, flag)
    alg._monomul_cache[key] = result
    return result


def normal_order(alg: AlgebraSpec, word: Sequence[int | str]) -> NCElement:
    """Normal-order an arbitrary product of generators given as a word.

    ``word`` is a sequence of generator names or indices, leftmost factor
    first.  The result is the unique normal-form expansion with monomials
    above the degree cap dropped (truncated flag set).
    """
    letters = [alg.index(w) if isinstance(w, str) else w for w in word]
    for g in letters:
        if not 0 <= g < alg.nvars:
            raise SpecError(f"generator index {g} out of range")
    acc: dict[MultiIndex, ParamSeries] = {mzero(alg.nvars): ps_one(alg.sctx)}
    flag = False
    for g in reversed(letters):
        nxt: dict[MultiIndex, ParamSeries] = {}
        for m, c in acc.items():
            sub, f = _mul_letter(alg, g, m)
            flag = flag or f
            for m2, c2 in sub.items():
                prod = ps_mul(c, c2)
                nxt[m2] = ps_add(nxt[m2], prod) if m2 in nxt else prod
        acc = nxt
    return nc_make(alg, acc, truncated=flag)


def nc_mul(a: NCElement, b: NCElement) -> NCElement:
    """Normal-ordered product of two elements."""
    _require_same_alg(a, b)
    alg = a.alg
    acc: dict[MultiIndex, ParamSeries] = {}
    flag = a.truncated or b.truncated
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            cab = ps_mul(ca, cb)
            sub, f = _mul_mono(alg, ma, mb)
            flag = flag or f
            for m, c in sub.items():
                prod = ps_mul(cab, c)
                acc[m] = ps_add(acc[m], prod) if m in acc else prod
    return nc_make(alg, acc, truncated=flag)


def nc_pow(a: NCElement, n: int) -> NCElement:
    if n < 0:
        raise ValueError("negative powers of algebra elements are not defined")
    out = nc_one(a.alg)
    for _ in range(n):
        out = nc_mul(out, a)
    return out


def nc_commutator(a: NCElement, b: NCElement) -> NCElement:
    return nc_sub(nc_mul(a, b), nc_mul(b, a))


def adjoint_power_expand(a: NCElement, aprime: NCElement, m: int, side: str) -> NCElement:
    """Binomial adjoint expansion of ``a^m * a'`` (left) or ``a' * a^m`` (right).

    left:  ``a^m a' = sum_k C(m,k) Lad_a^k(a') a^(m-k)`` with ``Lad_a = [a, .]``.
    right: ``a' a^m = sum_k C(m,k) a^(m-k) Rad_a^k(a')`` with ``Rad_a = [., a]``.

    The sum is evaluated term by term (each summand normal-ordered); it must
    agree with the direct product, which is the cross-check the tests run.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    alg = a.alg
    out = nc_zero(alg)
    ad = aprime
    for k in range(m + 1):
        coeff = math.comb(m, k)
        power = nc_pow(a, m - k)
        if side == "left":
            part = nc_mul(ad, power)
        else:
            part = nc_mul(power, ad)
        out = nc_add(out, nc_scale(part, ps_rational(alg.sctx, coeff)))
        if k < m:
            ad = nc_commutator(a, ad) if side == "left" else nc_commutator(ad, a)
    return out


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------


def tensor_make(
    alg: AlgebraSpec,
    arity: int,
    terms: Mapping[tuple[MultiIndex, ...], ParamSeries],
    truncated: bool = False,
) -> TensorElement:
    out: dict[tuple[MultiIndex, ...], ParamSeries] = {}
    for monos, coeff in terms.items():
        if coeff.is_zero():
            continue
        out[monos] = coeff
        truncated = truncated or coeff.truncated
    return TensorElement(alg, arity, out, truncated)


def tensor_zero(alg: AlgebraSpec, arity: int = 2) -> TensorElement:
    return TensorElement(alg, arity, {})


def tensor_unit(alg: AlgebraSpec, arity: int = 2) -> TensorElement:
    key = tuple(mzero(alg.nvars) for _ in range(arity))
    return TensorElement(alg, arity, {key: ps_one(alg.sctx)})


def tensor_from_slots(slots: Sequence[NCElement]) -> TensorElement:
    """Outer product of elements, one per slot."""
    alg = slots[0].alg
    terms: dict[tuple[MultiIndex, ...], ParamSeries] = {
        (): ps_one(alg.sctx)
    }
    truncated = False
    for el in slots:
        _require_same_alg(slots[0], el)
        truncated = truncated or el.truncated
        nxt: dict[tuple[MultiIndex, ...], ParamSeries] = {}
        for key, c in terms.items():
            for m, cm in el.terms.items():
                nxt[key + (m,)] = ps_mul(c, cm)
        terms = nxt
    return tensor_make(alg, len(slots), terms, truncated)


def tensor_add(a: TensorElement, b: TensorElement) -> TensorElement:
    _require_same_alg(a, b)
    if a.arity != b.arity:
        raise ValueError("tensor arities differ")
    acc = dict(a.terms)
    for k, c in b.terms.items():
        acc[k] = ps_add(acc[k], c) if k in acc else c
    return tensor_make(a.alg, a.arity, acc, truncated=a.truncated or b.truncated)


def tensor_neg(a: TensorElement) -> TensorElement:
    return TensorElement(
        a.alg, a.arity, {k: ps_neg(c) for k, c in a.terms.items()}, a.truncated
    )


def tensor_sub(a: TensorElement, b: TensorElement) -> TensorElement:
    return tensor_add(a, tensor_neg(b))


def tensor_scale(a: TensorElement, s: ParamSeries) -> TensorElement:
    return tensor_make(
        a.alg, a.arity, {k: ps_mul(c, s) for k, c in a.terms.items()}, a.truncated
    )


def tensor_mul(a: TensorElement, b: TensorElement) -> TensorElement:
    """Componentwise product (no braiding): slot i of a times slot i of b."""
    _require_same_alg(a, b)
    if a.arity != b.arity:
        raise ValueError("tensor arities differ")
    alg = a.alg
    acc: dict[tuple[MultiIndex, ...], ParamSeries] = {}
    flag = a.truncated or b.truncated
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            cab = ps_mul(ca, cb)
            combos: list[tuple[tuple[MultiIndex, ...], ParamSeries]] = [((), cab)]
            for slot in range(a.arity):
                slotprod, f = _mul_mono(alg, ka[slot], kb[slot])
                flag = flag or f
                combos = [
                    (key + (m,), ps_mul(c, cm))
                    for key, c in combos
                    for m, cm in slotprod.items()
                ]
            for key, c in combos:
                acc[key] = ps_add(acc[key], c) if key in acc else c
    return tensor_make(alg, a.arity, acc, truncated=flag)


def tensor_map_slot(
    a: TensorElement, slot: int, f: Callable[[MultiIndex], NCElement]
) -> TensorElement:
    """Apply a linear map (given on monomials) to one slot."""
    alg = a.alg
    acc: dict[tuple[MultiIndex, ...], ParamSeries] = {}
    truncated = a.truncated
    for key, c in a.terms.items():
        image = f(key[slot])
        truncated = truncated or image.truncated
        for m, cm in image.terms.items():
            nk = key[:slot] + (m,) + key[slot + 1 :]
            prod = ps_mul(c, cm)
            acc[nk] = ps_add(acc[nk], prod) if nk in acc else prod
    return tensor_make(alg, a.arity, acc, truncated)


def tensor_expand_slot(
    a: TensorElement, slot: int, f: Callable[[MultiIndex], "TensorElement"]
) -> TensorElement:
    """Replace one slot by a 2-slot expansion (e.g. a coproduct), arity + 1."""
    alg = a.alg
    acc: dict[tuple[MultiIndex, ...], ParamSeries] = {}
    truncated = a.truncated
    for key, c in a.terms.items():
        image = f(key[slot])
        truncated = truncated or image.truncated
        for ms, cm in image.terms.items():
            nk = key[:slot] + ms + key[slot + 1 :]
            prod = ps_mul(c, cm)
            acc[nk] = ps_add(acc[nk], prod) if nk in acc else prod
    return tensor_make(alg, a.arity + 1, acc, truncated)


def tensor_scalar_slot(
    a: TensorElement, slot: int, f: Callable[[MultiIndex], ParamSeries]
) -> TensorElement | NCElement:
    """Collapse one slot through a scalar-valued map (e.g. the counit)."""
    alg = a.alg
    acc: dict[tuple[MultiIndex, ...], ParamSeries] = {}
    for key, c in a.terms.items():
        s = f(key[slot])
        if s.is_zero():
            continue
        nk = key[:slot] + key[slot + 1 :]
        prod = ps_mul(c, s)
        acc[nk] = ps_add(acc[nk], prod) if nk in acc else prod
    if a.arity == 2:
        return nc_make(alg, {k[0]: c for k, c in acc.items()}, a.truncated)
    return tensor_make(alg, a.arity - 1, acc, a.truncated)


def tensor_multiply_out(a: TensorElement) -> NCElement:
    """Multiply all slots together, left to right."""
    alg = a.alg
    acc: dict[MultiIndex, ParamSeries] = {}
    flag = a.truncated
    for key, c in a.terms.items():
        partial: dict[MultiIndex, ParamSeries] = {key[0]: c}
        for slot in range(1, a.arity):
            nxt: dict[MultiIndex, ParamSeries] = {}
            for m, cm in partial.items():
                sub, f = _mul_mono(alg, m, key[slot])
                flag = flag or f
                for m2, c2 in sub.items():
                    prod = ps_mul(cm, c2)
                    nxt[m2] = ps_add(nxt[m2], prod) if m2 in nxt else prod
            partial = nxt
        for m, cm in partial.items():
            acc[m] = ps_add(acc[m], cm) if m in acc else cm
    return nc_make(alg, acc, flag)


# ---------------------------------------------------------------------------
# structure maps on monomials and elements
# ---------------------------------------------------------------------------


def delta_mono(alg: AlgebraSpec, mono: MultiIndex) -> TensorElement:
    """Coproduct of a normal monomial (algebra-morphism extension), cached."""
    cached = alg._delta_cache.get(mono)
    if cached is not None:
        return cached
    out = tensor_unit(alg, 2)
    for i, p in enumerate(mono):
        if not p:
            continue
        dg = alg.coproduct.get(i)
        if dg is None:
            raise SpecError(f"no coproduct declared for {alg.gens[i].name!r}")
        for _ in range(p):
            out = tensor_mul(out, dg)
    alg._delta_cache[mono] = out
    return out


def apply_coproduct(el: NCElement) -> TensorElement:
    out = tensor_zero(el.alg, 2)
    for m, c in el.terms.items():
        out = tensor_add(out, tensor_scale(delta_mono(el.alg, m), c))
    return out


def counit_mono(alg: AlgebraSpec, mono: MultiIndex) -> ParamSeries:
    out = ps_one(alg.sctx)
    for i, p in enumerate(mono):
        if not p:
            continue
        eps = alg.counit.get(i)
        if eps is None:
            raise SpecError(f"no counit declared for {alg.gens[i].name!r}")
        out = ps_mul(out, ps_pow(eps, p))
        if out.is_zero():
            return out
    return out


def apply_counit(el: NCElement) -> ParamSeries:
    out = ps_zero(el.alg.sctx)
    for m, c in el.terms.items():
        out = ps_add(out, ps_mul(c, counit_mono(el.alg, m)))
    return out


def antipode_mono(alg: AlgebraSpec, mono: MultiIndex) -> NCElement:
    """Antipode of a normal monomial (anti-morphism: reversed word), cached."""
    cached = alg._antipode_cache.get(mono)
    if cached is not None:
        return cached
    out = nc_one(alg)
    for i, p in enumerate(mono):
        if not p:
            continue
        sg = alg.antipode.get(i)
        if sg is None:
            raise SpecError(f"no antipode declared for {alg.gens[i].name!r}")
        out = nc_mul(nc_pow(sg, p), out)
    alg._antipode_cache[mono] = out
    return out


def apply_antipode(el: NCElement) -> NCElement:
    out = nc_zero(el.alg)
    for m, c in el.terms.items():
        out = nc_add(out, nc_scale(antipode_mono(el.alg, m), c))
    return out


# ---------------------------------------------------------------------------
# windows and comparisons
# ---------------------------------------------------------------------------


def nc_restrict(el: NCElement, maxdeg: int | None = None, zorder: int | None = None) -> NCElement:
    """Restrict to total degree <= maxdeg and parameter order <= zorder."""
    out: dict[MultiIndex, ParamSeries] = {}
    for m, c in el.terms.items():
        if maxdeg is not None and mtotal(m) > maxdeg:
            continue
        if zorder is not None:
            c = ps_restrict(c, zorder)
        if not c.is_zero():
            out[m] = c
    return NCElement(el.alg, out, el.truncated)


def tensor_restrict(
    t: TensorElement, maxdeg: int | None = None, zorder: int | None = None
) -> TensorElement:
    """Restrict to *total slot degree* <= maxdeg, parameter order <= zorder."""
    out: dict[tuple[MultiIndex, ...], ParamSeries] = {}
    for key, c in t.terms.items():
        if maxdeg is not None and sum(mtotal(m) for m in key) > maxdeg:
            continue
        if zorder is not None:
            c = ps_restrict(c, zorder)
        if not c.is_zero():
            out[key] = c
    return TensorElement(t.alg, t.arity, out, t.truncated)


def nc_window_equal(
    a: NCElement, b: NCElement, maxdeg: int | None = None, zorder: int | None = None
) -> bool:
    return nc_restrict(a, maxdeg, zorder).terms == nc_restrict(b, maxdeg, zorder).terms


def tensor_window_equal(
    a: TensorElement, b: TensorElement, maxdeg: int | None = None, zorder: int | None = None
) -> bool:
    return (
        tensor_restrict(a, maxdeg, zorder).terms
        == tensor_restrict(b, maxdeg, zorder).terms
    )


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _mono_str(alg: AlgebraSpec, mono: MultiIndex) -> str | None:
    factors = []
    for name, p in zip(alg.names, mono):
        if p == 0:
            continue
        factors.append(name if p == 1 else f"{name}^{p}")
    return "*".join(factors) if factors else None


def nc_str(el: NCElement) -> str:
    """Canonical text: monomials in descending lexicographic order."""
    if not el.terms:
        return "0"
    rendered: list[tuple[int, str]] = []
    for mono in sorted(el.terms, reverse=True):
        sign, coeff_text = _ps_factor_str(el.terms[mono])
        mono_text = _mono_str(el.alg, mono)
        if mono_text is None:
            body = coeff_text if coeff_text is not None else "1"
        elif coeff_text is None:
            body = mono_text
        else:
            body = f"{coeff_text}*{mono_text}"
        rendered.append((sign, body))
    first_sign, first_text = rendered[0]
    parts = [first_text if first_sign > 0 else f"-{first_text}"]
    for sign, text in rendered[1:]:
        parts.append(f"+ {text}" if sign > 0 else f"- {text}")
    return " ".join(parts)


def tensor_str(t: TensorElement) -> str:
    """Canonical text with ``@`` between slots."""
    if not t.terms:
        return "0"
    rendered: list[tuple[int, str]] = []
    for key in sorted(t.terms, reverse=True):
        sign, coeff_text = _ps_factor_str(t.terms[key])
        slot_texts = []
        for slot, mono in enumerate(key):
            mono_text = _mono_str(t.alg, mono)
            if slot == 0 and coeff_text is not None:
                mono_text = (
                    coeff_text if mono_text is None else f"{coeff_text}*{mono_text}"
                )
            slot_texts.append(mono_text if mono_text is not None else "1")
        rendered.append((sign, " @ ".join(slot_texts)))
    first_sign, first_text = rendered[0]
    parts = [first_text if first_sign > 0 else f"-{first_text}"]
    for sign, text in rendered[1:]:
        parts.append(f"+ {text}" if sign > 0 else f"- {text}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# noncommutative expression evaluation
# ---------------------------------------------------------------------------


def _nc_scalar(el: NCElement) -> ParamSeries | None:
    """The scalar value if ``el`` is supported on the unit monomial only."""
    if not el.terms:
        return ps_zero(el.alg.sctx)
    unit = mzero(el.alg.nvars)
    if set(el.terms) == {unit}:
        return el.terms[unit]
    return None


def _nc_exp(el: NCElement) -> NCElement:
    """Series expansion of ``exp(c * g)`` for a single generator ``g``."""
    alg = el.alg
    if el.is_zero():
        return nc_one(alg)
    gens = set()
    for mono in el.terms:
        if mtotal(mono) != 1:
            raise ExprError(
                "exp argument must be a scalar multiple of a single generator"
            )
        gens.add(_min_letter(mono))
    if len(gens) != 1:
        raise ExprError("exp argument mixes generators")
    g = gens.pop()
    coeff = el.terms[munit(alg.nvars, g)]
    out = nc_one(alg)
    power = ps_one(alg.sctx)
    lo = coeff.min_degree() or 0
    n = 0
    while n < alg.maxdeg and (lo <= 0 or (n + 1) * lo <= alg.sctx.zmax):
        n += 1
        power = ps_mul(power, coeff)
        out = nc_add(
            out,
            nc_make(
                alg,
                {
                    tuple(
                        n if t == g else 0 for t in range(alg.nvars)
                    ): ps_scale(power, Fraction(1, math.factorial(n)))
                },
            ),
        )
    return NCElement(out.alg, out.terms, True)


def ast_to_nc(ast: ExprAst, alg: AlgebraSpec) -> NCElement:
    """Evaluate an AST with *written-order* (noncommutative) multiplication."""
    if isinstance(ast, ENum):
        return nc_const(alg, ps_rational(alg.sctx, ast.value))
    if isinstance(ast, ESym):
        if ast.name == alg.sctx.param:
            return nc_const(alg, ps_param(alg.sctx))
        return nc_gen(alg, ast.name)
    if isinstance(ast, EAdd):
        return nc_add(ast_to_nc(ast.left, alg), ast_to_nc(ast.right, alg))
    if isinstance(ast, ESub):
        return nc_sub(ast_to_nc(ast.left, alg), ast_to_nc(ast.right, alg))
    if isinstance(ast, EMul):
        return nc_mul(ast_to_nc(ast.left, alg), ast_to_nc(ast.right, alg))
    if isinstance(ast, EDiv):
        denom = ast_to_nc(ast.right, alg)
        scalar = _nc_scalar(denom)
        if scalar is None or len(scalar.terms) != 1:
            raise ExprError(
                "division only by single-degree parameter monomials"
            )
        return nc_scale(ast_to_nc(ast.left, alg), ps_invert_monomial(scalar))
    if isinstance(ast, EPow):
        base = ast_to_nc(ast.base, alg)
        if ast.exponent >= 0:
            return nc_pow(base, ast.exponent)
        scalar = _nc_scalar(base)
        if scalar is None or len(scalar.terms) != 1:
            raise ExprError("negative powers only of parameter monomials")
        return nc_const(alg, ps_pow(ps_invert_monomial(scalar), -ast.exponent))
    if isinstance(ast, ENeg):
        return nc_neg(ast_to_nc(ast.arg, alg))
    if isinstance(ast, EExp):
        return _nc_exp(ast_to_nc(ast.arg, alg))
    raise ExprError(f"unhandled AST node {ast!r}")


def parse_nc(text: str, alg: AlgebraSpec) -> NCElement:
    """Parse a noncommutative (written-order) expression into normal form."""
    p = Parser(text)
    node = p.parse_expr()
    p.finish()
    return ast_to_nc(node, alg)


def parse_tensor_sum(text: str, alg: AlgebraSpec) -> TensorElement:
    """Parse a sum of 2-fold tensors ``A @ B`` (sides in written order)."""
    p = Parser(text)
    out = tensor_zero(alg, 2)
    sign = 1
    while True:
        negate = sign < 0
        while p.at_op("+", "-"):
            if p.next().text == "-":
                negate = not negate
        left_ast = p.parse_term()
        if p.at_op("@"):
            p.next()
            right_ast = p.parse_term()
        else:
            raise ExprError(f"tensor term without '@' in {text!r}")
        left = ast_to_nc(left_ast, alg)
        right = ast_to_nc(right_ast, alg)
        term = tensor_from_slots([left, right])
        out = tensor_add(out, tensor_neg(term) if negate else term)
        if p.at_op("+", "-"):
            sign = 1 if p.next().text == "+" else -1
            continue
        p.finish()
        return out


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_spec(alg: AlgebraSpec) -> str:
    """Check ordering, rule admissibility and window discipline; return style.

    Admissible styles (each guarantees a monotone sector-letter count under
    rewriting, which makes degree-cap truncation exact below the cap):

    * primal: cross-sector rule values are K-free with no constant term; the
      L-sector letter count never decreases.
    * dual: cross-sector rule values are pure first-sector with no constant
      term; the first-sector letter count never decreases.

    Same-sector rule values must stay in their sector and use only strictly
    lower-index generators; values of the monotone sector must have degree
    >= 2 (or be zero) so the count argument holds.
    """
    sectors = [g.sector for g in alg.gens]
    for s in sectors:
        if s not in ("K", "L"):
            raise SpecError(f"unknown sector tag {s!r}")
    if "L" in sectors and "K" in sectors:
        if sectors.index("L") < len(sectors) - 1 - sectors[::-1].index("K"):
            raise SpecError("K-sector generators must precede L-sector generators")
    kset = set(alg.sector_indices("K"))
    lset = set(alg.sector_indices("L"))

    def letters(el: NCElement) -> set[int]:
        out: set[int] = set()
        for mono in el.terms:
            for i, pw in enumerate(mono):
                if pw:
                    out.add(i)
        return out

    cross: list[NCElement] = []
    for (i, j), val in alg.rules.items():
        if not i < j:
            raise SpecError(f"rule key {(i, j)} is not ordered")
        same_sector = sectors[i] == sectors[j]
        used = letters(val)
        if same_sector:
            if any(t >= j for t in used):
                raise SpecError(
                    f"same-sector rule [{alg.names[j]},{alg.names[i]}] uses a "
                    "generator of index >= the larger of the pair"
                )
            if any(
                (t in kset) != (i in kset) for t in used
            ):
                raise SpecError(
                    f"same-sector rule [{alg.names[j]},{alg.names[i]}] leaves "
                    "its sector"
                )
        else:
            cross.append(val)
            if mzero(alg.nvars) in val.terms:
                raise SpecError(
                    f"cross-sector rule [{alg.names[j]},{alg.names[i]}] has a "
                    "constant term"
                )
    primal_ok = all(letters(v) <= lset for v in cross)
    dual_ok = all(letters(v) <= kset for v in cross)
    if primal_ok:
        style = "primal"
    elif dual_ok:
        style = "dual"
    else:
        raise SpecError(
            f"algebra {alg.name!r} is not straightening-admissible: cross-sector "
            "rule values must be K-free (primal) or pure first-sector (dual)"
        )
    monotone = lset if style == "primal" else kset
    for (i, j), val in alg.rules.items():
        if sectors[i] == sectors[j] and i in monotone:
            for mono in val.terms:
                if 0 < mtotal(mono) < 2:
                    raise SpecError(
                        f"rule [{alg.names[j]},{alg.names[i]}] inside the "
                        "monotone sector has a degree-1 value; exactness of "
                        "degree-cap truncation would be lost"
                    )
    alg.style = style
    return style


def primitive_spec(
    name: str,
    gen_names: Sequence[str],
    sctx: SeriesContext,
    maxdeg: int = 8,
    sector: str = "K",
) -> AlgebraSpec:
    """Free commuting primitive Hopf presentation on the given generators.

    Every generator is primitive (``Δg = g⊗1 + 1⊗g``), has zero counit and
    antipode ``-g``; all generators commute.  This is the enveloping-algebra
    presentation used for the cocommutative sector on its own.
    """
    gens = tuple(GenInfo(n, sector) for n in gen_names)
    alg = AlgebraSpec(name=name, gens=gens, sctx=sctx, maxdeg=maxdeg)
    for i in range(len(gens)):
        g = nc_gen(alg, i)
        one = nc_one(alg)
        alg.coproduct[i] = tensor_add(
            tensor_from_slots([g, one]), tensor_from_slots([one, g])
        )
        alg.counit[i] = ps_zero(sctx)
        alg.antipode[i] = nc_neg(g)
    validate_spec(alg)
    return alg


# ---------------------------------------------------------------------------
# .alg file format
# ---------------------------------------------------------------------------


def _split_sections(text: str) -> dict[str, list[tuple[str, str]]]:
    sections: dict[str, list[tuple[str, str]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise SpecError(f"line {lineno}: content before any [section]")
        if "=" in line:
            key, value = line.split("=", 1)
        elif ":" in line:
            key, value = line.split(":", 1)
        else:
            raise SpecError(f"line {lineno}: expected 'key = value', got {line!r}")
        sections[current].append((key.strip(), value.strip()))
    return sections


def parse_algfile(text: str) -> AlgebraSpec:
    """Parse an ``.alg`` presentation file into a validated spec."""
    sections = _split_sections(text)
    if "algebra" not in sections or "generators" not in sections:
        raise SpecError("an .alg file needs [algebra] and [generators] sections")
    meta = dict(sections["algebra"])
    name = meta.get("name", "unnamed")
    param = meta.get("param", "z")
    inverted = meta.get("param-style", "direct").lower() == "inverse"
    floor = int(meta.get("param-floor", 2))
    cap = int(meta.get("param-cap", 8))
    maxdeg = int(meta.get("maxdeg", 8))
    sctx = SeriesContext(param=param, bmax=floor, zmax=cap, inverted=inverted)
    gens = []
    for gname, sector in sections["generators"]:
        sector = sector.strip().upper()
        if gname == param:
            raise SpecError(f"generator {gname!r} collides with the parameter name")
        gens.append(GenInfo(gname, sector))
    alg = AlgebraSpec(name=name, gens=tuple(gens), sctx=sctx, maxdeg=maxdeg)

    relation_sources: list[tuple[int, int, str]] = []
    for key, value in sections.get("relations", []):
        names = [part.strip() for part in key.split(",")]
        if len(names) != 2:
            raise SpecError(f"relation key {key!r} must be 'later, earlier'")
        j, i = alg.index(names[0]), alg.index(names[1])
        if not i < j:
            raise SpecError(
                f"relation [{names[0]},{names[1]}] must list the later generator "
                "first"
            )
        alg.rules[(i, j)] = parse_nc(value, alg)
        relation_sources.append((i, j, value))
    # Relation values were normal-ordered against the rules loaded so far;
    # re-evaluating against the complete table detects order dependencies.
    alg.clear_caches()
    for i, j, value in relation_sources:
        if parse_nc(value, alg) != alg.rules[(i, j)]:
            raise SpecError(
                f"relation [{alg.names[j]},{alg.names[i]}] depends on a rule "
                "declared later in the file; list relations in dependency order"
            )
    for key, value in sections.get("counit", []):
        el = parse_nc(value, alg)
        scalar = _nc_scalar(el)
        if scalar is None:
            raise SpecError(f"counit of {key!r} is not scalar")
        alg.counit[alg.index(key)] = scalar
    for key, value in sections.get("coproduct", []):
        alg.coproduct[alg.index(key)] = parse_tensor_sum(value, alg)
    for key, value in sections.get("antipode", []):
        alg.antipode[alg.index(key)] = parse_nc(value, alg)
    for key, value in sections.get("star", []):
        alg.star[alg.index(key)] = parse_nc(value, alg)
    validate_spec(alg)
    return alg


def write_algfile(alg: AlgebraSpec) -> str:
    """Render a spec back to the ``.alg`` format (canonical forms)."""
    lines: list[str] = ["[algebra]", f"name = {alg.name}", f"param = {alg.sctx.param}"]
    if alg.sctx.inverted:
        lines.append("param-style = inverse")
    lines.append(f"param-floor = {alg.sctx.bmax}")
    lines.append(f"param-cap = {alg.sctx.zmax}")
    lines.append(f"maxdeg = {alg.maxdeg}")
    lines.append("")
    lines.append("[generators]")
    for g in alg.gens:
        lines.append(f"{g.name} : {g.sector}")
    lines.append("")
    lines.append("[relations]")
    for (i, j) in sorted(alg.rules):
        lines.append(
            f"{alg.names[j]}, {alg.names[i]} = {nc_str(alg.rules[(i, j)])}"
        )
    lines.append("")
    lines.append("[coproduct]")
    for i in sorted(alg.coproduct):
        lines.append(f"{alg.names[i]} = {tensor_str(alg.coproduct[i])}")
    lines.append("")
    lines.append("[counit]")
    for i in sorted(alg.counit):
        lines.append(f"{alg.names[i]} = {ps_str(alg.counit[i])}")
    lines.append("")
    lines.append("[antipode]")
    for i in sorted(alg.antipode):
        lines.append(f"{alg.names[i]} = {nc_str(alg.antipode[i])}")
    if alg.star:
        lines.append("")
        lines.append("[star]")
        for i in sorted(alg.star):
            lines.append(f"{alg.names[i]} = {nc_str(alg.star[i])}")
    lines.append("")
    return "\n".join(lines)
