"""Factorial pairing between an algebra and its dual presentation.

A :class:`DualPairSpec` wires a primal presentation to a dual one through an
ordered generator correspondence.  On the ordered monomial bases the pairing
is diagonal with multi-factorial weights,

    <primal monomial m, dual monomial m'>  =  m! * delta(m ~ m'),

extended bilinearly over coefficient series.  :func:`check_pairing_axioms`
verifies, on exhaustive low-degree samples, that this diagonal form really is
a Hopf pairing for the wired presentations: it exchanges product with
coproduct in both directions, unit with counit, and intertwines the two
antipodes.  :func:`adjoint_map` materializes the adjoint of a linear operator
on the primal side as a matrix acting on dual basis monomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .multiindex import MultiIndex, mfactorial, mzero
from .ncalg import (
    AlgebraSpec,
    NCElement,
    SpecError,
    TensorElement,
    apply_antipode,
    apply_coproduct,
    apply_counit,
    nc_make,
    nc_mul,
    nc_str,
)
from .paramseries import (
    ParamSeries,
    ps_add,
    ps_equal,
    ps_mul,
    ps_one,
    ps_restrict,
    ps_scale,
    ps_str,
    ps_zero,
)

__all__ = [
    "DualPairSpec",
    "make_dual_pair",
    "pair",
    "check_pairing_axioms",
    "adjoint_map",
    "AdjointMatrix",
    "PairingReport",
]


@dataclass(frozen=True)
class DualPairSpec:
    """A primal presentation, a dual presentation, and their wiring.

    ``correspondence[i]`` is the dual generator index paired with primal
    generator ``i``.  The pairing of basis monomials is diagonal under this
    relabeling, with weight ``m!`` (product of exponent factorials).
    """

    primal: AlgebraSpec
    dual: AlgebraSpec
    correspondence: tuple[int, ...]

    def dual_mono(self, m: MultiIndex) -> MultiIndex:
        out = [0] * self.dual.nvars
        for i, p in enumerate(m):
            out[self.correspondence[i]] = p
        return tuple(out)

    def primal_mono(self, mp: MultiIndex) -> MultiIndex:
        out = [0] * self.primal.nvars
        for i, j in enumerate(self.correspondence):
            out[i] = mp[j]
        return tuple(out)


def make_dual_pair(
    primal: AlgebraSpec,
    dual: AlgebraSpec,
    correspondence: Sequence[tuple[str, str]] | None = None,
) -> DualPairSpec:
    """Wire two presentations into a dual pair.

    ``correspondence`` lists (primal name, dual name) pairs; by default
    generators correspond positionally.  Generator counts, sector tags of
    corresponding generators, and the series contexts must match.
    """
    if primal.nvars != dual.nvars:
        raise SpecError(
            f"generator counts differ: {primal.nvars} vs {dual.nvars}"
        )
    if primal.sctx != dual.sctx:
        raise SpecError("primal and dual presentations use different series contexts")
    if correspondence is None:
        corr = tuple(range(primal.nvars))
    else:
        if len(correspondence) != primal.nvars:
            raise SpecError("correspondence must cover every generator")
        out = [-1] * primal.nvars
        for pname, dname in correspondence:
            out[primal.index(pname)] = dual.index(dname)
        if sorted(out) != list(range(primal.nvars)):
            raise SpecError("correspondence is not a bijection")
        corr = tuple(out)
    for i, j in enumerate(corr):
        if primal.gens[i].sector != dual.gens[j].sector:
            raise SpecError(
                f"sector mismatch: {primal.names[i]} ({primal.gens[i].sector}) "
                f"paired with {dual.names[j]} ({dual.gens[j].sector})"
            )
    return DualPairSpec(primal=primal, dual=dual, correspondence=corr)


def _require_member(dp: DualPairSpec, el: NCElement, side: str) -> None:
    want = dp.primal if side == "primal" else dp.dual
    if el.alg.signature() != want.signature():
        raise SpecError(f"element does not belong to the {side} presentation")


def pair(dp: DualPairSpec, h: NCElement, eta: NCElement) -> ParamSeries:
    """Diagonal factorial pairing of a primal and a dual element."""
    _require_member(dp, h, "primal")
    _require_member(dp, eta, "dual")
    total = ps_zero(dp.primal.sctx)
    for m, ch in h.terms.items():
        ce = eta.terms.get(dp.dual_mono(m))
        if ce is not None:
            total = ps_add(total, ps_scale(ps_mul(ch, ce), mfactorial(m)))
    return total


def _pair_tensor_primal(
    dp: DualPairSpec, t: TensorElement, eta1: NCElement, eta2: NCElement
) -> ParamSeries:
    """<primal tensor, eta1 (x) eta2> evaluated slotwise."""
    total = ps_zero(dp.primal.sctx)
    for (m1, m2), coeff in t.terms.items():
        c1 = eta1.terms.get(dp.dual_mono(m1))
        if c1 is None:
            continue
        c2 = eta2.terms.get(dp.dual_mono(m2))
        if c2 is None:
            continue
        w = mfactorial(m1) * mfactorial(m2)
        total = ps_add(total, ps_scale(ps_mul(coeff, ps_mul(c1, c2)), w))
    return total


def _pair_tensor_dual(
    dp: DualPairSpec, h1: NCElement, h2: NCElement, t: TensorElement
) -> ParamSeries:
    """<h1 (x) h2, dual tensor> evaluated slotwise."""
    total = ps_zero(dp.primal.sctx)
    for (m1, m2), coeff in t.terms.items():
        c1 = h1.terms.get(dp.primal_mono(m1))
        if c1 is None:
            continue
        c2 = h2.terms.get(dp.primal_mono(m2))
        if c2 is None:
            continue
        w = mfactorial(dp.primal_mono(m1)) * mfactorial(dp.primal_mono(m2))
        total = ps_add(total, ps_scale(ps_mul(coeff, ps_mul(c1, c2)), w))
    return total


@dataclass(frozen=True)
class PairingAxiomResult:
    """Outcome of one pairing-axiom sweep (schema shared with Hopf reports)."""

    axiom: str
    status: str
    counterexample: str | None
    degree: int
    param_order: int

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "axiom": self.axiom,
            "status": self.status,
            "degree": self.degree,
            "paramOrder": self.param_order,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass(frozen=True)
class PairingReport:
    """All pairing-axiom outcomes for one dual pair."""

    primal: str
    dual: str
    degree: int
    param_order: int
    results: tuple[PairingAxiomResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "primal": self.primal,
            "dual": self.dual,
            "degree": self.degree,
            "paramOrder": self.param_order,
            "passed": self.passed,
            "axioms": [r.to_json() for r in self.results],
        }


def _clip(text: str, limit: int = 200) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _basis_elements(alg: AlgebraSpec, degree: int) -> list[tuple[MultiIndex, NCElement]]:
    one = ps_one(alg.sctx)
    return [(m, nc_make(alg, {m: one})) for m in alg.basis(degree)]


def check_pairing_axioms(
    dp: DualPairSpec, degree: int = 2, zorder: int | None = None
) -> PairingReport:
    """Verify the Hopf-pairing axioms on exhaustive degree-bounded samples.

    Sweeps all basis monomials of total degree <= ``degree`` on both sides:

    * product-coproduct:  <h, eta eta'>  =  <Delta h, eta (x) eta'>
    * coproduct-product:  <h h', eta>    =  <h (x) h', Delta eta>
    * unit-counit:        <1, eta> = counit(eta),  <h, 1> = counit(h)
    * antipode:           <S h, eta>     =  <h, S' eta>

    Comparisons clip both sides at ``zorder`` (default: the full stored
    parameter window, inside which all routes are exact).
    """
    zcap = dp.primal.sctx.zmax if zorder is None else zorder
    primal_basis = _basis_elements(dp.primal, degree)
    dual_basis = _basis_elements(dp.dual, degree)
    results: list[PairingAxiomResult] = []

    def record(axiom: str, counterexample: str | None) -> None:
        results.append(
            PairingAxiomResult(
                axiom=axiom,
                status="pass" if counterexample is None else "fail",
                counterexample=counterexample,
                degree=degree,
                param_order=zcap,
            )
        )

    def mismatch(lhs: ParamSeries, rhs: ParamSeries) -> str | None:
        if ps_equal(lhs, rhs, zcap):
            return None
        return f"lhs {ps_str(ps_restrict(lhs, zcap))} != rhs {ps_str(ps_restrict(rhs, zcap))}"

    # product on the dual side vs coproduct on the primal side
    bad = None
    for _, h in primal_basis:
        dh = apply_coproduct(h)
        for _, e1 in dual_basis:
            for _, e2 in dual_basis:
                lhs = pair(dp, h, nc_mul(e1, e2))
                rhs = _pair_tensor_primal(dp, dh, e1, e2)
                why = mismatch(lhs, rhs)
                if why:
                    bad = (
                        f"h={nc_str(h)}, eta={nc_str(e1)}, eta'={nc_str(e2)}: "
                        + _clip(why)
                    )
                    break
            if bad:
                break
        if bad:
            break
    record("product-coproduct", bad)

    # product on the primal side vs coproduct on the dual side
    bad = None
    for _, e in dual_basis:
        de = apply_coproduct(e)
        for _, h1 in primal_basis:
            for _, h2 in primal_basis:
                lhs = pair(dp, nc_mul(h1, h2), e)
                rhs = _pair_tensor_dual(dp, h1, h2, de)
                why = mismatch(lhs, rhs)
                if why:
                    bad = (
                        f"h={nc_str(h1)}, h'={nc_str(h2)}, eta={nc_str(e)}: "
                        + _clip(why)
                    )
                    break
            if bad:
                break
        if bad:
            break
    record("coproduct-product", bad)

    # unit pairs to counit on both sides
    one_primal = nc_make(dp.primal, {mzero(dp.primal.nvars): ps_one(dp.primal.sctx)})
    one_dual = nc_make(dp.dual, {mzero(dp.dual.nvars): ps_one(dp.dual.sctx)})
    bad = None
    for _, e in dual_basis:
        why = mismatch(pair(dp, one_primal, e), apply_counit(e))
        if why:
            bad = f"eta={nc_str(e)}: " + _clip(why)
            break
    record("unit-counit", bad)

    bad = None
    for _, h in primal_basis:
        why = mismatch(pair(dp, h, one_dual), apply_counit(h))
        if why:
            bad = f"h={nc_str(h)}: " + _clip(why)
            break
    record("counit-unit", bad)

    # antipodes are adjoint to each other
    bad = None
    for _, h in primal_basis:
        sh = apply_antipode(h)
        for _, e in dual_basis:
            lhs = pair(dp, sh, e)
            rhs = pair(dp, h, apply_antipode(e))
            why = mismatch(lhs, rhs)
            if why:
                bad = f"h={nc_str(h)}, eta={nc_str(e)}: " + _clip(why)
                break
        if bad:
            break
    record("antipode", bad)

    return PairingReport(
        primal=dp.primal.name,
        dual=dp.dual.name,
        degree=degree,
        param_order=zcap,
        results=tuple(results),
    )


@dataclass(frozen=True)
class AdjointMatrix:
    """Matrix of an adjoint operator on truncated dual basis monomials.

    ``basis[j]`` is the j-th primal basis monomial (total degree <= the probe
    degree, graded order); ``entries[i][j]`` is the coefficient of dual basis
    monomial ``basis[i]`` (under the pair's correspondence) in the image of
    dual basis monomial ``basis[j]``.
    """

    basis: tuple[MultiIndex, ...]
    entries: tuple[tuple[ParamSeries, ...], ...]


def adjoint_map(
    dp: DualPairSpec,
    f: Callable[[NCElement], NCElement],
    degree: int,
) -> AdjointMatrix:
    """Matrix of the pairing-adjoint of ``f`` on dual monomials.

    ``f`` must be linear on the primal side; it is probed on all basis
    monomials of total degree <= ``degree``.  The adjoint is defined by
    ``<h, adjoint(f) eta> = <f h, eta>``; on diagonal factorial bases its
    matrix entry at (row m, column n) is ``<f h_m, eta_n> / m!``.
    """
    if degree > dp.primal.maxdeg:
        raise ValueError(
            f"probe degree {degree} exceeds the expansion cap {dp.primal.maxdeg}"
        )
    basis = list(dp.primal.basis(degree))
    one = ps_one(dp.primal.sctx)
    images = [f(nc_make(dp.primal, {m: one})) for m in basis]
    rows: list[tuple[ParamSeries, ...]] = []
    for i, m in enumerate(basis):
        row: list[ParamSeries] = []
        for n in basis:
            coeff = images[i].terms.get(n)
            if coeff is None:
                row.append(ps_zero(dp.primal.sctx))
            else:
                row.append(ps_scale(coeff, Fraction(mfactorial(n), mfactorial(m))))
        rows.append(tuple(row))
    return AdjointMatrix(basis=tuple(basis), entries=tuple(rows))
