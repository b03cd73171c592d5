"""Hopf-structure verification for presented algebras.

The structure maps themselves (multiplicative coproduct/counit, anti-morphism
antipode) live in :mod:`bicross.ncalg`; this module re-exports them under
their conventional names and adds :func:`check_hopf_axioms`, which sweeps all
normal monomials up to a degree bound and verifies

* coassociativity ``(Δ⊗id)Δ = (id⊗Δ)Δ``,
* both counit axioms ``(ε⊗id)Δ = id = (id⊗ε)Δ``,
* both antipode axioms ``m(S⊗id)Δ = ηε = m(id⊗S)Δ``, and
* compatibility of Δ, ε, S with every declared commutation rule.

Comparisons are exact (rational coefficients) inside the guaranteed window:
total monomial degree up to the spec's expansion cap and parameter order up to
the requested bound.  Failures are collected in a report, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass

from .multiindex import MultiIndex
from .ncalg import (
    AlgebraSpec,
    NCElement,
    TensorElement,
    antipode_mono,
    apply_antipode,
    apply_coproduct,
    apply_counit,
    counit_mono,
    delta_mono,
    nc_const,
    nc_gen,
    nc_make,
    nc_mul,
    nc_restrict,
    nc_str,
    nc_sub,
    tensor_expand_slot,
    tensor_map_slot,
    tensor_mul,
    tensor_multiply_out,
    tensor_restrict,
    tensor_scalar_slot,
    tensor_str,
    tensor_sub,
    _mono_str,
)
from .paramseries import ParamSeries, ps_equal, ps_one, ps_restrict, ps_str


def coproduct(el: NCElement) -> TensorElement:
    """Multiplicative extension of the declared generator coproducts."""
    return apply_coproduct(el)


def counit(el: NCElement) -> ParamSeries:
    """Morphism extension of the declared generator counits."""
    return apply_counit(el)


def antipode(el: NCElement) -> NCElement:
    """Anti-morphism extension of the declared generator antipodes."""
    return apply_antipode(el)


@dataclass(frozen=True)
class AxiomResult:
    """Outcome of one axiom sweep."""

    axiom: str
    status: str  # "pass" or "fail"
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
class HopfReport:
    """All axiom outcomes for one presentation."""

    algebra: str
    degree: int
    param_order: int
    results: tuple[AxiomResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "degree": self.degree,
            "paramOrder": self.param_order,
            "passed": self.passed,
            "axioms": [r.to_json() for r in self.results],
        }


def _mono_name(alg: AlgebraSpec, mono: MultiIndex) -> str:
    return _mono_str(alg, mono) or "1"


def _clip(text: str, limit: int = 200) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def check_hopf_axioms(alg: AlgebraSpec, degree: int = 3, zorder: int = 4) -> HopfReport:
    """Verify the Hopf axioms on all monomials of total degree <= degree.

    ``zorder`` bounds the parameter order of the comparisons.  Output windows
    are clipped to the spec's expansion cap, inside which truncated structure
    data is exact.  Returns a report with one entry per axiom; the first
    failing monomial (or rule) is recorded as the counterexample.
    """
    if degree > alg.maxdeg:
        raise ValueError(
            f"check degree {degree} exceeds the expansion cap {alg.maxdeg}"
        )
    window = alg.maxdeg
    monos = list(alg.basis(degree))
    results: list[AxiomResult] = []

    def record(axiom: str, counterexample: str | None) -> None:
        results.append(
            AxiomResult(
                axiom=axiom,
                status="pass" if counterexample is None else "fail",
                counterexample=counterexample,
                degree=degree,
                param_order=zorder,
            )
        )

    def tensor_mismatch(lhs: TensorElement, rhs: TensorElement) -> TensorElement | None:
        diff = tensor_restrict(tensor_sub(lhs, rhs), maxdeg=window, zorder=zorder)
        return None if diff.is_zero() else diff

    def nc_mismatch(lhs: NCElement, rhs: NCElement) -> NCElement | None:
        diff = nc_restrict(nc_sub(lhs, rhs), maxdeg=window, zorder=zorder)
        return None if diff.is_zero() else diff

    # --- coassociativity ---------------------------------------------------
    bad = None
    for m in monos:
        d = delta_mono(alg, m)
        left = tensor_expand_slot(d, 0, lambda mm: delta_mono(alg, mm))
        right = tensor_expand_slot(d, 1, lambda mm: delta_mono(alg, mm))
        diff = tensor_mismatch(left, right)
        if diff is not None:
            bad = f"{_mono_name(alg, m)}: residual {_clip(tensor_str(diff))}"
            break
    record("coassociativity", bad)

    # --- counit ------------------------------------------------------------
    bad = None
    for m in monos:
        d = delta_mono(alg, m)
        ident = nc_make(alg, {m: ps_one(alg.sctx)})
        for slot, label in ((0, "left"), (1, "right")):
            collapsed = tensor_scalar_slot(d, slot, lambda mm: counit_mono(alg, mm))
            diff = nc_mismatch(collapsed, ident)
            if diff is not None:
                bad = (
                    f"{_mono_name(alg, m)} ({label}): residual {_clip(nc_str(diff))}"
                )
                break
        if bad:
            break
    record("counit", bad)

    # --- antipode ----------------------------------------------------------
    bad = None
    for m in monos:
        d = delta_mono(alg, m)
        target = nc_const(alg, counit_mono(alg, m))
        for slot, label in ((0, "left"), (1, "right")):
            folded = tensor_multiply_out(
                tensor_map_slot(d, slot, lambda mm: antipode_mono(alg, mm))
            )
            diff = nc_mismatch(folded, target)
            if diff is not None:
                bad = (
                    f"{_mono_name(alg, m)} ({label}): residual {_clip(nc_str(diff))}"
                )
                break
        if bad:
            break
    record("antipode", bad)

    # --- compatibility with the commutation rules ---------------------------
    def rule_label(i: int, j: int) -> str:
        return f"[{alg.names[j]},{alg.names[i]}]"

    bad = None
    for (i, j), value in sorted(alg.rules.items()):
        di, dj = apply_coproduct(nc_gen(alg, i)), apply_coproduct(nc_gen(alg, j))
        lhs = tensor_sub(tensor_mul(dj, di), tensor_mul(di, dj))
        diff = tensor_mismatch(lhs, apply_coproduct(value))
        if diff is not None:
            bad = f"{rule_label(i, j)}: residual {_clip(tensor_str(diff))}"
            break
    record("relation-coproduct", bad)

    bad = None
    for (i, j), value in sorted(alg.rules.items()):
        eps = ps_restrict(apply_counit(value), zorder)
        if not eps.is_zero():
            bad = f"{rule_label(i, j)}: counit of value is {ps_str(eps)}"
            break
    record("relation-counit", bad)

    bad = None
    for (i, j), value in sorted(alg.rules.items()):
        si, sj = apply_antipode(nc_gen(alg, i)), apply_antipode(nc_gen(alg, j))
        lhs = nc_sub(nc_mul(si, sj), nc_mul(sj, si))
        diff = nc_mismatch(lhs, apply_antipode(value))
        if diff is not None:
            bad = f"{rule_label(i, j)}: residual {_clip(nc_str(diff))}"
            break
    record("relation-antipode", bad)

    return HopfReport(
        algebra=alg.name,
        degree=degree,
        param_order=zorder,
        results=tuple(results),
    )
