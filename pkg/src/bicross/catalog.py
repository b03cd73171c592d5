"""Packaged presentations of the three deformed kinematical algebras.

The package ships one ``.alg`` file per Hopf algebra (each of the three
catalog entries has a primal presentation and a dual function-algebra
presentation) plus, for every entry, the data wiring the two together
(action, coaction, pairing conventions, star structure).  Files live in
``bicross/data`` inside the package; the environment variable
``BICROSS_DATA_DIR`` redirects the lookup to an external directory, which
lets the command-line driver and the tests run against modified copies.

Entry names (stable order):

* ``poincare-null-plane`` -- null-plane deformation of the 1+1 Poincare
  algebra; generators ``K, Pm, Pp`` and dual coordinates ``phi, am, ap``.
* ``galilei-nonstandard`` -- non-standard deformation of the 1+1 Galilei
  algebra; generators ``K, H, P`` and dual coordinates ``v, t, x``.
* ``galilei-kappa`` -- kappa-deformation of the 1+1 Galilei algebra with
  inverted parameter; generators ``K, P, H`` and dual coordinates
  ``v, x, t``.

Generator order in each file is chosen so the factorial pairing matches
dual generators positionally, and so every presentation is admissible for
the straightening engine (see :mod:`bicross.ncalg`).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

from .bicrossprod import BicrossData, parse_bicrossfile
from .expr import ExpPoly, ep_parse
from .flows import ClosedFlow, FlowDomainError
from .ncalg import AlgebraSpec, NCElement, parse_algfile
from .pairing import DualPairSpec, make_dual_pair

__all__ = [
    "ENTRY_NAMES",
    "ALGEBRA_FILE_NAMES",
    "CatalogError",
    "CatalogEntry",
    "data_path",
    "algebra_text",
    "load_algebra",
    "bicross_text",
    "load_bicross_data",
    "get",
    "list_entries",
]

#: The three catalog entries, stable order.
ENTRY_NAMES: tuple[str, ...] = (
    "poincare-null-plane",
    "galilei-nonstandard",
    "galilei-kappa",
)

#: All packaged algebra presentations (primal and dual), stable order.
ALGEBRA_FILE_NAMES: tuple[str, ...] = (
    "poincare-null-plane",
    "poincare-null-plane-dual",
    "galilei-nonstandard",
    "galilei-nonstandard-dual",
    "galilei-kappa",
    "galilei-kappa-dual",
)

#: Environment variable overriding the packaged data directory.
DATA_DIR_ENV = "BICROSS_DATA_DIR"


class CatalogError(KeyError):
    """Unknown catalog name or missing/unreadable data file."""


def data_path(filename: str) -> Path:
    """Resolve ``filename`` inside the active data directory.

    With ``BICROSS_DATA_DIR`` set, files are looked up there; otherwise the
    packaged ``bicross/data`` directory is used.  The file is not required
    to exist (callers give better errors with the resolved path in hand).
    """
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override) / filename
    return Path(str(resources.files("bicross") / "data" / filename))


def algebra_text(name: str) -> str:
    """Raw text of the packaged algebra file ``<name>.alg``."""
    path = data_path(f"{name}.alg")
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CatalogError(
            f"no algebra file for {name!r} (looked at {path}); packaged names: "
            + ", ".join(ALGEBRA_FILE_NAMES)
        ) from None


def load_algebra(name: str) -> AlgebraSpec:
    """Parse the packaged presentation ``name`` into a fresh AlgebraSpec.

    Each call returns an independent spec (specs carry mutable caches and
    callers may tighten ``step_limit`` or patch structure maps in tests).
    """
    return parse_algfile(algebra_text(name))


def bicross_text(name: str) -> str:
    """Raw text of the packaged coupling-data file ``<name>.bicross``."""
    path = data_path(f"{name}.bicross")
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CatalogError(
            f"no coupling data for {name!r} (looked at {path}); catalog "
            "entries: " + ", ".join(ENTRY_NAMES)
        ) from None


def load_bicross_data(name: str) -> BicrossData:
    """Parse the packaged coupling data ``name`` into fresh BicrossData."""
    return parse_bicrossfile(bicross_text(name))


def list_entries() -> list[str]:
    """Names of the catalog entries, in stable order."""
    return list(ENTRY_NAMES)


# ---------------------------------------------------------------------------
# closed-form numeric data per entry
# ---------------------------------------------------------------------------
#
# The formal machinery never sees these: closed flow maps involve logarithms,
# which the exp-polynomial algebra cannot express, so they exist only as
# numeric callables and serve as independent oracles for the series and the
# integrator.


def _poincare_advance(s, x, z):
    am, ap = x
    try:
        val = 1.0 - math.exp(-2.0 * s) * (1.0 - math.exp(2.0 * z * ap))
        if val <= 0.0:
            raise FlowDomainError(
                f"flow time {s} is outside the trajectory domain through {x}"
            )
        return (am * math.exp(2.0 * s), math.log(val) / (2.0 * z))
    except OverflowError:
        raise FlowDomainError(
            f"flow time {s} is outside the trajectory domain through {x}"
        ) from None


def _poincare_in_domain(s, x, z):
    try:
        return 1.0 - math.exp(-2.0 * s) * (1.0 - math.exp(2.0 * z * x[1])) > 0.0
    except OverflowError:
        return False


def _galilei_advance(s, x, z):
    b, a = x  # coordinate order (H, P)
    return (b - s * (1.0 - math.exp(-4.0 * z * a)) / (4.0 * z), a)


def _galilei_in_domain(s, x, z):
    return True


def _kappa_advance(s, x, kap):
    a, b = x  # coordinate order (P, H)
    d = 1.0 - s * a / (2.0 * kap)
    if d <= 0.0:
        raise FlowDomainError(
            f"flow time {s} is outside the trajectory domain through {x}"
        )
    return (a / d, b + 2.0 * kap * math.log(d))


def _kappa_in_domain(s, x, kap):
    return 1.0 - s * x[0] / (2.0 * kap) > 0.0


_FIXED_TOL = 1e-12


def _poincare_fixed(x, z):
    return abs(x[0]) <= _FIXED_TOL and abs(x[1]) <= _FIXED_TOL


def _galilei_fixed(x, z):
    return abs(x[1]) <= _FIXED_TOL  # any (H, 0) is an equilibrium


def _kappa_fixed(x, kap):
    return abs(x[0]) <= _FIXED_TOL  # any (0, H) is an equilibrium


class _Recipe(NamedTuple):
    advance: Callable
    in_domain: Callable
    fixed: Callable
    integral: str
    nonconserved: str | None
    default_param: float


_RECIPES: dict[str, _Recipe] = {
    "poincare-null-plane": _Recipe(
        _poincare_advance,
        _poincare_in_domain,
        _poincare_fixed,
        "Pm*(exp(2*z*Pp) - 1)",
        "Pm*(exp(-2*z*Pp) - 1)",
        0.3,
    ),
    "galilei-nonstandard": _Recipe(
        _galilei_advance,
        _galilei_in_domain,
        _galilei_fixed,
        "P",
        None,
        0.3,
    ),
    "galilei-kappa": _Recipe(
        _kappa_advance,
        _kappa_in_domain,
        _kappa_fixed,
        "P*exp(H/(2*k))",
        None,
        1.0,
    ),
}


def _induced_from_flow(flow: ClosedFlow, j: int):
    def act(v: float, a: Sequence[float], param_value: float) -> float:
        return flow.advance(v, a, param_value)[j]

    return act


@dataclass(frozen=True)
class CatalogEntry:
    """One fully wired catalog algebra.

    ``primal``/``dual`` are the two Hopf presentations, ``pair`` their
    factorial pairing, ``coupling`` the action/coaction data whose assembly
    reproduces ``primal``.  Numeric oracles: one :class:`ClosedFlow` per
    cocommutative generator, the registered first integral(s), a fixed-point
    predicate ``(point, param) -> bool``, and per-coordinate closed-form
    induced actions ``(group coordinate, character point, param) -> value``.
    ``nonconserved_variant`` is a sign-variant of the registered integral
    kept as a negative control: its Lie derivative is nonzero, and a
    regression test pins the exact residual.  ``star`` references the primal
    involution table.  ``model_coords`` names the dual coordinates paired
    with the cocommutative generators — the natural variables for induced
    models.  Entries are read-only; loaders hand out fresh copies.
    """

    name: str
    primal: AlgebraSpec
    dual: AlgebraSpec
    pair: DualPairSpec
    coupling: BicrossData
    default_param: float
    closed_flows: dict[str, ClosedFlow]
    first_integrals: dict[str, ExpPoly]
    nonconserved_variant: ExpPoly | None
    fixed_predicate: Callable[[Sequence[float], float], bool]
    induced_closed: dict[str, Callable[[float, Sequence[float], float], float]]
    star: dict[int, NCElement]
    model_coords: tuple[str, ...]


def get(name: str) -> CatalogEntry:
    """Build the fully populated catalog entry ``name`` (fresh instance)."""
    if name not in ENTRY_NAMES:
        raise CatalogError(
            f"unknown catalog entry {name!r}; known: " + ", ".join(ENTRY_NAMES)
        )
    primal = load_algebra(name)
    dual = load_algebra(f"{name}-dual")
    pair = make_dual_pair(primal, dual)
    coupling = load_bicross_data(name)
    recipe = _RECIPES[name]
    ectx = coupling.expr_context()
    flow = ClosedFlow(advance=recipe.advance, in_domain=recipe.in_domain)
    kname = coupling.kspec.names[0]
    induced = {
        lname: _induced_from_flow(flow, j)
        for j, lname in enumerate(coupling.lspec.names)
    }
    return CatalogEntry(
        name=name,
        primal=primal,
        dual=dual,
        pair=pair,
        coupling=coupling,
        default_param=recipe.default_param,
        closed_flows={kname: flow},
        first_integrals={"h": ep_parse(recipe.integral, ectx)},
        nonconserved_variant=(
            ep_parse(recipe.nonconserved, ectx) if recipe.nonconserved else None
        ),
        fixed_predicate=recipe.fixed,
        induced_closed=induced,
        star=primal.star,
        model_coords=tuple(
            dual.names[pair.correspondence[i]]
            for i in primal.sector_indices("K")
        ),
    )
