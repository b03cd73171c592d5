"""Shared fixtures: the six packaged algebra presentations.

Parsed specs are session-scoped and must be treated as read-only; tests
that mutate a spec (step limits, structure-map patches) parse a fresh copy
from ``alg_texts``.
"""

from __future__ import annotations

import pytest

from bicross.bicrossprod import BicrossData, parse_bicrossfile
from bicross.catalog import (
    ALGEBRA_FILE_NAMES,
    ENTRY_NAMES,
    CatalogEntry,
    algebra_text,
    bicross_text,
    get,
)
from bicross.ncalg import AlgebraSpec, parse_algfile


@pytest.fixture(scope="session")
def alg_texts() -> dict[str, str]:
    return {name: algebra_text(name) for name in ALGEBRA_FILE_NAMES}


@pytest.fixture(scope="session")
def bicross_texts() -> dict[str, str]:
    return {name: bicross_text(name) for name in ENTRY_NAMES}


@pytest.fixture(scope="session")
def coupling_data(bicross_texts) -> dict[str, BicrossData]:
    return {name: parse_bicrossfile(text) for name, text in bicross_texts.items()}


@pytest.fixture(scope="session")
def catalog_entries() -> dict[str, CatalogEntry]:
    return {name: get(name) for name in ENTRY_NAMES}


@pytest.fixture(scope="session")
def poincare(alg_texts) -> AlgebraSpec:
    return parse_algfile(alg_texts["poincare-null-plane"])


@pytest.fixture(scope="session")
def dual_poincare(alg_texts) -> AlgebraSpec:
    return parse_algfile(alg_texts["poincare-null-plane-dual"])


@pytest.fixture(scope="session")
def galilei(alg_texts) -> AlgebraSpec:
    return parse_algfile(alg_texts["galilei-nonstandard"])


@pytest.fixture(scope="session")
def dual_galilei(alg_texts) -> AlgebraSpec:
    return parse_algfile(alg_texts["galilei-nonstandard-dual"])


@pytest.fixture(scope="session")
def kappa(alg_texts) -> AlgebraSpec:
    return parse_algfile(alg_texts["galilei-kappa"])


@pytest.fixture(scope="session")
def dual_kappa(alg_texts) -> AlgebraSpec:
    return parse_algfile(alg_texts["galilei-kappa-dual"])


@pytest.fixture(scope="session")
def all_algebras(
    poincare, dual_poincare, galilei, dual_galilei, kappa, dual_kappa
) -> dict[str, AlgebraSpec]:
    return {
        "poincare-null-plane": poincare,
        "poincare-null-plane-dual": dual_poincare,
        "galilei-nonstandard": galilei,
        "galilei-nonstandard-dual": dual_galilei,
        "galilei-kappa": kappa,
        "galilei-kappa-dual": dual_kappa,
    }
