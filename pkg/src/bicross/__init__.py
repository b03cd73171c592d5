"""Symbolic/numeric engine for deformed Hopf algebras with bicrossproduct structure.

The package normal-orders products in finitely generated algebras whose
structure constants are truncated series in a deformation parameter, verifies
Hopf-algebra, bicrossproduct-compatibility and duality-pairing axioms up to
configurable truncation windows, computes one-parameter flows generated by the
cocommutative sector, and constructs representations induced by characters of
the commutative sector.  A catalog ships three worked quantum kinematical
algebras together with their closed flows, first integrals and induced-action
closed forms; the ``bicross`` command line exposes every check.
"""

from __future__ import annotations

__version__ = "0.1.0"

__all__ = ["__version__"]
