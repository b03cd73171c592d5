"""Multi-index combinatorics over fixed-length tuples of non-negative integers.

A multi-index ``m = (m1, ..., mr)`` labels a monomial ``g1^m1 ... gr^mr``.
This module supplies the exact combinatorial helpers used throughout the
engine: factorials, the componentwise partial order, binomial products, and
iteration over bounded index sets.  All arithmetic is exact (Python integers).
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

MultiIndex = tuple[int, ...]


def mzero(nvars: int) -> MultiIndex:
    """Return the zero multi-index of length ``nvars``."""
    return (0,) * nvars


def munit(nvars: int, j: int) -> MultiIndex:
    """Return the elementary multi-index with a single 1 in slot ``j``."""
    if not 0 <= j < nvars:
        raise IndexError(f"slot {j} out of range for {nvars} variables")
    return tuple(1 if i == j else 0 for i in range(nvars))


def mtotal(m: Sequence[int]) -> int:
    """Total degree ``|m| = m1 + ... + mr``."""
    return sum(m)


def mfactorial(m: Sequence[int]) -> int:
    """Product of componentwise factorials ``m! = m1! ... mr!``."""
    out = 1
    for mi in m:
        if mi < 0:
            raise ValueError(f"negative multi-index entry in {tuple(m)}")
        out *= math.factorial(mi)
    return out


def mleq(p: Sequence[int], m: Sequence[int]) -> bool:
    """Componentwise partial order: ``p <= m`` in every slot."""
    if len(p) != len(m):
        raise ValueError("multi-index lengths differ")
    return all(pi <= mi for pi, mi in zip(p, m))


def madd(p: Sequence[int], m: Sequence[int]) -> MultiIndex:
    """Componentwise sum ``p + m``."""
    if len(p) != len(m):
        raise ValueError("multi-index lengths differ")
    return tuple(pi + mi for pi, mi in zip(p, m))


def msub(m: Sequence[int], p: Sequence[int]) -> MultiIndex:
    """Componentwise difference ``m - p``; requires ``p <= m``."""
    if not mleq(p, m):
        raise ValueError(f"{tuple(p)} is not componentwise <= {tuple(m)}")
    return tuple(mi - pi for mi, pi in zip(m, p))


def mcomb(m: Sequence[int], p: Sequence[int]) -> int:
    """Product of componentwise binomials ``C(m, p) = prod C(mi, pi)``.

    Returns 0 when ``p <= m`` fails in some slot (the convention that makes
    binomial-type expansion sums over all ``p`` correct).
    """
    if len(p) != len(m):
        raise ValueError("multi-index lengths differ")
    out = 1
    for mi, pi in zip(m, p):
        if pi < 0 or pi > mi:
            return 0
        out *= math.comb(mi, pi)
    return out


def iter_leq(m: Sequence[int]) -> Iterator[MultiIndex]:
    """Iterate all multi-indices ``p`` with ``0 <= p <= m`` componentwise."""
    return itertools.product(*(range(mi + 1) for mi in m))


def iter_degree(nvars: int, total: int) -> Iterator[MultiIndex]:
    """Iterate all multi-indices of length ``nvars`` with ``|m| = total``.

    Lexicographic order on the tuples.
    """
    if nvars == 0:
        if total == 0:
            yield ()
        return
    if nvars == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in iter_degree(nvars - 1, total - first):
            yield (first,) + rest


def iter_upto(nvars: int, maxtotal: int) -> Iterator[MultiIndex]:
    """Iterate all multi-indices with ``|m| <= maxtotal``, degree by degree."""
    for total in range(maxtotal + 1):
        yield from iter_degree(nvars, total)
