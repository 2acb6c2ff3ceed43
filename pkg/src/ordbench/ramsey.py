"""Finite analogues of the homogenization and important-coordinate lemmas,
by exhaustive search over sub-products of increasing tuples.

NotFound is a legitimate outcome: the measure-theoretic guarantees do not
transfer to arbitrary finite functions, so the module certifies rather
than promises.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Hashable

__all__ = ["FiniteProductFn", "homogenize", "important_coordinates"]


@dataclass(frozen=True)
class FiniteProductFn:
    """A total function on increasing tuples drawn from finite factors."""

    factors: tuple[tuple[int, ...], ...]
    table: dict[tuple[int, ...], Hashable]

    def __post_init__(self):
        for f in self.factors:
            if list(f) != sorted(set(f)):
                raise ValueError("factors must be strictly increasing")
        for t in self.domain():
            if t not in self.table:
                raise ValueError(f"table missing the tuple {t}")

    def domain(self) -> list[tuple[int, ...]]:
        return [
            t
            for t in itertools.product(*self.factors)
            if all(a < b for a, b in zip(t, t[1:]))
        ]

    def __call__(self, t: tuple[int, ...]):
        return self.table[t]


def build_product_fn(factors, fn) -> FiniteProductFn:
    """Tabulate a callable on the increasing-tuple product."""
    factors = tuple(tuple(sorted(set(f))) for f in factors)
    table = {}
    for t in itertools.product(*factors):
        if all(a < b for a, b in zip(t, t[1:])):
            table[t] = fn(*t)
    return FiniteProductFn(factors, table)


def _subproducts(factors, min_sizes):
    """Sub-factor choices ordered by decreasing total size, then lexicographic."""
    options = []
    for f, m in zip(factors, min_sizes):
        if m > len(f):
            return
        per = []
        for size in range(len(f), m - 1, -1):
            per.extend(itertools.combinations(f, size))
        options.append(per)
    ranked = sorted(
        itertools.product(*options),
        key=lambda hs: (-sum(len(h) for h in hs), hs),
    )
    yield from ranked


def _increasing_tuples(subfactors):
    return [
        t
        for t in itertools.product(*subfactors)
        if all(a < b for a, b in zip(t, t[1:]))
    ]


def homogenize(F: FiniteProductFn, min_sizes: list[int]):
    """(sub-factors, color) with F constant on the sub-product, or None.

    Sub-products are searched by decreasing total size so the first hit is
    the strongest certificate.
    """
    if len(min_sizes) != len(F.factors):
        raise ValueError("min_sizes must match the factor count")
    for hs in _subproducts(F.factors, min_sizes):
        tuples = _increasing_tuples(hs)
        if not tuples:
            continue
        colors = {F(t) for t in tuples}
        if len(colors) == 1:
            return tuple(hs), colors.pop()
    return None


def _coordinate_sets(n: int):
    """Subsets of {1..n} by increasing size, then lexicographic."""
    for size in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), size)


def _respects(F: FiniteProductFn, tuples, I: tuple[int, ...]) -> bool:
    """F(a) = F(b) iff a|I = b|I, checked via the projection classes."""
    by_proj: dict[tuple[int, ...], Any] = {}
    values: dict[Any, tuple[int, ...]] = {}
    for t in tuples:
        key = tuple(t[i - 1] for i in I)
        v = F(t)
        if key in by_proj:
            if by_proj[key] != v:
                return False  # same projection, different value
        else:
            by_proj[key] = v
            if v in values and values[v] != key:
                return False  # same value, different projection
            values[v] = key
    return True


def important_coordinates(F: FiniteProductFn, min_sizes: list[int]):
    """(sub-factors, I) with F(a)=F(b) iff a|I=b|I on the sub-product.

    I is globally minimal (by size, then lexicographically); for each I the
    sub-products are searched by decreasing total size.
    """
    if len(min_sizes) != len(F.factors):
        raise ValueError("min_sizes must match the factor count")
    n = len(F.factors)
    for I in _coordinate_sets(n):
        for hs in _subproducts(F.factors, min_sizes):
            tuples = _increasing_tuples(hs)
            if not tuples:
                continue
            if _respects(F, tuples, I):
                return tuple(hs), I
    return None
