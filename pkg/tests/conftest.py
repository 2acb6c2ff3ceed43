"""Shared helpers: a small ordinal vocabulary, condition builders and
pointwise oracles."""

from __future__ import annotations

import random

import pytest

from ordbench.errors import LargenessViolated
from ordbench.magidor import Block, MagidorCondition, extend
from ordbench.ordinal import (
    OMEGA,
    ZERO,
    Ordinal,
    add,
    from_int,
    mul_nat,
    omega_power,
    parse_ordinal,
)
from ordbench.oset import OrdinalSet
from ordbench.universe import ToyUniverse


def o(text: str) -> Ordinal:
    return parse_ordinal(text)


def nat(n: int) -> Ordinal:
    return from_int(n)


W = OMEGA
W2 = omega_power(nat(2))
W3 = omega_power(nat(3))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)


def canon_universe(lam: str, bound: str = "w") -> ToyUniverse:
    return ToyUniverse(o(lam), o(bound))


def canonical_condition(u: ToyUniverse, kappas: list[Ordinal]) -> MagidorCondition:
    """Blocks at the given points with full interval sets, plus the top."""
    blocks = []
    prev = None
    for k in list(kappas) + [u.lambda0]:
        if u.o(k).is_zero:
            blocks.append(Block(k))
        else:
            lo = ZERO if prev is None else prev.successor()
            blocks.append(Block(k, OrdinalSet.interval(lo, k)))
        prev = k
    return MagidorCondition(u, tuple(blocks))


def random_extension(
    p: MagidorCondition, rng: random.Random, max_points: int = 3
) -> MagidorCondition:
    """A valid extension by a few randomly placed stratum points."""
    u = p.universe
    gaps = []
    for i in range(1, len(p.blocks) + 1):
        pts: list[Ordinal] = []
        b = p.blocks[i - 1]
        ob = u.o(b.kappa)
        if b.measure_set is not None and not ob.is_zero and rng.random() < 0.7:
            floor = p.blocks[i - 2].kappa if i >= 2 else None
            for _ in range(rng.randrange(1, max_points + 1)):
                xi = nat(rng.randrange(ob.as_int()))
                cand = (
                    b.measure_set.min_in_level(xi)
                    if floor is None
                    else b.measure_set.min_in_level_above(xi, floor)
                )
                for _ in range(rng.randrange(3)):
                    nxt = (
                        b.measure_set.min_in_level_above(xi, cand)
                        if cand is not None
                        else None
                    )
                    if nxt is None:
                        break
                    cand = nxt
                if cand is None or u.o(cand) >= ob:
                    continue
                pts.append(cand)
                floor = cand
        gaps.append(tuple(pts))
    try:
        return extend(p, tuple(gaps))
    except LargenessViolated:
        return p


def root_condition(u: ToyUniverse) -> MagidorCondition:
    """The root of the family adding a sequence of type lambda0: blocks at
    the canonical partial-sum positions of the ground CNF."""
    roots = []
    acc = ZERO
    for e, c in u.lambda0.terms:
        for _ in range(c):
            acc = add(acc, omega_power(e))
            roots.append(acc)
    return canonical_condition(u, roots[:-1])


def random_condition(
    u: ToyUniverse, rng: random.Random, max_steps: int = 3
) -> MagidorCondition:
    p = root_condition(u)
    for _ in range(rng.randrange(max_steps + 1)):
        p = random_extension(p, rng, max_points=2)
    return p


def gen_projection_condition(u: ToyUniverse, I, rng: random.Random, steps: int = 3):
    """A random condition built by unveiling index-set coordinates only.

    After each unveil the condition is re-densified, so every non-projected
    block is a connecting point strictly between adjacent projected blocks;
    in that regime the projection-lemma order-preservation and lift
    arguments go through (the CNF realizers of any fresh index are
    interleaved points of the base condition).
    """
    from ordbench.errors import (
        AlreadyUnveiled,
        OutOfRange,
        RepairImpossible,
        WitnessUnavailable,
    )
    from ordbench.magidor import extend_minimal, gamma_of, unveil_type
    from ordbench.projection import densify

    cur = densify(root_condition(u), I)
    for _ in range(steps):
        top_coord = gamma_of(cur, len(cur.blocks))
        coords = {gamma_of(cur, i) for i in range(1, len(cur.blocks))}
        pool = I.points.restrict_below(top_coord).enumerate(40)
        pool = [c for c in pool if c not in coords and not c.is_zero]
        if not pool:
            break
        cand = pool[rng.randrange(len(pool))]
        try:
            xtype = unveil_type(cur, cand)
            cur, _ = extend_minimal(cur, xtype)
            cur = densify(cur, I)
        except (AlreadyUnveiled, OutOfRange, WitnessUnavailable, RepairImpossible):
            continue
    return cur


import functools


@functools.lru_cache(maxsize=None)
def small_ordinals_below(bound: Ordinal, count: int) -> list[Ordinal]:
    """A fixed grid of ordinals below `bound` in increasing order, used as
    a pointwise oracle domain."""
    out: list[Ordinal] = []
    seen = set()
    # Enumerate sums w^2*a + w*b + c style below w^3*k; good enough for
    # desk-scale oracles.
    for a3 in range(4):
        for a2 in range(6):
            for a1 in range(6):
                for a0 in range(8):
                    g = add(
                        add(mul_nat(W3, a3), mul_nat(W2, a2)),
                        add(mul_nat(W, a1), nat(a0)),
                    )
                    if g < bound and g not in seen:
                        seen.add(g)
                        out.append(g)
    out.sort()
    return out[:count]
