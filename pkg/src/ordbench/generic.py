"""The canonical simulated generic sequence and the filter-reconstruction
predicate.  Over the canonical universe the sequence is the identity on
the ground set (restricted to an index set when simulating a subsequence),
so every membership and order-type question is decidable."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UniverseMismatch
from .magidor import Block, MagidorCondition, leq, validate
from .ordinal import ZERO, Ordinal
from .oset import OrdinalSet

__all__ = ["CanonicalSequence", "in_filter", "interval_otp", "filter_pair_compatible"]


@dataclass(frozen=True)
class CanonicalSequence:
    """C(g) = g for g < lambda0, optionally restricted to an index set."""

    lambda0: Ordinal
    restriction: OrdinalSet | None = None

    def points(self) -> OrdinalSet:
        base = OrdinalSet.interval(ZERO, self.lambda0)
        if self.restriction is None:
            return base
        return base.intersect(self.restriction)


def in_filter(p: MagidorCondition, seq: CanonicalSequence) -> bool:
    """Reconstruction predicate: the named points lie on the sequence and
    the remaining sequence points fall into the block sets, blockwise."""
    if p.universe.lambda0 != seq.lambda0:
        raise UniverseMismatch("sequence and condition ground sets differ")
    pts = seq.points()
    prev: Ordinal | None = None
    for b in p.blocks:
        if b is not p.top and b.kappa not in pts:
            return False
        # Blockwise open intervals (kappa(t_{i-1}), kappa(t_i)) with t_0 = 0,
        # so the sequence value at 0 is never constrained.
        seg = pts.restrict_above(prev if prev is not None else ZERO).restrict_below(
            b.kappa
        )
        if b.measure_set is None:
            if not seg.is_empty():
                return False
        elif not seg.difference(b.measure_set).is_empty():
            return False
        prev = b.kappa
    return True


def interval_otp(seq: CanonicalSequence, a: Ordinal, b: Ordinal) -> Ordinal:
    """Order type of the sequence points strictly between a and b."""
    if not a < b <= seq.lambda0:
        raise ValueError(f"need a < b <= {seq.lambda0}")
    return seq.points().restrict_above(a).restrict_below(b).otp()


def filter_pair_compatible(
    p: MagidorCondition, q: MagidorCondition, seq: CanonicalSequence
) -> bool:
    """Directedness witness: the blockwise-intersection condition extends
    both and stays in the filter."""
    if p.universe != q.universe:
        raise UniverseMismatch("conditions live over different universes")
    if not (in_filter(p, seq) and in_filter(q, seq)):
        return False
    if p.top.kappa != q.top.kappa:
        return False
    u = p.universe
    named = sorted({b.kappa for b in p.blocks[:-1]} | {b.kappa for b in q.blocks[:-1]})
    p_sets = {b.kappa: b.measure_set for b in p.blocks}
    q_sets = {b.kappa: b.measure_set for b in q.blocks}

    def enclosing(cond: MagidorCondition, kappa: Ordinal) -> Block:
        return next(b for b in cond.blocks if b.kappa > kappa)

    blocks: list[Block] = []
    prev: Ordinal | None = None
    for kappa in named:
        if u.o(kappa).is_zero:
            blocks.append(Block(kappa))
        else:
            sp = p_sets.get(kappa) or enclosing(p, kappa).measure_set
            sq = q_sets.get(kappa) or enclosing(q, kappa).measure_set
            if sp is None or sq is None:
                return False
            s = sp.intersect(sq).restrict_below(kappa)
            if prev is not None:
                s = s.restrict_above(prev)
            blocks.append(Block(kappa, s))
        prev = kappa
    top_set = p.top.measure_set.intersect(q.top.measure_set)
    if prev is not None:
        top_set = top_set.restrict_above(prev)
    blocks.append(Block(p.top.kappa, top_set))
    merged = MagidorCondition(u, tuple(blocks))
    return (
        not validate(merged)
        and leq(p, merged)
        and leq(q, merged)
        and in_filter(merged, seq)
    )
