"""Forcing conditions over a toy universe: finite block sequences with
measure-one candidate sets, the two orders, step extensions, extension
types and the coordinate calculus."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AlreadyUnveiled,
    BadCut,
    LargenessViolated,
    NotAnExtension,
    NotIncreasing,
    OutOfRange,
    PointNotInMeasureSet,
    UniverseMismatch,
    WitnessUnavailable,
)
from .ordinal import ZERO, Ordinal, add, cnf_difference, compare, omega_power
from .oset import OrdinalSet
from .universe import ToyUniverse

__all__ = [
    "Block",
    "MagidorCondition",
    "ExtensionType",
    "validate",
    "leq",
    "leq_star",
    "gamma_of",
    "type_of",
    "extend",
    "find_type",
    "unveil_type",
    "extend_minimal",
    "split_at",
    "join",
]

Alphas = tuple[tuple[Ordinal, ...], ...]


@dataclass(frozen=True)
class Block:
    """A named point with its candidate set (present iff o(kappa) > 0)."""

    kappa: Ordinal
    measure_set: OrdinalSet | None = None

    def is_bare(self) -> bool:
        return self.measure_set is None


@dataclass(frozen=True)
class ExtensionType:
    """Per-gap finite sequences of measure indices governing an extension."""

    per_block: tuple[tuple[Ordinal, ...], ...]

    def total_length(self) -> int:
        return sum(len(x) for x in self.per_block)

    def is_empty(self) -> bool:
        return self.total_length() == 0

    def __str__(self) -> str:
        gaps = ",".join("<" + ",".join(str(x) for x in xs) + ">" for xs in self.per_block)
        return f"<{gaps}>"


@dataclass(frozen=True)
class MagidorCondition:
    """Blocks in increasing kappa order; the last block is the top pair."""

    universe: ToyUniverse
    blocks: tuple[Block, ...]

    @property
    def top(self) -> Block:
        return self.blocks[-1]

    def __len__(self) -> int:
        return len(self.blocks)

    def kappas(self) -> list[Ordinal]:
        """kappa(p): the named points excluding the top."""
        return [b.kappa for b in self.blocks[:-1]]

    def o(self, i: int) -> Ordinal:
        """o-value of the 1-based i-th block."""
        return self.universe.o(self.blocks[i - 1].kappa)

    def gammas(self) -> tuple[Ordinal, ...]:
        """Coordinates of all blocks (cached; conditions are immutable)."""
        try:
            return object.__getattribute__(self, "_gammas")
        except AttributeError:
            out = []
            total = ZERO
            for i in range(1, len(self.blocks) + 1):
                total = add(total, omega_power(self.o(i)))
                out.append(total)
            object.__setattr__(self, "_gammas", tuple(out))
            return tuple(out)


def _check_same_universe(p: MagidorCondition, q: MagidorCondition):
    if p.universe != q.universe:
        raise UniverseMismatch("conditions live over different universes")


def validate(p: MagidorCondition) -> list[str]:
    """All violations of the condition shape; empty means valid."""
    u = p.universe
    out: list[str] = []
    if not p.blocks:
        return ["condition has no blocks"]
    prev: Ordinal | None = None
    for i, b in enumerate(p.blocks, start=1):
        tag = f"block {i} (kappa={b.kappa})"
        if b.kappa > u.lambda0:
            out.append(f"{tag}: point beyond the ground set")
            continue
        if prev is not None and b.kappa <= prev:
            out.append(f"{tag}: kappas not increasing")
        is_top = i == len(p.blocks)
        ob = u.o(b.kappa)
        if is_top and ob.is_zero:
            out.append(f"{tag}: top block needs positive limit order")
        if ob.is_zero and b.measure_set is not None:
            out.append(f"{tag}: zero-order point must be bare")
        if not ob.is_zero and b.measure_set is None:
            out.append(f"{tag}: positive-order point needs a measure set")
        if b.measure_set is not None:
            B = b.measure_set
            if B.restrict_below(b.kappa) != B:
                out.append(f"{tag}: measure set not below its point")
            if prev is not None:
                low = B.min_element()
                if low is not None and low <= prev:
                    out.append(f"{tag}: min of measure set not above previous point")
            if not ob.is_zero and not u.is_large_all(B, b.kappa):
                out.append(f"{tag}: measure set not large at every index")
            elif u.star_closure(B, b.kappa) != B:
                out.append(f"{tag}: measure set not in stratified (star-closed) form")
        prev = b.kappa
    return out


def leq(p: MagidorCondition, q: MagidorCondition) -> bool:
    """Forcing order: q extends p."""
    _check_same_universe(p, q)
    if p.top.kappa != q.top.kappa:
        return False
    top_p, top_q = p.top.measure_set, q.top.measure_set
    if not top_q.difference(top_p).is_empty():
        return False
    positions = {b.kappa: j for j, b in enumerate(q.blocks[:-1])}
    matched: list[int] = []
    for b in p.blocks[:-1]:
        j = positions.get(b.kappa)
        if j is None:
            return False
        matched.append(j)
        qb = q.blocks[j]
        if (b.measure_set is None) != (qb.measure_set is None):
            return False
        if b.measure_set is not None:
            if not qb.measure_set.difference(b.measure_set).is_empty():
                return False
    matched_set = set(matched)
    for j, qb in enumerate(q.blocks[:-1]):
        if j in matched_set:
            continue
        enclosing = next(
            (p.blocks[r] for r, mj in enumerate(matched) if mj > j), p.top
        )
        B = enclosing.measure_set
        if B is None or qb.kappa not in B:
            return False
        if compare(p.universe.o(qb.kappa), p.universe.o(enclosing.kappa)) >= 0:
            return False
        if qb.measure_set is not None:
            allowed = B.restrict_below(qb.kappa)
            if not qb.measure_set.difference(allowed).is_empty():
                return False
    return True


def leq_star(p: MagidorCondition, q: MagidorCondition) -> bool:
    """Direct extension: same length."""
    return len(p.blocks) == len(q.blocks) and leq(p, q)


def _leq_derived(p: MagidorCondition, q: MagidorCondition) -> bool:
    """The condensed order on star-closed conditions: named points survive
    and all of q's material is drawn from p's sets (containment direction
    corrected relative to the condensed statement).  Equivalent to leq;
    kept as a cross-check."""
    _check_same_universe(p, q)
    if p.top.kappa != q.top.kappa:
        return False
    p_by_kappa = {b.kappa: b for b in p.blocks}
    if any(b.kappa not in {s.kappa for s in q.blocks} for b in p.blocks):
        return False
    u = p.universe
    for s in q.blocks:
        r = next((b for b in p.blocks if b.kappa >= s.kappa), None)
        if r is None:
            return False
        if r.kappa == s.kappa:
            if (r.measure_set is None) != (s.measure_set is None):
                return False
            if s.measure_set is not None:
                if not s.measure_set.difference(r.measure_set).is_empty():
                    return False
        else:
            if r.measure_set is None or s.kappa not in r.measure_set:
                return False
            if compare(u.o(s.kappa), u.o(r.kappa)) >= 0:
                return False
            if s.measure_set is not None:
                if not s.measure_set.difference(r.measure_set).is_empty():
                    return False
    return True


def gamma_of(p: MagidorCondition, i: int) -> Ordinal:
    """Coordinate of the i-th point in every extension: sum of w^o(t_j), j<=i."""
    if not 1 <= i <= len(p.blocks):
        raise OutOfRange(f"block index {i} out of 1..{len(p.blocks)}")
    return p.gammas()[i - 1]


def _gap_bounds(p: MagidorCondition, i: int) -> tuple[Ordinal | None, Ordinal]:
    """Open interval below the 1-based i-th block."""
    lo = p.blocks[i - 2].kappa if i >= 2 else None
    return lo, p.blocks[i - 1].kappa


def _check_alphas(p: MagidorCondition, alphas: Alphas) -> None:
    if len(alphas) != len(p.blocks):
        raise NotIncreasing(
            f"assignment has {len(alphas)} gaps, condition has {len(p.blocks)}"
        )
    for i, pts in enumerate(alphas, start=1):
        if not pts:
            continue
        lo, hi = _gap_bounds(p, i)
        B = p.blocks[i - 1].measure_set
        if B is None:
            raise PointNotInMeasureSet(f"gap {i} lies below a bare block")
        prev = lo
        for a in pts:
            if prev is not None and a <= prev:
                raise NotIncreasing(f"gap {i}: point {a} not above {prev}")
            if a >= hi:
                raise NotIncreasing(f"gap {i}: point {a} not below {hi}")
            if a not in B:
                raise PointNotInMeasureSet(f"gap {i}: point {a} outside the block set")
            if compare(p.universe.o(a), p.universe.o(hi)) >= 0:
                raise LargenessViolated(
                    f"gap {i}: point {a} has order >= o({hi})"
                )
            prev = a


def type_of(p: MagidorCondition, alphas: Alphas) -> ExtensionType:
    """The extension type determined by an interleaving assignment."""
    _check_alphas(p, alphas)
    return ExtensionType(
        tuple(tuple(p.universe.o(a) for a in pts) for pts in alphas)
    )


def extend(
    p: MagidorCondition,
    alphas: Alphas,
    shrink: dict[Ordinal, OrdinalSet] | None = None,
) -> MagidorCondition:
    """The extension of p adding the assigned points, with inherited sets.

    New points inherit the enclosing block set truncated to the open
    interval they dominate; each invaded block set is cut above the last
    point inserted below it.  Optional shrink replaces the set at a named
    point (it must stay large and shrink the original).
    """
    _check_alphas(p, alphas)
    u = p.universe
    new_blocks: list[Block] = []
    for i, b in enumerate(p.blocks, start=1):
        pts = alphas[i - 1]
        lo, _ = _gap_bounds(p, i)
        prev = lo
        for a in pts:
            if u.o(a).is_zero:
                new_blocks.append(Block(a))
            else:
                inherited = b.measure_set.restrict_below(a)
                if prev is not None:
                    inherited = inherited.restrict_above(prev)
                new_blocks.append(Block(a, inherited))
            prev = a
        if pts and b.measure_set is not None:
            new_blocks.append(Block(b.kappa, b.measure_set.restrict_above(pts[-1])))
        else:
            new_blocks.append(b)
    if shrink:
        shrunk: list[Block] = []
        for b in new_blocks:
            if b.kappa in shrink:
                S = shrink[b.kappa]
                if b.measure_set is None:
                    raise LargenessViolated(f"cannot shrink bare block {b.kappa}")
                if not S.difference(b.measure_set).is_empty():
                    raise LargenessViolated(f"shrink at {b.kappa} is not a subset")
                shrunk.append(Block(b.kappa, S))
            else:
                shrunk.append(b)
        new_blocks = shrunk
    out = MagidorCondition(u, tuple(new_blocks))
    problems = validate(out)
    if problems:
        raise LargenessViolated("; ".join(problems))
    return out


def find_type(
    p: MagidorCondition, q: MagidorCondition
) -> tuple[ExtensionType, Alphas]:
    """The unique (type, assignment) with extend(p, assignment) <=* q."""
    if not leq(p, q):
        raise NotAnExtension("q does not extend p")
    p_kappas = {b.kappa for b in p.blocks[:-1]}
    gaps: list[list[Ordinal]] = [[] for _ in p.blocks]
    gap = 0
    boundaries = [b.kappa for b in p.blocks]
    for qb in q.blocks[:-1]:
        while qb.kappa > boundaries[gap]:
            gap += 1
        if qb.kappa in p_kappas:
            gap += 1
            continue
        gaps[gap].append(qb.kappa)
    alphas = tuple(tuple(g) for g in gaps)
    return type_of(p, alphas), alphas


def unveil_type(p: MagidorCondition, gamma: Ordinal) -> ExtensionType:
    """The type unveiling gamma as maximal coordinate."""
    coords = [gamma_of(p, i) for i in range(1, len(p.blocks) + 1)]
    if any(gamma == c for c in coords):
        raise AlreadyUnveiled(f"{gamma} is already a block coordinate")
    if gamma.is_zero or gamma > coords[-1]:
        raise OutOfRange(f"{gamma} is not between block coordinates")
    slot = next(i for i, c in enumerate(coords) if gamma < c)  # 0-based gap
    base = coords[slot - 1] if slot else ZERO
    if gamma < base:
        raise OutOfRange(f"{gamma} is below the preceding coordinate")
    exponents = tuple(cnf_difference(base, gamma))
    limit = p.o(slot + 1)
    assert all(compare(e, limit) < 0 for e in exponents)
    per = [()] * len(p.blocks)
    per[slot] = exponents
    return ExtensionType(tuple(per))


def extend_minimal(
    p: MagidorCondition, xtype: ExtensionType
) -> tuple[MagidorCondition, Alphas]:
    """Extend by the least admissible witnesses of the given type."""
    if len(xtype.per_block) != len(p.blocks):
        raise OutOfRange("type does not fit the condition")
    gaps: list[tuple[Ordinal, ...]] = []
    for i, levels in enumerate(xtype.per_block, start=1):
        if not levels:
            gaps.append(())
            continue
        b = p.blocks[i - 1]
        if b.measure_set is None:
            raise WitnessUnavailable(f"gap {i} lies below a bare block")
        lo, _ = _gap_bounds(p, i)
        picked: list[Ordinal] = []
        floor = lo
        for xi in levels:
            if floor is None:
                a = b.measure_set.min_in_level(xi)
            else:
                a = b.measure_set.min_in_level_above(xi, floor)
            if a is None:
                raise WitnessUnavailable(
                    f"gap {i}: no level-{xi} point above {floor} in the block set"
                )
            picked.append(a)
            floor = a
        gaps.append(tuple(picked))
    alphas = tuple(gaps)
    return extend(p, alphas), alphas


def split_at(
    p: MagidorCondition, i: int
) -> tuple[MagidorCondition, MagidorCondition | None]:
    """Lower part up to block i (as its top) and the part above it."""
    if not 1 <= i <= len(p.blocks):
        raise BadCut(f"block index {i} out of range")
    if p.o(i).is_zero:
        raise BadCut(f"block {i} has zero order and cannot serve as a top")
    lower = MagidorCondition(p.universe, p.blocks[:i])
    if i == len(p.blocks):
        return lower, None
    cut = p.blocks[i - 1].kappa
    upper_blocks = tuple(
        Block(b.kappa, None if b.measure_set is None else b.measure_set.restrict_above(cut))
        for b in p.blocks[i:]
    )
    return lower, MagidorCondition(p.universe, upper_blocks)


def join(
    lower: MagidorCondition, upper: MagidorCondition | None
) -> MagidorCondition:
    """Inverse of split_at."""
    if upper is None:
        return lower
    _check_same_universe(lower, upper)
    out = MagidorCondition(lower.universe, lower.blocks + upper.blocks)
    problems = validate(out)
    if problems:
        raise BadCut("; ".join(problems))
    return out
