"""The subsequence forcing: index recursion, projection, the dense set of
correctly-linked conditions, densification, and the onto/lift halves of
the projection lemma."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import (
    IndexSetMismatch,
    LargenessViolated,
    NonTermination,
    NotAnExtension,
    RepairImpossible,
    UniverseMismatch,
    WitnessUnavailable,
)
from .magidor import (
    Block,
    MagidorCondition,
    extend_minimal,
    gamma_of,
    leq,
    unveil_type,
    validate,
)
from .ordinal import ZERO, Ordinal, add, cnf_difference, compare, omega_power
from .oset import OrdinalSet, least_in_level
from .universe import ToyUniverse

__all__ = [
    "IndexSet",
    "ICondition",
    "DFailure",
    "index_of",
    "index_chain",
    "pi",
    "validate_I",
    "leq_I",
    "leq_I_star",
    "in_D",
    "densify",
    "onto_construct",
    "lift",
    "correct_computation_check",
    "refine_to_clubs",
    "quotient_member",
]

DENSIFY_CAP = 200
CLUB_REFINE_CAP = 200

AnyCondition = Union[MagidorCondition, "ICondition"]


@dataclass(frozen=True)
class IndexSet:
    """A subset of the ground order type, with limit/successor queries."""

    points: OrdinalSet

    def __contains__(self, g: Ordinal) -> bool:
        return g in self.points

    def in_lim(self, g: Ordinal) -> bool:
        """Member whose predecessors in the set are cofinal below it."""
        if g not in self.points:
            return False
        if g.is_zero:
            return True  # sup of the empty set is 0
        return not self.points.restrict_below(g).is_bounded_below(g)

    def in_succ(self, g: Ordinal) -> bool:
        return g in self.points and not self.in_lim(g)

    def pred(self, g: Ordinal) -> Ordinal | None:
        """Greatest member strictly below g, when attained."""
        return self.points.restrict_below(g).max_element()

    def clause_pred(self, g: Ordinal) -> Ordinal | None:
        """Predecessor for the linkage clauses; 0 stands in below the minimum.

        None means the members below g have an unattained supremum, which
        only happens for index sets that are not closed below their sup.
        """
        below = self.points.restrict_below(g)
        if below.is_empty():
            return ZERO
        return below.max_element()

    def min_level_above(self, xi: Ordinal, floor: Ordinal) -> Ordinal | None:
        return self.points.min_in_level_above(xi, floor)

    def min_in_open(self, lo: Ordinal, hi: Ordinal) -> Ordinal | None:
        return self.points.restrict_above(lo).restrict_below(hi).min_element()

    def lim_points(self, top: Ordinal) -> OrdinalSet:
        """Materialized Lim(I) below top (reports and the CLI)."""
        cl = self.points.closure_points(top).intersect(self.points)
        if ZERO in self.points:
            cl = cl.union(OrdinalSet.singleton(ZERO))
        return cl.restrict_below(top)

    def succ_points(self, top: Ordinal) -> OrdinalSet:
        return self.points.restrict_below(top).difference(self.lim_points(top))


@dataclass(frozen=True)
class ICondition:
    """Same block shape as a plain condition; sets live at Lim positions."""

    universe: ToyUniverse
    index_set: IndexSet
    blocks: tuple[Block, ...]

    @property
    def top(self) -> Block:
        return self.blocks[-1]


def _check_compatible(p: ICondition, q: ICondition):
    if p.universe != q.universe:
        raise UniverseMismatch("conditions live over different universes")
    if p.index_set != q.index_set:
        raise IndexSetMismatch("conditions carry different index sets")


# ---------------------------------------------------------------------------
# Index recursion and projection
# ---------------------------------------------------------------------------


def index_chain(cond: AnyCondition, I: IndexSet) -> list[Ordinal | None]:
    """I(t_i, p) for the non-top blocks; None encodes N/A and propagates."""
    u = cond.universe
    vals: list[Ordinal | None] = []
    prev: Ordinal | None = ZERO
    for b in cond.blocks[:-1]:
        if prev is None:
            vals.append(None)
            continue
        v = I.min_level_above(u.o(b.kappa), prev)
        vals.append(v)
        prev = v
    return vals


def index_of(cond: AnyCondition, i: int, I: IndexSet) -> Ordinal | None:
    """The coordinate the i-th block unveils in the subsequence, or N/A."""
    if not 1 <= i <= len(cond.blocks) - 1:
        raise ValueError(f"block index {i} out of 1..{len(cond.blocks) - 1}")
    return index_chain(cond, I)[i - 1]


def _projected_indices(p: MagidorCondition, I: IndexSet) -> list[int]:
    """1-based indices of the non-top blocks whose coordinate lies in I."""
    return [
        i
        for i in range(1, len(p.blocks))
        if gamma_of(p, i) in I
    ]


def pi(p: MagidorCondition, I: IndexSet) -> ICondition:
    """Keep blocks at I-coordinates, strip sets at successor positions."""
    kept: list[Block] = []
    for i in _projected_indices(p, I):
        b = p.blocks[i - 1]
        if I.in_succ(gamma_of(p, i)):
            kept.append(Block(b.kappa))
        else:
            kept.append(b)
    kept.append(p.top)
    return ICondition(p.universe, I, tuple(kept))


# ---------------------------------------------------------------------------
# Validity and the two orders of the subsequence forcing
# ---------------------------------------------------------------------------


def _witnesses_exist(
    u: ToyUniverse,
    levels: list[Ordinal],
    lo: Ordinal | None,
    hi: Ordinal,
    within: OrdinalSet | None = None,
) -> bool:
    """Greedy check for an increasing tuple with the given o-values in
    (lo, hi), drawn from `within` (default: the whole ground)."""
    floor = lo
    for xi in levels:
        if within is None:
            cand = (
                least_in_level(xi, ZERO)
                if floor is None
                else least_in_level(xi, floor.successor())
            )
            if not (cand < hi):
                return False
        else:
            cand = (
                within.min_in_level(xi)
                if floor is None
                else within.min_in_level_above(xi, floor)
            )
            if cand is None or not (cand < hi):
                return False
        floor = cand
    return True


def validate_I(q: ICondition) -> list[str]:
    """All violations of the subsequence-condition shape."""
    u, I = q.universe, q.index_set
    out: list[str] = []
    if not q.blocks:
        return ["condition has no blocks"]
    chain = index_chain(q, I)
    prev_kappa: Ordinal | None = None
    prev_idx = ZERO
    for i, b in enumerate(q.blocks, start=1):
        tag = f"block {i} (kappa={b.kappa})"
        is_top = i == len(q.blocks)
        if prev_kappa is not None and b.kappa <= prev_kappa:
            out.append(f"{tag}: kappas not increasing")
        if b.kappa > u.lambda0:
            out.append(f"{tag}: point beyond the ground set")
            prev_kappa = b.kappa
            continue
        if is_top:
            if u.o(b.kappa).is_zero:
                out.append(f"{tag}: top block needs positive limit order")
            if b.measure_set is None:
                out.append(f"{tag}: top block needs a measure set")
            else:
                out.extend(_set_violations(u, b, prev_kappa, tag))
            break
        c = chain[i - 1]
        if c is None:
            out.append(f"{tag}: index recursion undefined (N/A)")
            prev_kappa = b.kappa
            continue
        if I.in_succ(c):
            if b.measure_set is not None:
                out.append(f"{tag}: successor-position block must be bare (2.a.i)")
            pred = I.clause_pred(c)
            if pred is None:
                out.append(f"{tag}: predecessor of {c} unattained in the index set")
            elif pred != prev_idx:
                out.append(
                    f"{tag}: predecessor linkage fails (2.a.ii): "
                    f"pred({c})={pred} but previous index is {prev_idx}"
                )
            else:
                exps = cnf_difference(pred, c)
                if not _witnesses_exist(u, exps[:-1], prev_kappa, b.kappa):
                    out.append(f"{tag}: no stratum witness tuple (2.a.iii)")
        else:
            if b.measure_set is None:
                out.append(f"{tag}: limit-position block needs a measure set (2.b.i)")
            else:
                out.extend(_set_violations(u, b, prev_kappa, tag))
            want = add(prev_idx, omega_power(u.o(b.kappa)))
            if want != c:
                out.append(
                    f"{tag}: gap equation fails (2.b.ii): "
                    f"{prev_idx} + w^{u.o(b.kappa)} = {want} != {c}"
                )
        prev_kappa = b.kappa
        prev_idx = c
    return out


def _set_violations(
    u: ToyUniverse, b: Block, prev_kappa: Ordinal | None, tag: str
) -> list[str]:
    out = []
    B = b.measure_set
    if B.restrict_below(b.kappa) != B:
        out.append(f"{tag}: measure set not below its point")
    if prev_kappa is not None:
        low = B.min_element()
        if low is not None and low <= prev_kappa:
            out.append(f"{tag}: min of measure set not above previous point")
    if not u.is_large_all(B, b.kappa):
        out.append(f"{tag}: measure set not large at every index")
    elif u.star_closure(B, b.kappa) != B:
        out.append(f"{tag}: measure set not in stratified (star-closed) form")
    return out


def leq_I(p: ICondition, q: ICondition) -> bool:
    """Order of the subsequence forcing: q extends p."""
    _check_compatible(p, q)
    if p.top.kappa != q.top.kappa:
        return False
    if not q.top.measure_set.difference(p.top.measure_set).is_empty():
        return False
    u, I = p.universe, p.index_set
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
    chain = index_chain(q, I)
    for j, qb in enumerate(q.blocks[:-1]):
        if j in matched_set:
            continue
        enclosing = next(
            (p.blocks[r] for r, mj in enumerate(matched) if mj > j), p.top
        )
        B = enclosing.measure_set
        if B is None or qb.kappa not in B:
            return False
        c = chain[j]
        if c is None:
            return False
        prev_kappa = q.blocks[j - 1].kappa if j >= 1 else None
        prev_idx = chain[j - 1] if j >= 1 else ZERO
        if I.in_succ(c):
            if prev_idx is None:
                return False
            exps = cnf_difference(prev_idx, c)
            if not _witnesses_exist(u, exps[:-1], prev_kappa, qb.kappa, within=B):
                return False
        else:
            if qb.measure_set is None:
                return False
            allowed = B.restrict_below(qb.kappa)
            if not qb.measure_set.difference(allowed).is_empty():
                return False
    return True


def leq_I_star(p: ICondition, q: ICondition) -> bool:
    return len(p.blocks) == len(q.blocks) and leq_I(p, q)


# ---------------------------------------------------------------------------
# The dense set D and densification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DFailure:
    """Maximal failing projected block, the violated clause, and the repair."""

    block_index: int
    coordinate: Ordinal
    clause: int  # 1 = limit linkage, 2 = successor linkage
    repair: Ordinal | None


def in_D(p: MagidorCondition, I: IndexSet) -> DFailure | None:
    """None when p is correctly linked; otherwise the maximal failure."""
    coords = [gamma_of(p, i) for i in range(1, len(p.blocks))]
    failure: DFailure | None = None
    prev_proj = ZERO
    for i in range(1, len(p.blocks)):
        c = coords[i - 1]
        if c not in I:
            continue
        before = coords[i - 2] if i >= 2 else ZERO
        if I.in_lim(c):
            if prev_proj != before:
                repair = I.min_in_open(before, c)
                failure = DFailure(i, c, 1, repair)
        else:
            pred = I.clause_pred(c)
            if pred is None:
                failure = DFailure(i, c, 2, None)
            elif prev_proj != pred:
                failure = DFailure(i, c, 2, pred)
        prev_proj = c
    return failure


def densify(p: MagidorCondition, I: IndexSet) -> MagidorCondition:
    """Extend p into the correctly-linked dense set.

    Repairs the maximal failure each pass: a limit-linkage failure unveils
    the least index-set element below the failing coordinate, a successor
    failure unveils the predecessor; the failing coordinate must strictly
    decrease between passes.
    """
    cur = p
    prev_measure: Ordinal | None = None
    for _ in range(DENSIFY_CAP):
        failure = in_D(cur, I)
        if failure is None:
            return cur
        if prev_measure is not None and compare(failure.coordinate, prev_measure) >= 0:
            raise NonTermination(
                f"failing coordinate did not decrease: {failure.coordinate}"
            )
        prev_measure = failure.coordinate
        if failure.repair is None:
            raise RepairImpossible(
                f"no repair coordinate for the failure at block {failure.block_index}"
            )
        xtype = unveil_type(cur, failure.repair)
        try:
            cur, _ = extend_minimal(cur, xtype)
        except WitnessUnavailable as err:
            raise RepairImpossible(str(err)) from err
    raise NonTermination(f"densification did not stabilize in {DENSIFY_CAP} passes")


# ---------------------------------------------------------------------------
# The projection lemma: onto, lift, correctness of the computed indices
# ---------------------------------------------------------------------------


def _canonical_attached_set(
    within: OrdinalSet | None, floor: Ordinal | None, point: Ordinal
) -> OrdinalSet:
    """The canonical large set at a point: the inherited interval above the
    last inserted witness (the whole open interval when unconstrained)."""
    base = (
        OrdinalSet.interval(ZERO, point)
        if within is None
        else within.restrict_below(point)
    )
    if floor is not None:
        base = base.restrict_above(floor)
    return base


def onto_construct(q: ICondition) -> MagidorCondition:
    """A correctly-linked preimage of q under the projection."""
    problems = validate_I(q)
    if problems:
        raise LargenessViolated("; ".join(problems))
    u, I = q.universe, q.index_set
    chain = index_chain(q, I)
    new_blocks: list[Block] = []
    prev_kappa: Ordinal | None = None
    prev_idx = ZERO
    for i, b in enumerate(q.blocks[:-1], start=1):
        c = chain[i - 1]
        floor = prev_kappa
        if I.in_succ(c):
            exps = cnf_difference(prev_idx, c)
            for xi in exps[:-1]:
                w = (
                    least_in_level(xi, ZERO)
                    if floor is None
                    else least_in_level(xi, floor.successor())
                )
                if not (w < b.kappa):
                    raise WitnessUnavailable(
                        f"no level-{xi} witness below {b.kappa} above {floor}"
                    )
                if u.o(w).is_zero:
                    new_blocks.append(Block(w))
                else:
                    new_blocks.append(Block(w, _canonical_attached_set(None, floor, w)))
                floor = w
            if u.o(b.kappa).is_zero:
                new_blocks.append(Block(b.kappa))
            else:
                new_blocks.append(
                    Block(b.kappa, _canonical_attached_set(None, floor, b.kappa))
                )
        else:
            new_blocks.append(b)
        prev_kappa = b.kappa
        prev_idx = c
    new_blocks.append(q.top)
    out = MagidorCondition(u, tuple(new_blocks))
    bad = validate(out)
    if bad:
        raise WitnessUnavailable("; ".join(bad))
    assert pi(out, I) == q, "projection of the construction differs from the input"
    assert in_D(out, I) is None
    return out


def lift(p: MagidorCondition, q: ICondition) -> MagidorCondition:
    """Some p' extending p with pi(p') = q, for q extending pi(p)."""
    I = q.index_set
    if p.universe != q.universe:
        raise UniverseMismatch("conditions live over different universes")
    base = pi(p, I)
    if not leq_I(base, q):
        raise NotAnExtension("q does not extend the projection of p")
    u = p.universe
    base_kappas = {b.kappa for b in base.blocks[:-1]}
    chain = index_chain(q, I)
    inserted: dict[Ordinal, tuple[Block, Ordinal | None, Ordinal | None]] = {}
    for j, qb in enumerate(q.blocks[:-1]):
        if qb.kappa in base_kappas:
            continue
        prev_idx = chain[j - 1] if j >= 1 else ZERO
        inserted[qb.kappa] = (qb, prev_idx, chain[j])
    # Merge q's new blocks (plus stratum witnesses for successor positions)
    # into p, drawing sets from the enclosing p-block.
    q_sets = {b.kappa: b.measure_set for b in q.blocks[:-1]}
    new_blocks: list[Block] = []
    pending = sorted(inserted)
    prev_point: Ordinal | None = None
    for pb in p.blocks:
        while pending and pending[0] < pb.kappa:
            kappa = pending.pop(0)
            _, prev_idx, c = inserted[kappa]
            enclosing = pb if pb.measure_set is not None else None
            if enclosing is None or kappa not in enclosing.measure_set:
                raise WitnessUnavailable(
                    f"inserted point {kappa} is not admissible below {pb.kappa}"
                )
            B = enclosing.measure_set
            if I.in_succ(c):
                exps = cnf_difference(prev_idx, c)
                for xi in exps[:-1]:
                    w = (
                        B.min_in_level(xi)
                        if prev_point is None
                        else B.min_in_level_above(xi, prev_point)
                    )
                    if w is None or not (w < kappa):
                        raise WitnessUnavailable(
                            f"no level-{xi} witness below {kappa} in the block set"
                        )
                    if u.o(w).is_zero:
                        new_blocks.append(Block(w))
                    else:
                        new_blocks.append(
                            Block(w, _canonical_attached_set(B, prev_point, w))
                        )
                    prev_point = w
                if u.o(kappa).is_zero:
                    new_blocks.append(Block(kappa))
                else:
                    new_blocks.append(
                        Block(kappa, _canonical_attached_set(B, prev_point, kappa))
                    )
            else:
                new_blocks.append(Block(kappa, q_sets[kappa]))
            prev_point = kappa
        # The p-block itself; matched projected blocks adopt q's sets at
        # limit positions, and the top adopts q's top set.
        if pb is p.top:
            new_blocks.append(Block(pb.kappa, q.top.measure_set))
        elif pb.kappa in q_sets and q_sets[pb.kappa] is not None:
            new_blocks.append(Block(pb.kappa, q_sets[pb.kappa]))
        else:
            if pb.measure_set is not None and prev_point is not None:
                trimmed = pb.measure_set.restrict_above(prev_point)
                new_blocks.append(Block(pb.kappa, trimmed))
            else:
                new_blocks.append(pb)
        prev_point = pb.kappa
    out = MagidorCondition(u, tuple(new_blocks))
    bad = validate(out)
    if bad:
        raise WitnessUnavailable("; ".join(bad))
    if not leq(p, out):
        raise WitnessUnavailable("lift does not extend the base condition")
    got = pi(out, I)
    if got != q:
        raise WitnessUnavailable("projection of the lift differs from the target")
    return out


def correct_computation_check(p: MagidorCondition, I: IndexSet) -> bool:
    """gamma and the index recursion agree on every projected block."""
    if in_D(p, I) is not None:
        return False
    proj = pi(p, I)
    chain = index_chain(proj, I)
    indices = _projected_indices(p, I)
    for j, i in enumerate(indices):
        if chain[j] is None or chain[j] != gamma_of(p, i):
            return False
    return True


# ---------------------------------------------------------------------------
# Club refinement and quotient membership
# ---------------------------------------------------------------------------


def refine_to_clubs(roots: list[Ordinal], cstar: OrdinalSet) -> list[Ordinal]:
    """Extend the fence until the set is empty or unbounded in every gap.

    `roots` must be strictly increasing; the last entry is the top bound.
    The set must be closed below its supremum.
    """
    if not roots or any(b <= a for a, b in zip(roots, roots[1:])):
        raise ValueError("roots must be strictly increasing and nonempty")
    s = cstar.sup()
    if s is not None:
        limits = cstar.closure_points(roots[-1]).restrict_below(s[0])
        if not limits.difference(cstar).is_empty():
            raise ValueError("the set is not closed below its supremum")
    fence = list(roots)
    prev_bad_top: Ordinal | None = None
    for _ in range(CLUB_REFINE_CAP):
        bad_i = None
        for i in range(len(fence), 0, -1):
            lo = fence[i - 2] if i >= 2 else ZERO
            hi = fence[i - 1]
            seg = cstar.restrict_above(lo).restrict_below(hi)
            if seg.is_empty():
                continue
            sup = seg.sup()
            if sup[0] == hi:
                continue
            bad_i = i
            break
        if bad_i is None:
            return fence
        lo = fence[bad_i - 2] if bad_i >= 2 else ZERO
        hi = fence[bad_i - 1]
        if prev_bad_top is not None and compare(hi, prev_bad_top) >= 0:
            raise NonTermination("maximal bad interval did not move down")
        prev_bad_top = hi
        seg = cstar.restrict_above(lo).restrict_below(hi)
        sup_val, attained = seg.sup()
        if not attained:
            raise ValueError("segment supremum unattained; the set is not closed")
        acc = lo
        addition: list[Ordinal] = []
        for e in cnf_difference(lo, sup_val):
            acc = add(acc, omega_power(e))
            addition.append(acc)
        fence = fence[: bad_i - 1] + addition + fence[bad_i - 1 :]
    raise NonTermination(f"club refinement did not stabilize in {CLUB_REFINE_CAP} passes")


def _succ_gap_candidates(I: IndexSet, lo: Ordinal, hi: Ordinal) -> list[Ordinal]:
    """Successor-position members of I in (lo, hi) whose predecessor gap can
    demand witnesses: first members of the index-set pieces (interior
    consecutive members differ by a single power and demand nothing)."""
    out = []
    window = I.points.restrict_above(lo).restrict_below(hi)
    for p in window.pieces:
        m = OrdinalSet((p,)).min_element()
        if m is not None and I.in_succ(m):
            out.append(m)
    return out


def quotient_member(p: MagidorCondition, witness) -> bool:
    """Whether the projection of p joins the simulated subsequence filter.

    `witness` is a canonical sequence restricted to the index set (see the
    generic module); membership follows the reconstruction clauses.
    """
    from .generic import CanonicalSequence

    assert isinstance(witness, CanonicalSequence)
    if witness.restriction is None:
        raise ValueError("quotient membership needs a restricted sequence")
    I = IndexSet(witness.restriction)
    u = p.universe
    q = pi(p, I)
    if validate_I(q):
        return False
    chain = index_chain(q, I)
    # (a) every projected block sits at its own coordinate
    for j, b in enumerate(q.blocks[:-1]):
        if chain[j] is None or chain[j] != b.kappa:
            return False
    # (b) members of the restricted sequence fall into the block sets;
    # intervals are open with the virtual zero block below everything
    prev: Ordinal | None = None
    for b in q.blocks:
        lo = prev if prev is not None else ZERO
        seg = I.points.restrict_above(lo).restrict_below(b.kappa)
        if b.measure_set is None:
            if not seg.is_empty():
                return False
        else:
            if not seg.difference(b.measure_set).is_empty():
                return False
        prev = b.kappa
    # (c) successor members with composite gaps have stratum witnesses in
    # the enclosing block set
    prev = None
    for b in q.blocks:
        if b.measure_set is not None:
            lo = prev if prev is not None else ZERO
            for cand in _succ_gap_candidates(I, lo, b.kappa):
                pred = I.clause_pred(cand)
                if pred is None:
                    return False
                exps = cnf_difference(pred, cand)
                if not _witnesses_exist(
                    u, exps[:-1], pred, cand, within=b.measure_set
                ):
                    return False
        prev = b.kappa
    return True
