from __future__ import annotations

import random

import pytest

from ordbench.errors import NotAnExtension
from ordbench.magidor import (
    Block,
    MagidorCondition,
    gamma_of,
    leq,
    leq_star,
    validate,
)
from ordbench.oset import OrdinalSet, parse_set
from ordbench.projection import (
    ICondition,
    IndexSet,
    densify,
    in_D,
    index_chain,
    index_of,
    leq_I,
    leq_I_star,
    lift,
    onto_construct,
    pi,
    correct_computation_check,
    quotient_member,
    refine_to_clubs,
    validate_I,
)
from ordbench.generic import CanonicalSequence
from ordbench.universe import ToyUniverse
from ordbench.ordinal import ZERO

from conftest import (
    canon_universe,
    canonical_condition,
    nat,
    o,
    random_condition,
    random_extension,
)


def iset(text: str) -> IndexSet:
    return IndexSet(parse_set(text))


# The paper's running example below w^2: I keeps 0 and everything from w on.
SEC41_I = iset("{0} u [w,w^2)")


def sec41_condition() -> MagidorCondition:
    u = canon_universe("w^2")
    return canonical_condition(u, [o("w")])


def test_index_set_classification():
    I = SEC41_I
    assert I.in_lim(ZERO)
    assert I.in_succ(o("w"))  # only 0 sits below it
    assert I.in_lim(o("w*2"))
    assert I.pred(o("w")) == ZERO
    assert I.clause_pred(o("w")) == ZERO
    J = iset("[w,w^2)")
    assert J.clause_pred(o("w")) == ZERO  # virtual zero below the minimum
    assert J.in_succ(o("w"))


def test_index_of_sec41():
    p = sec41_condition()
    assert index_of(p, 1, SEC41_I) == o("w")


def test_index_of_full_index_set_is_gamma(rng):
    u = canon_universe("w^3")
    I = IndexSet(u.ground())
    for _ in range(20):
        p = random_condition(u, rng)
        for i in range(1, len(p.blocks)):
            assert index_of(p, i, I) == gamma_of(p, i)


def test_index_of_na():
    u = canon_universe("w^2")
    p = canonical_condition(u, [o("w")])
    I = iset("{0} u {1}")
    assert index_of(p, 1, I) is None


def test_pi_sec41():
    p = sec41_condition()
    q = pi(p, SEC41_I)
    assert q.blocks[0] == Block(o("w"))  # stripped at a successor position
    assert q.blocks[1] == p.top
    assert validate_I(q) == []


def test_pi_full_index_set_keeps_everything(rng):
    u = canon_universe("w^3")
    I = IndexSet(u.ground())
    for _ in range(10):
        p = random_condition(u, rng)
        q = pi(p, I)
        assert tuple(q.blocks) == tuple(p.blocks)
        assert in_D(p, I) is None


# -- the two Section 4.2 counterexamples ------------------------------------

FIRST_I = iset("[0,w+1) u {w+2} u {w+3}").points.union(
    OrdinalSet.stratum_piece(o("w*2"), o("w^2"), nat(1))
)


def first_counterexample() -> tuple[MagidorCondition, IndexSet]:
    u = canon_universe("w^2")
    p = canonical_condition(u, [o("w"), o("w+1"), o("w*2")])
    return p, IndexSet(FIRST_I)


def second_counterexample() -> tuple[MagidorCondition, IndexSet]:
    u = canon_universe("w^2")
    p = canonical_condition(u, [o("w"), o("w*2"), o("w*3")])
    I = iset("[0,w+1) u {w+2} u {w+3} u (w*2,w^2)")
    return p, I


def test_in_D_first_counterexample():
    p, I = first_counterexample()
    failure = in_D(p, I)
    assert failure is not None
    assert failure.clause == 2
    assert failure.block_index == 3  # the block at coordinate w*2
    assert failure.coordinate == o("w*2")
    assert failure.repair == o("w+3")


def test_in_D_second_counterexample():
    p, I = second_counterexample()
    failure = in_D(p, I)
    assert failure is not None
    assert failure.clause == 1
    assert failure.coordinate == o("w*3")
    # gamma(t_i1) = w < w*2 = gamma(t_{i2-1}) is the reported mismatch
    assert gamma_of(p, failure.block_index - 1) == o("w*2")


def test_pi_first_counterexample():
    p, I = first_counterexample()
    q = pi(p, I)
    kappas = [b.kappa for b in q.blocks]
    assert kappas == [o("w"), o("w*2"), o("w^2")]
    assert q.blocks[0].measure_set is not None  # w is a limit position here
    assert q.blocks[1].measure_set is None  # w*2 is a successor position


def test_in_D_full_index_set_always_ok(rng):
    u = canon_universe("w^2")
    I = IndexSet(u.ground())
    for _ in range(10):
        assert in_D(random_condition(u, rng), I) is None


def test_densify_first_counterexample():
    p, I = first_counterexample()
    q = densify(p, I)
    assert in_D(q, I) is None
    assert leq(p, q)
    added = [b.kappa for b in q.blocks if b.kappa not in {b2.kappa for b2 in p.blocks}]
    assert added == [o("w+2"), o("w+3")]


def test_densify_second_counterexample():
    p, I = second_counterexample()
    q = densify(p, I)
    assert in_D(q, I) is None and leq(p, q)
    kappas = [b.kappa for b in q.blocks]
    assert o("w*2+1") in kappas  # the least index-set element above w*2
    assert o("w+3") in kappas


def test_densify_idempotent_on_D():
    p, I = first_counterexample()
    q = densify(p, I)
    assert densify(q, I) == q


def test_validate_I_violations():
    u = canon_universe("w^2")
    I = SEC41_I
    # successor-position block carrying a set: violation 2.a.i
    bad = ICondition(
        u,
        I,
        (
            Block(o("w"), OrdinalSet.interval(ZERO, o("w"))),
            Block(u.lambda0, u.ground().restrict_above(o("w"))),
        ),
    )
    assert any("2.a.i" in v for v in validate_I(bad))
    # broken predecessor linkage: the second block unveils the least
    # zero-order index w*4+1, whose predecessor w*4 was never unveiled.
    I2 = iset("{0} u {w} u {w*2} u {w*3} u [w*4, w^2)")
    bad2 = ICondition(
        u,
        I2,
        (
            Block(o("w")),
            Block(o("w*3+1")),
            Block(u.lambda0, u.ground().restrict_above(o("w*3+1"))),
        ),
    )
    assert index_chain(bad2, I2) == [o("w"), o("w*4+1")]
    assert any("2.a.ii" in v for v in validate_I(bad2))


def test_leq_I_reflexive_and_extension():
    p, I = first_counterexample()
    q = pi(densify(p, I), I)
    assert validate_I(q) == []
    assert leq_I(q, q) and leq_I_star(q, q)


def test_order_preservation(rng):
    from conftest import gen_projection_condition

    for lam in ("w^2", "w^3"):
        u = canon_universe(lam)
        for _ in range(15):
            I = random_iset(u, rng)
            pd = gen_projection_condition(u, I, rng)
            qd = densify(random_extension(pd, rng), I)
            assert leq(pd, qd)
            assert leq_I(pi(pd, I), pi(qd, I))
            if leq_star(pd, qd):
                assert leq_I_star(pi(pd, I), pi(qd, I))


def test_order_preservation_gap_regression():
    """The literal dense-set clauses admit a pair on which the projected
    order fails: p names coordinates inside the unviewed predecessor gap
    of min(I), so its matched blocks absorb the stratum witnesses that
    the subsequence order demands from the measure set."""
    u = canon_universe("w^2")
    I = iset("[w*2,w*5+5)")
    p = canonical_condition(u, [o("w*2"), o("w*2+1")])  # coordinates w, w+1
    assert in_D(p, I) is None  # vacuously: nothing projects
    q = densify(random_like_extension(p), I)
    assert leq(p, q) and in_D(q, I) is None
    assert not leq_I(pi(p, I), pi(q, I))


def random_like_extension(p: MagidorCondition) -> MagidorCondition:
    """Deterministic extension unveiling min(I)'s coordinate for the gap
    regression: one level-1 point into the top gap."""
    from ordbench.magidor import ExtensionType, extend_minimal

    q, _ = extend_minimal(
        p, ExtensionType(((), (), (nat(1),)))
    )
    return q


def random_iset(u: ToyUniverse, rng: random.Random) -> IndexSet:
    """A few random intervals and singletons below lambda0, closed below
    the sup (index sets of closed subsequences are closed)."""
    from conftest import small_ordinals_below

    dom = small_ordinals_below(u.lambda0, 120)
    pieces = []
    for _ in range(rng.randrange(1, 4)):
        a, b = sorted(rng.sample(dom, 2))
        pieces.append((a, b))
    s = OrdinalSet.empty()
    for a, b in pieces:
        s = s.union(OrdinalSet.interval(a, b))
    if rng.random() < 0.5:
        s = s.union(OrdinalSet.singleton(rng.choice(dom)))
    if s.is_empty():
        s = OrdinalSet.interval(ZERO, u.lambda0)
    s = s.restrict_below(u.lambda0)
    sup = s.sup()
    if sup is not None:
        s = s.union(s.closure_points(u.lambda0).restrict_below(sup[0]))
    return IndexSet(s.restrict_below(u.lambda0))


def test_index_invariance_under_extension(rng):
    # matched blocks keep their computed indices across the order
    from conftest import gen_projection_condition

    u = canon_universe("w^3")
    for _ in range(15):
        I = random_iset(u, rng)
        pd = gen_projection_condition(u, I, rng)
        qd = densify(random_extension(pd, rng), I)
        a, b = pi(pd, I), pi(qd, I)
        if not leq_I(a, b):
            continue
        ca, cb = index_chain(a, I), index_chain(b, I)
        positions = {blk.kappa: j for j, blk in enumerate(b.blocks[:-1])}
        for i, blk in enumerate(a.blocks[:-1]):
            assert ca[i] == cb[positions[blk.kappa]]


def test_onto_sec41():
    u = canon_universe("w^2")
    q = ICondition(
        u,
        SEC41_I,
        (Block(o("w")), Block(u.lambda0, u.ground().restrict_above(o("w")))),
    )
    assert validate_I(q) == []
    p = onto_construct(q)
    assert validate(p) == []
    assert pi(p, SEC41_I) == q
    assert p.blocks[0].measure_set is not None  # canonical large set attached


def test_onto_single_top():
    u = canon_universe("w^2")
    q = ICondition(u, SEC41_I, (Block(u.lambda0, u.ground()),))
    p = onto_construct(q)
    assert tuple(p.blocks) == tuple(q.blocks)


def test_onto_inserts_witness_points():
    # A successor position at distance w+1 from its predecessor needs one
    # zero-order witness.
    u = canon_universe("w^2")
    I = iset("{w} u {w*2+1} u [w*3,w^2)")
    # chain: block of order 1 unveils w; bare block of order 0 unveils w*2+1
    q = ICondition(
        u,
        I,
        (
            Block(o("w")),
            Block(o("w*2+1")),
            Block(u.lambda0, u.ground().restrict_above(o("w*2+1"))),
        ),
    )
    assert validate_I(q) == []
    p = onto_construct(q)
    assert pi(p, I) == q
    inserted = [b.kappa for b in p.blocks if b.kappa not in {o("w"), o("w*2+1"), u.lambda0}]
    assert len(inserted) == 1  # one level-1 witness for the w-power gap


def test_onto_roundtrip_random(rng):
    u = canon_universe("w^3")
    for _ in range(25):
        I = random_iset(u, rng)
        p = densify(random_condition(u, rng), I)
        q = pi(p, I)
        assert validate_I(q) == []
        p2 = onto_construct(q)
        assert pi(p2, I) == q
        assert in_D(p2, I) is None


def test_lift_identity():
    p, I = first_counterexample()
    pd = densify(p, I)
    q = pi(pd, I)
    assert lift(pd, q) == pd


def test_lift_random(rng):
    from conftest import gen_projection_condition

    u = canon_universe("w^3")
    for _ in range(25):
        I = random_iset(u, rng)
        p = gen_projection_condition(u, I, rng)
        p2 = densify(random_extension(p, rng), I)
        q = pi(p2, I)
        lifted = lift(p, q)
        assert leq(p, lifted)
        assert pi(lifted, I) == q


def test_lift_requires_related_target():
    u = canon_universe("w^2")
    I = SEC41_I
    p = densify(canonical_condition(u, [o("w")]), I)
    other = ICondition(
        u, I, (Block(u.lambda0, u.ground().restrict_above(o("w*2"))),)
    )
    with pytest.raises(NotAnExtension):
        lift(p, other)


def test_correct_computation(rng):
    p, I = first_counterexample()
    pd = densify(p, I)
    assert correct_computation_check(pd, I)
    assert index_of(pi(sec41_condition(), SEC41_I), 1, SEC41_I) == o("w")
    u = canon_universe("w^3")
    for _ in range(15):
        J = random_iset(u, rng)
        pd = densify(random_condition(u, rng), J)
        assert correct_computation_check(pd, J)


def test_refine_to_clubs_already_fine():
    roots = [o("w"), o("w^2")]
    cstar = parse_set("[0,w] u [w+2,w^2)")
    assert refine_to_clubs(roots, cstar) == roots


def test_refine_to_clubs_paper_example():
    # Two stray points in the gap between the first two roots, replayed
    # with the countable surrogate ground w^3*2.
    roots = [o("w^3"), o("w^3+w^2"), o("w^3+w^2*2"), o("w^3*2")]
    cstar = parse_set("[0,w^3] u {w^3+w+2} u {w^3+w+3} u (w^3+w^2*2, w^3*2)")
    got = refine_to_clubs(roots, cstar)
    assert o("w^3+w+2") in got and o("w^3+w+3") in got
    assert got[0] == o("w^3") and got[-1] == o("w^3*2")
    # postcondition: every gap is empty or unbounded
    for lo, hi in zip([ZERO] + got, got):
        seg = cstar.restrict_above(lo).restrict_below(hi)
        assert seg.is_empty() or seg.sup()[0] == hi


def test_refine_to_clubs_random(rng):
    u = canon_universe("w^3")
    from conftest import small_ordinals_below

    dom = small_ordinals_below(u.lambda0, 150)
    for _ in range(20):
        pts = sorted(rng.sample(dom, rng.randrange(2, 6)))
        cstar = OrdinalSet.empty()
        for a in pts:
            cstar = cstar.union(OrdinalSet.singleton(a))
        roots = [u.lambda0]
        got = refine_to_clubs(roots, cstar)
        for lo, hi in zip([ZERO] + got, got):
            seg = cstar.restrict_above(lo).restrict_below(hi)
            assert seg.is_empty() or seg.sup()[0] == hi


def test_quotient_member():
    u = canon_universe("w^2")
    I = SEC41_I
    seq = CanonicalSequence(u.lambda0, I.points)
    # canonical: block at value w = its own coordinate
    p = canonical_condition(u, [o("w")])
    pd = densify(p, I)
    assert quotient_member(pd, seq)
    # misplaced: the block's kappa is not the coordinate it unveils
    bad = canonical_condition(u, [o("w*2")])
    assert not quotient_member(bad, seq)


def test_quotient_witness_demands():
    # A successor member of I whose predecessor gap spans several powers
    # demands stratum witnesses inside the enclosing block set.
    u = canon_universe("w^2")
    I = parse_set("{5} u {w*2+3} u [w*3,w^2)")
    seq = CanonicalSequence(u.lambda0, I)
    from ordbench.projection import _succ_gap_candidates

    cands = _succ_gap_candidates(IndexSet(I), ZERO, o("w^2"))
    assert o("w*2+3") in cands
    # diff(5, w*2+3) = <1,1,0,0,0>: the gap needs two limit points and two
    # successors inside the top set between the two sequence values
    rich = MagidorCondition(u, (Block(u.lambda0, u.ground()),))
    assert validate(rich) == []
    assert quotient_member(rich, seq)
    poor = MagidorCondition(
        u,
        (
            Block(
                u.lambda0,
                u.ground().difference(
                    OrdinalSet.stratum_piece(ZERO, o("w*2+3"), nat(1))
                ),
            ),
        ),
    )
    assert validate(poor) == []
    assert o("w*2+3") in poor.top.measure_set  # the member itself is kept
    assert not quotient_member(poor, seq)  # its gap witnesses are gone


def test_quotient_member_random(rng):
    u = canon_universe("w^2")
    I = SEC41_I
    seq = CanonicalSequence(u.lambda0, I.points)
    hits = 0
    for _ in range(20):
        p = random_condition(u, rng)
        got = quotient_member(p, seq)
        q = pi(p, I)
        chain = index_chain(q, I)
        coherent = validate_I(q) == [] and all(
            c is not None and c == b.kappa for c, b in zip(chain, q.blocks[:-1])
        )
        if got:
            hits += 1
            assert coherent
    assert hits >= 1
