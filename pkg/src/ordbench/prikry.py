"""Tree forcing over finite toy ultrafilter assignments: conditions,
orders, dense normalization, iterated-limit ultrafilters, the modified
diagonal intersection, P-point surrogates and derived sequences.

Toy ultrafilters are principal: a set is large when it contains the
assigned core.  Projections send each point weakly downward, standing in
for the map that represents the ground in the ultrapower.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BranchTooShort, PruneBrokeLargeness

__all__ = [
    "UltraAssignment",
    "ToyUltraStructure",
    "TreeCondition",
    "Derivation",
    "validate_tree",
    "leq_tree",
    "leq_tree_star",
    "normalize_dense",
    "validate_sequence_condition",
    "modified_diag",
    "classical_diag",
    "limit_ultrafilter_member",
    "project_ultrafilter",
    "is_p_point",
    "apply_derivation",
    "derivation_profile",
]

Node = tuple[int, ...]


@dataclass(frozen=True)
class UltraAssignment:
    """Core of a principal toy ultrafilter, with its downward projection."""

    core: frozenset[int]
    proj: tuple[tuple[int, int], ...] | None = None  # None = identity (normal)

    def pi(self, v: int) -> int:
        if self.proj is None:
            return v
        table = dict(self.proj)
        return table.get(v, v)

    def is_large(self, s) -> bool:
        return self.core <= set(s)


@dataclass(frozen=True)
class ToyUltraStructure:
    """Ground set with per-node, per-level and single ultrafilter tables.

    With tail_default, a node without an explicit entry gets the core of
    points above its last element (intersected with the default core when
    one is given): the finite presentation of an assignment whose measure
    sets concentrate above the node, as the dense normalization assumes.
    """

    ground: tuple[int, ...]
    nodes: dict[Node, UltraAssignment] = field(default_factory=dict)
    levels: dict[int, UltraAssignment] = field(default_factory=dict)
    default: UltraAssignment | None = None
    tail_default: bool = False

    def __post_init__(self):
        if list(self.ground) != sorted(set(self.ground)):
            raise ValueError("ground must be strictly increasing")
        gset = set(self.ground)
        for ua in list(self.nodes.values()) + list(self.levels.values()) + (
            [self.default] if self.default else []
        ):
            if not ua.core or not ua.core <= gset:
                raise ValueError("cores must be nonempty subsets of the ground")
            if ua.proj is not None:
                for v, w in ua.proj:
                    if w > v:
                        raise ValueError("projections must be weakly decreasing")

    def __hash__(self):
        return hash((self.ground, tuple(sorted(self.nodes)), tuple(sorted(self.levels))))

    def _fallback(self) -> UltraAssignment:
        return self.default or UltraAssignment(frozenset(self.ground))

    def node_ultra(self, a: Node) -> UltraAssignment:
        a = tuple(a)
        got = self.nodes.get(a)
        if got is not None:
            return got
        base = self._fallback()
        if not self.tail_default or not a:
            return base
        # The core concentrates where both the point and its projection
        # clear the node, matching what dense normalization assumes.
        tail = frozenset(
            v for v in base.core if v > a[-1] and base.pi(v) > a[-1]
        )
        return UltraAssignment(tail, base.proj)

    def level_ultra(self, n: int) -> UltraAssignment:
        return self.levels.get(n, self._fallback())


@dataclass(frozen=True)
class TreeCondition:
    """Trunk plus successor sets, explicit to a declared depth.

    Beyond the explicit entries the successor set of a node defaults to the
    core of its ultrafilter, which is the unique finite presentation every
    check needs.
    """

    trunk: Node
    depth: int
    successors: dict[Node, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        for a in self.successors:
            if a[: len(self.trunk)] != self.trunk:
                raise ValueError(f"successor node {a} does not extend the trunk")

    def __hash__(self):
        return hash((self.trunk, self.depth, tuple(sorted(self.successors.items()))))

    def suc(self, u: ToyUltraStructure, a: Node) -> frozenset[int]:
        got = self.successors.get(tuple(a))
        if got is not None:
            return got
        return u.node_ultra(a).core


def validate_tree(t: TreeCondition, u: ToyUltraStructure) -> list[str]:
    out = []
    if list(t.trunk) != sorted(set(t.trunk)):
        out.append("trunk is not strictly increasing")
    gset = set(u.ground)
    for a, s in sorted(t.successors.items()):
        if not s <= gset:
            out.append(f"successor set at {a} leaves the ground")
        if not u.node_ultra(a).is_large(s):
            out.append(f"successor set at {a} misses its core")
    return out


def _comparison_nodes(s: TreeCondition, t: TreeCondition) -> set[Node]:
    nodes = {a for a in s.successors if a[: len(t.trunk)] == t.trunk[: len(a)]}
    nodes |= set(t.successors)
    nodes.add(t.trunk)
    return {a for a in nodes if len(a) >= len(t.trunk) or t.trunk[: len(a)] == a}


def leq_tree(s: TreeCondition, t: TreeCondition, u: ToyUltraStructure) -> bool:
    """t extends s: longer trunk through s's tree, smaller successor sets."""
    if t.trunk[: len(s.trunk)] != s.trunk:
        return False
    for i in range(len(s.trunk), len(t.trunk)):
        if t.trunk[i] not in s.suc(u, t.trunk[:i]):
            return False
    for a in _comparison_nodes(s, t):
        if len(a) < len(t.trunk):
            continue
        if a[: len(t.trunk)] != t.trunk:
            continue
        if not t.suc(u, a) <= s.suc(u, a):
            return False
    return True


def leq_tree_star(s: TreeCondition, t: TreeCondition, u: ToyUltraStructure) -> bool:
    return s.trunk == t.trunk and leq_tree(s, t, u)


def normalize_dense(t: TreeCondition, u: ToyUltraStructure) -> TreeCondition:
    """Prune successor sets so every branch satisfies the projection chain:
    each successor projects strictly above the node's last point."""
    new: dict[Node, frozenset[int]] = {}
    frontier: list[Node] = [t.trunk]
    for _ in range(t.depth):
        next_frontier: list[Node] = []
        for a in frontier:
            ua = u.node_ultra(a)
            floor = a[-1] if a else None
            kept = frozenset(
                v
                for v in t.suc(u, a)
                if floor is None or (ua.pi(v) > floor and v > floor)
            )
            if not ua.is_large(kept):
                raise PruneBrokeLargeness(
                    f"pruning at node {a} drops part of the core"
                )
            new[a] = kept
            next_frontier.extend(a + (v,) for v in kept)
        frontier = next_frontier
    return TreeCondition(t.trunk, t.depth, new)


def validate_sequence_condition(
    trunk: Node,
    sets,
    u: ToyUltraStructure,
    variant: str,
) -> list[str]:
    """Clause checks for the sequence-of-ultrafilters and single-ultrafilter
    forcings.

    For the omega-sequence variant, `sets` maps levels (1-based, above
    len(trunk)) to sets; the minimum clause is checked at every supplied
    level and reported per level.  For the single variant, `sets` is one
    set.
    """
    out = []
    gset = set(u.ground)
    if list(trunk) != sorted(set(trunk)):
        out.append("trunk is not strictly increasing")
    if variant == "single":
        ua = u.level_ultra(0)
        for j, i in itertools.combinations(range(len(trunk)), 2):
            if not trunk[j] < ua.pi(trunk[i]):
                out.append(
                    f"cross inequality fails: {trunk[j]} !< pi({trunk[i]})"
                )
        A = set(sets)
        if not A <= gset:
            out.append("the set leaves the ground")
        if not ua.is_large(A):
            out.append("the set misses its core")
        if A and trunk and not ua.pi(min(A)) > max(trunk):
            out.append("min clause fails: pi(min(A)) <= max(trunk)")
        return out
    if variant != "omega_sequence":
        raise ValueError(f"unknown variant {variant!r}")
    for j, i in itertools.combinations(range(1, len(trunk) + 1), 2):
        pi_i = u.level_ultra(i).pi
        if not trunk[j - 1] < pi_i(trunk[i - 1]):
            out.append(
                f"cross inequality fails at levels {j}<{i}: "
                f"{trunk[j - 1]} !< pi_{i}({trunk[i - 1]})"
            )
    for n in sorted(sets):
        A = set(sets[n])
        if n <= len(trunk):
            out.append(f"level {n}: set supplied at a trunk level")
            continue
        ua = u.level_ultra(n)
        if not A <= gset:
            out.append(f"level {n}: set leaves the ground")
        if not ua.is_large(A):
            out.append(f"level {n}: set misses its core")
        if A and trunk and not ua.pi(min(A)) > max(trunk):
            out.append(f"level {n}: min clause fails")
    return out


def modified_diag(u: ToyUltraStructure, family: dict[int, set], k: int) -> frozenset[int]:
    """{v | for all a < pi_k(v): v in A_a}."""
    pi = u.level_ultra(k).pi
    out = []
    for v in u.ground:
        bound = pi(v)
        try:
            if all(v in family[a] for a in range(bound)):
                out.append(v)
        except KeyError as err:
            raise ValueError(f"family not total: missing index {err}") from err
    return frozenset(out)


def classical_diag(u: ToyUltraStructure, family: dict[int, set]) -> frozenset[int]:
    """{v | for all a < v: v in A_a}."""
    out = []
    for v in u.ground:
        try:
            if all(v in family[a] for a in range(v)):
                out.append(v)
        except KeyError as err:
            raise ValueError(f"family not total: missing index {err}") from err
    return frozenset(out)


def _as_tuples(X, n: int) -> set[Node]:
    out = set()
    for x in X:
        t = (x,) if isinstance(x, int) else tuple(x)
        if len(t) != n:
            raise ValueError(f"{t} is not a {n}-tuple")
        if any(a >= b for a, b in zip(t, t[1:])):
            raise ValueError(f"{t} is not increasing")
        out.add(t)
    return out


def limit_ultrafilter_member(
    u: ToyUltraStructure, X, n: int = 2, prefix: Node = ()
) -> bool:
    """Iterated section test: X (increasing n-tuples) belongs to the n-fold
    limit of the node ultrafilters along the given prefix."""
    tuples = _as_tuples(X, n)
    if n == 1:
        return u.node_ultra(prefix).is_large({t[0] for t in tuples})
    passing = set()
    for v in u.ground:
        section = {t[1:] for t in tuples if t[0] == v}
        if limit_ultrafilter_member(u, section, n - 1, prefix + (v,)):
            passing.add(v)
    return u.node_ultra(prefix).is_large(passing)


def project_ultrafilter(u: ToyUltraStructure, F, n: int):
    """Membership test for the image of the n-fold limit under F."""

    def member(Y) -> bool:
        targets = set(Y)
        pre = [
            t
            for t in itertools.combinations(u.ground, n)
            if F(*t) in targets
        ]
        return limit_ultrafilter_member(u, pre, n)

    return member


def is_p_point(
    u: ToyUltraStructure,
    a: Node,
    fiber_bound: int,
    test_family,
) -> bool:
    """Every non-constant (mod the node ultrafilter) function in the family
    is fiber-bounded on a large set; with principal cores the core itself
    is the minimal large set."""
    ua = u.node_ultra(a)
    for f in test_family:
        get = f.get if hasattr(f, "get") else lambda v, _f=f: _f(v)
        values = {get(v) for v in ua.core}
        constant = any(
            ua.is_large({v for v in u.ground if get(v) == c}) for c in values
        )
        if constant:
            continue
        fibers: dict[int, int] = {}
        for v in ua.core:
            fibers[get(v)] = fibers.get(get(v), 0) + 1
        if any(c > fiber_bound for c in fibers.values()):
            return False
    return True


@dataclass(frozen=True)
class Derivation:
    """Non-decreasing arities with per-step functions on initial segments."""

    levels: tuple[int, ...]
    fns: tuple

    def __post_init__(self):
        if any(a > b for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("arities must be non-decreasing")
        if len(self.levels) != len(self.fns):
            raise ValueError("one function per arity")


def apply_derivation(d: Derivation, branch: Node) -> tuple:
    """alpha_k = F_k(branch restricted to the k-th arity)."""
    if d.levels and len(branch) < max(d.levels):
        raise BranchTooShort(
            f"branch of length {len(branch)} shorter than arity {max(d.levels)}"
        )
    out = []
    for n_k, f in zip(d.levels, d.fns):
        args = branch[:n_k]
        out.append(f[args] if hasattr(f, "__getitem__") else f(*args))
    return tuple(out)


def derivation_profile(d: Derivation) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Distinct arities in increasing order with their multiplicities."""
    distinct: list[int] = []
    counts: list[int] = []
    for n in d.levels:
        if distinct and distinct[-1] == n:
            counts[-1] += 1
        else:
            distinct.append(n)
            counts.append(1)
    return tuple(distinct), tuple(counts)
