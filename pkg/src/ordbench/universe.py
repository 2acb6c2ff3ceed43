"""Finitely presented toy universes.

A ToyUniverse is a limit ordinal ground set [0, lambda0) whose points
carry the limit order o(g) = o_L(g) (o(0) = 0), together with a principal
largeness oracle: a finite table of cores Core(beta, xi) defaulting to the
full stratum Y(xi) below beta.  A set is large at (beta, xi) when it
contains a tail of the core: Core(beta, xi) minus the set is bounded
strictly below beta.  Tail containment is what survives the constant
end-truncation the condition calculus performs; plain containment would
make every nontrivial condition invalid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ClosureDidNotStabilize
from .ordinal import ZERO, Ordinal, compare, from_int, omega_power
from .oset import OrdinalSet, least_in_level, olim

__all__ = ["ToyUniverse", "CoreKey", "STAR_CLOSURE_CAP"]

CoreKey = tuple[Ordinal, Ordinal]

STAR_CLOSURE_CAP = 64


@dataclass(frozen=True)
class ToyUniverse:
    """Ground order type, o-value bound, and core overrides."""

    lambda0: Ordinal
    delta0_bound: Ordinal
    cores: dict[CoreKey, OrdinalSet] = field(default_factory=dict)

    def __post_init__(self):
        if not self.lambda0.is_limit:
            raise ValueError(f"lambda0 must be a limit ordinal, got {self.lambda0}")
        if compare(self.max_o_value(), self.delta0_bound) >= 0:
            raise ValueError(
                f"delta0_bound {self.delta0_bound} does not dominate the "
                f"o-values below {self.lambda0}"
            )
        for (beta, xi), core in self.cores.items():
            if compare(xi, self.o(beta)) >= 0:
                raise ValueError(f"core index {xi} not below o({beta})")
            if not core.difference(self.stratum(xi, beta)).is_empty():
                raise ValueError(
                    f"core at ({beta},{xi}) is not a subset of Y({xi}) below {beta}"
                )

    def __hash__(self):
        return hash((self.lambda0, self.delta0_bound, tuple(sorted(self.cores))))

    def __eq__(self, other):
        return (
            isinstance(other, ToyUniverse)
            and self.lambda0 == other.lambda0
            and self.delta0_bound == other.delta0_bound
            and self.cores == other.cores
        )

    # -- o-function ----------------------------------------------------------
    def o(self, g: Ordinal) -> Ordinal:
        """o(g) = o_L(g) with o(0) = 0; defined for g <= lambda0."""
        if g > self.lambda0:
            raise ValueError(f"{g} is beyond the ground set")
        return olim(g)

    def max_o_value(self) -> Ordinal:
        """Largest o-value over [0, lambda0] (sup when unattained)."""
        lead = self.lambda0.terms[0][0]
        best = self.o(self.lambda0)
        cand = lead
        if omega_power(lead) == self.lambda0:
            cand = lead.predecessor() if lead.is_successor else lead
        return best if compare(best, cand) >= 0 else cand

    def ground(self) -> OrdinalSet:
        return OrdinalSet.interval(ZERO, self.lambda0)

    # -- strata ----------------------------------------------------------------
    def stratum(self, xi: Ordinal, below: Ordinal) -> OrdinalSet:
        """Y(xi) ∩ [0, below) = {g < below | o(g) = xi}."""
        if compare(xi, self.delta0_bound) >= 0:
            raise ValueError(f"stratum index {xi} not below delta0_bound")
        return OrdinalSet.stratum_piece(ZERO, below, xi)

    def core(self, beta: Ordinal, xi: Ordinal) -> OrdinalSet | None:
        """Override core at (beta, xi), or None when the default applies."""
        return self.cores.get((beta, xi))

    # -- largeness ---------------------------------------------------------------
    def is_large(self, B: OrdinalSet, beta: Ordinal, xi: Ordinal) -> bool:
        """Tail containment: Core(beta,xi) ∖ B is bounded strictly below beta."""
        if compare(xi, self.o(beta)) >= 0:
            raise ValueError(f"xi={xi} not below o({beta})={self.o(beta)}")
        override = self.core(beta, xi)
        if override is not None:
            return override.restrict_below(beta).difference(B).is_bounded_below(beta)
        # Default core Y(xi) ∩ beta, tested without materializing the stratum:
        # the misses are cofinal iff the complement of B has a piece reaching
        # beta that admits level-xi points (xi < o(beta) makes them cofinal).
        comp = OrdinalSet.interval(ZERO, beta).difference(B)
        for p in comp.pieces:
            if p.hi != beta:
                continue
            if p.levels is not None and xi not in p.levels:
                continue
            if least_in_level(xi, p.lo) < beta:
                return False
        return True

    def is_large_all(self, B: OrdinalSet, beta: Ordinal) -> bool:
        """Large at (beta, xi) for every xi < o(beta)."""
        ob = self.o(beta)
        if ob.is_zero:
            return True
        over = {xi for (b, xi) in self.cores if b == beta and compare(xi, ob) < 0}
        if any(not self.is_large(B, beta, xi) for xi in over):
            return False
        comp = OrdinalSet.interval(ZERO, beta).difference(B)
        for p in comp.pieces:
            if p.hi != beta:
                continue
            if p.levels is None:
                # Every level below o(beta) is missed cofinally; the override
                # table is finite, so some non-overridden level fails unless
                # the (finitely many) levels below o(beta) are all overridden.
                k = 0
                while compare(from_int(k), ob) < 0:
                    if from_int(k) not in over:
                        return False
                    k += 1
                    if k > len(over) + 1:
                        break
            else:
                for xi in p.levels:
                    if (
                        compare(xi, ob) < 0
                        and xi not in over
                        and least_in_level(xi, p.lo) < beta
                    ):
                        return False
        return True

    # -- star closure ----------------------------------------------------------
    def star_closure(self, B: OrdinalSet, beta: Ordinal) -> OrdinalSet:
        """Greatest fixpoint of the pointwise sub-largeness filter.

        Keeps a in B when o(a) = 0 or B ∩ a is large at (a, xi) for every
        xi < o(a); iterates to stabilization (cap STAR_CLOSURE_CAP).
        """
        cur = B.restrict_below(beta)
        override_points = sorted({b for (b, _) in self.cores if b < beta})
        for _ in range(STAR_CLOSURE_CAP):
            fail = self._failing_points(cur, beta, override_points)
            if fail.is_empty():
                return cur
            cur = cur.difference(fail)
        raise ClosureDidNotStabilize(f"no fixpoint within {STAR_CLOSURE_CAP} passes")

    def _failing_points(
        self, cur: OrdinalSet, beta: Ordinal, override_points: list[Ordinal]
    ) -> OrdinalSet:
        comp = OrdinalSet.interval(ZERO, beta).difference(cur)
        if cur.is_plain() and comp.is_plain():
            # Only right endpoints of complement pieces can both lie in cur
            # and have the complement cofinal below them.
            bad = [
                p.hi
                for p in comp.pieces
                if p.hi.is_limit and p.hi in cur and p.hi not in override_points
            ]
            fail = OrdinalSet.of(*bad) if bad else OrdinalSet.empty()
        else:
            fail = comp.closure_points(beta).intersect(cur)
            if override_points:
                fail = fail.difference(OrdinalSet.of(*override_points))
        for b in override_points:
            if b in cur and not self.o(b).is_zero:
                if not self.is_large_all(cur.restrict_below(b), b):
                    fail = fail.union(OrdinalSet.singleton(b))
        return fail

    def stratify(self, B: OrdinalSet, beta: Ordinal) -> dict[Ordinal, OrdinalSet]:
        """Per-stratum pieces Y(xi) ∩ B★ for xi < o(beta)."""
        star = self.star_closure(B, beta)
        ob = self.o(beta)
        if not ob.is_finite:
            raise ValueError(f"stratify needs a finite o({beta})")
        return {
            from_int(k): star.intersect(self.stratum(from_int(k), beta))
            for k in range(ob.as_int())
        }
