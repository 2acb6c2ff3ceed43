"""Finite interval-union sets of ordinals, with optional stratum filters.

An OrdinalSet is a sorted union of pieces [lo, hi).  A piece may carry a
level filter: a frozenset of allowed limit-orders, so that the piece
denotes {g in [lo, hi) | o_L(g) in levels} (with o_L(0) read as 0).
Plain pieces (levels=None) work anywhere below epsilon_0; filtered pieces
are confined to regions below w^w, where the set of feasible levels of an
interval is finite and enumerable.  All operations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, UnsupportedRegion
from .ordinal import (
    ONE,
    ZERO,
    Ordinal,
    add,
    compare,
    from_int,
    left_subtract,
    mul_omega,
    omega_power,
    parse_ordinal,
)

__all__ = [
    "OrdinalSet",
    "Piece",
    "olim",
    "least_in_level",
    "level_sup_below",
    "format_set",
    "parse_set",
]


def olim(g: Ordinal) -> Ordinal:
    """o_L with the universe convention o(0) = 0."""
    return ZERO if g.is_zero else g.terms[-1][0]


def least_in_level(xi: Ordinal, start: Ordinal) -> Ordinal:
    """Least g >= start with olim(g) = xi."""
    if olim(start) == xi:
        return start
    if xi.is_zero:
        # start is a limit here; its successor is the next level-0 point.
        return start.successor()
    # Split start as H + w^xi*c + T with H's exponents > xi, T's < xi.
    head: list[tuple[Ordinal, int]] = []
    coeff = 0
    tail = False
    for e, c in start.terms:
        cmp = compare(e, xi)
        if cmp > 0:
            head.append((e, c))
        elif cmp == 0:
            coeff = c
        else:
            tail = True
    h = Ordinal(tuple(head))
    if tail:
        return add(h, Ordinal(((xi, coeff + 1),)))
    return add(h, Ordinal(((xi, coeff + 1),))) if coeff else add(h, omega_power(xi))


def level_sup_below(xi: Ordinal, bound: Ordinal) -> tuple[Ordinal, bool] | None:
    """(sup, attained) of {g < bound | olim(g) = xi}; None when empty."""
    b = bound
    while True:
        if b.is_zero:
            return (ZERO, True) if (xi.is_zero and bound > ZERO) else None
        lo = olim(b)
        cmp = compare(lo, xi)
        if cmp > 0:
            return b, False
        if cmp == 0:
            e, c = b.terms[-1]
            if c > 1:
                return Ordinal(b.terms[:-1] + ((e, c - 1),)), True
            head = Ordinal(b.terms[:-1])
            if xi.is_zero:
                return (head, False) if head else (ZERO, True)
            b = head
            continue
        # lo < xi: strip trailing terms with exponents below xi.
        head_terms = tuple(t for t in b.terms if compare(t[0], xi) >= 0)
        h = Ordinal(head_terms)
        if head_terms and head_terms[-1][0] == xi:
            return h, True
        b = h


def feasible_levels(lo: Ordinal, hi: Ordinal) -> list[Ordinal]:
    """All xi with a level-xi point in [lo, hi); requires hi < w^w."""
    if hi <= lo:
        return []
    if hi.terms and not hi.terms[0][0].is_finite:
        raise UnsupportedRegion(f"stratified algebra needs a bound below w^w, got {hi}")
    cap = hi.terms[0][0].as_int() + 1 if hi.terms else 0
    out = []
    for k in range(cap + 1):
        xi = from_int(k)
        if least_in_level(xi, lo) < hi:
            out.append(xi)
    return out


@dataclass(frozen=True)
class Piece:
    lo: Ordinal
    hi: Ordinal
    levels: frozenset[Ordinal] | None = None  # None = all levels

    def is_empty(self) -> bool:
        if self.hi <= self.lo:
            return True
        if self.levels is None:
            return False
        return not any(least_in_level(xi, self.lo) < self.hi for xi in self.levels)

    def contains(self, g: Ordinal) -> bool:
        if not (self.lo <= g < self.hi):
            return False
        return self.levels is None or olim(g) in self.levels

    def min_element(self) -> Ordinal | None:
        if self.hi <= self.lo:
            return None
        if self.levels is None:
            return self.lo
        best: Ordinal | None = None
        for xi in self.levels:
            cand = least_in_level(xi, self.lo)
            if cand < self.hi and (best is None or cand < best):
                best = cand
        return best

    def sup(self) -> tuple[Ordinal, bool] | None:
        """(sup, attained) over the piece; None when empty."""
        if self.hi <= self.lo:
            return None
        if self.levels is None:
            if self.hi.is_successor:
                return self.hi.predecessor(), True
            return self.hi, False
        best: tuple[Ordinal, bool] | None = None
        for xi in self.levels:
            s = level_sup_below(xi, self.hi)
            if s is None:
                continue
            val, att = s
            if att:
                if val < self.lo:
                    continue
                cand = (val, True)
            else:
                if self.lo >= val:
                    continue
                cand = (val, False)
            if best is None or cand[0] > best[0]:
                best = cand
            elif cand[0] == best[0] and cand[1]:
                best = (best[0], True)
        return best


class OrdinalSet:
    """Canonical finite union of (optionally level-filtered) intervals."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: tuple[Piece, ...] = ()):
        object.__setattr__(self, "pieces", _normalize(tuple(pieces)))

    def __setattr__(self, name, value):  # immutability
        raise AttributeError("OrdinalSet is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def empty() -> "OrdinalSet":
        return OrdinalSet(())

    @staticmethod
    def interval(lo: Ordinal, hi: Ordinal) -> "OrdinalSet":
        return OrdinalSet((Piece(lo, hi),))

    @staticmethod
    def singleton(g: Ordinal) -> "OrdinalSet":
        return OrdinalSet((Piece(g, g.successor()),))

    @staticmethod
    def of(*points: Ordinal) -> "OrdinalSet":
        return OrdinalSet(tuple(Piece(g, g.successor()) for g in points))

    @staticmethod
    def stratum_piece(lo: Ordinal, hi: Ordinal, xi: Ordinal) -> "OrdinalSet":
        return OrdinalSet((Piece(lo, hi, frozenset((xi,))),))

    # -- basics ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        """Semantic equality.  Normalization pins boundaries so equal sets
        usually have identical piece lists, but a junction between two
        filtered pieces can realize its distinguishing level exactly at a
        movable boundary; the fallback compares the two differences."""
        if not isinstance(other, OrdinalSet):
            return NotImplemented
        if self.pieces == other.pieces:
            return True
        return (
            self.difference(other).is_empty() and other.difference(self).is_empty()
        )

    def __hash__(self):
        # A semantic invariant, so hashing agrees with semantic equality.
        return hash((self.min_element(), self.sup()))

    def __bool__(self) -> bool:
        return bool(self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def __contains__(self, g: Ordinal) -> bool:
        return any(p.contains(g) for p in self.pieces)

    def __repr__(self):
        return f"OrdinalSet({format_set(self)!r})"

    def is_plain(self) -> bool:
        return all(p.levels is None for p in self.pieces)

    # -- boolean algebra ---------------------------------------------------
    def union(self, other: "OrdinalSet") -> "OrdinalSet":
        return _combine(self, other, "union")

    def intersect(self, other: "OrdinalSet") -> "OrdinalSet":
        return _combine(self, other, "inter")

    def difference(self, other: "OrdinalSet") -> "OrdinalSet":
        return _combine(self, other, "diff")

    def restrict_below(self, b: Ordinal) -> "OrdinalSet":
        """self ∩ [0, b)."""
        out = []
        for p in self.pieces:
            if p.lo >= b:
                break
            out.append(Piece(p.lo, min(p.hi, b), p.levels))
        return OrdinalSet(tuple(out))

    def restrict_above(self, b: Ordinal) -> "OrdinalSet":
        """self ∩ (b, ∞)."""
        cut = b.successor()
        out = []
        for p in self.pieces:
            if p.hi <= cut:
                continue
            out.append(Piece(max(p.lo, cut), p.hi, p.levels))
        return OrdinalSet(tuple(out))

    # -- queries -----------------------------------------------------------
    def min_element(self) -> Ordinal | None:
        for p in self.pieces:
            m = p.min_element()
            if m is not None:
                return m
        return None

    def min_above(self, floor: Ordinal) -> Ordinal | None:
        """Least element strictly above floor."""
        return self.restrict_above(floor).min_element()

    def min_in_level_above(self, xi: Ordinal, floor: Ordinal) -> Ordinal | None:
        """Least element of level xi strictly above floor."""
        cut = floor.successor()
        for p in self.pieces:
            if p.hi <= cut:
                continue
            if p.levels is not None and xi not in p.levels:
                continue
            cand = least_in_level(xi, max(p.lo, cut))
            if cand < p.hi:
                return cand
        return None

    def min_in_level(self, xi: Ordinal) -> Ordinal | None:
        """Least element of level xi."""
        for p in self.pieces:
            if p.levels is not None and xi not in p.levels:
                continue
            cand = least_in_level(xi, p.lo)
            if cand < p.hi:
                return cand
        return None

    def sup(self) -> tuple[Ordinal, bool] | None:
        """(sup, attained) over the whole set; None when empty."""
        best: tuple[Ordinal, bool] | None = None
        for p in reversed(self.pieces):
            s = p.sup()
            if s is not None:
                best = s
                break
        return best

    def max_element(self) -> Ordinal | None:
        s = self.sup()
        return s[0] if s is not None and s[1] else None

    def is_bounded_below(self, b: Ordinal) -> bool:
        """True iff sup(self ∩ [0,b)) < b (the tail-largeness test)."""
        s = self.restrict_below(b).sup()
        return s is None or s[0] < b

    def is_cofinal_in(self, b: Ordinal) -> bool:
        return not self.is_bounded_below(b)

    def closure_points(self, top: Ordinal) -> "OrdinalSet":
        """{a <= top | a > 0, sup(self ∩ a) = a}; needs the w^w level cap."""
        out = []
        for p in self.pieces:
            if p.hi <= p.lo:
                continue
            span_lo, span_hi = p.lo.successor(), p.hi.successor()
            if p.levels is not None and not p.levels:
                continue
            floor = ZERO if p.levels is None else min(p.levels)
            allowed = frozenset(
                xi for xi in feasible_levels(span_lo, span_hi) if compare(xi, floor) > 0
            )
            out.append(Piece(span_lo, span_hi, allowed))
        return OrdinalSet(tuple(out)).restrict_below(top.successor())

    def enumerate(self, limit: int) -> list[Ordinal]:
        """First `limit` elements in increasing order."""
        out: list[Ordinal] = []
        cur: Ordinal | None = None
        while len(out) < limit:
            cur = self.min_element() if cur is None else self.min_above(cur)
            if cur is None:
                break
            out.append(cur)
        return out

    def otp(self) -> Ordinal:
        """Order type of the set."""
        total = ZERO
        for p in self.pieces:
            total = add(total, _piece_otp(p))
        return total


# ---------------------------------------------------------------------------
# Order types
# ---------------------------------------------------------------------------


def _piece_otp(p: Piece) -> Ordinal:
    if p.levels is None:
        return left_subtract(p.lo, p.hi)
    return left_subtract(
        _levelset_otp_below(p.lo, p.levels), _levelset_otp_below(p.hi, p.levels)
    )


def _levelset_otp_below(y: Ordinal, levels: frozenset[Ordinal]) -> Ordinal:
    """otp({g < y | olim(g) in levels}), counting the point 0 when allowed."""
    zero_in = ONE if (ZERO in levels and not y.is_zero) else ZERO
    return add(zero_in, _g_positive(y, levels))


def _g_positive(y: Ordinal, levels: frozenset[Ordinal]) -> Ordinal:
    """otp({0 < g < y | o_L(g) in levels})."""
    if y.is_zero or y == ONE:
        return ZERO
    total = ZERO
    marked_last = False
    for e, c in y.terms:
        block = _g_omega_power(e, levels)
        mark = e in levels
        for _ in range(c):
            total = add(total, block)
            if mark:
                total = add(total, ONE)
        marked_last = mark
    if marked_last:
        total = total.predecessor()  # the final mark counted y itself
    return total


def _g_omega_power(e: Ordinal, levels: frozenset[Ordinal]) -> Ordinal:
    """otp({0 < g < w^e | o_L(g) in levels})."""
    if e.is_zero:
        return ZERO
    if e.is_successor:
        d = e.predecessor()
        step = add(_g_omega_power(d, levels), ONE if d in levels else ZERO)
        return mul_omega(step) if step else ZERO
    raise UnsupportedRegion(f"otp of a filtered piece with limit exponent {e}")


# ---------------------------------------------------------------------------
# Normalization and boolean combination
# ---------------------------------------------------------------------------


def _reduce_piece(p: Piece) -> Piece:
    if p.levels is None:
        return p
    feas = set(feasible_levels(p.lo, p.hi))
    kept = frozenset(xi for xi in p.levels if xi in feas)
    if kept == feas:
        return Piece(p.lo, p.hi, None)
    return Piece(p.lo, p.hi, kept)


def _merge_once(pieces: list[Piece]) -> list[Piece]:
    out: list[Piece] = []
    for p in pieces:
        if out and out[-1].hi == p.lo and out[-1].levels == p.levels:
            out[-1] = Piece(out[-1].lo, p.hi, p.levels)
        else:
            out.append(p)
    return out


def _least_distinguishing_point(
    lo: Ordinal, hi: Ordinal, fa: frozenset | None, fb: frozenset | None
) -> Ordinal | None:
    """Least point of [lo, hi) whose level separates the two filters."""
    feas = feasible_levels(lo, hi)
    if fa is None:
        delta = [xi for xi in feas if fb is not None and xi not in fb]
    elif fb is None:
        delta = [xi for xi in feas if xi not in fa]
    else:
        delta = [xi for xi in feas if (xi in fa) != (xi in fb)]
    best: Ordinal | None = None
    for xi in delta:
        cand = least_in_level(xi, lo)
        if cand < hi and (best is None or cand < best):
            best = cand
    return best


def _push_junctions(pieces: list[Piece]) -> list[Piece]:
    """Pin adjacent-piece boundaries: the earlier piece absorbs the prefix
    of the later one on which the two filters agree, so equal sets get
    identical junction points regardless of construction history."""
    if not pieces:
        return pieces
    out = [pieces[0]]
    for p in pieces[1:]:
        prev = out[-1]
        if prev.hi == p.lo and prev.levels != p.levels:
            e = _least_distinguishing_point(p.lo, p.hi, prev.levels, p.levels)
            if e is None:
                e = p.hi
            if e > p.lo:
                out[-1] = Piece(prev.lo, e, prev.levels)
                if e < p.hi:
                    out.append(Piece(e, p.hi, p.levels))
                continue
        out.append(p)
    return out


def _normalize(pieces: tuple[Piece, ...]) -> tuple[Piece, ...]:
    live = [p for p in pieces if not p.is_empty()]
    if not live:
        return ()
    bounds: set[Ordinal] = set()
    for p in live:
        bounds.add(p.lo)
        bounds.add(p.hi)
    cuts = sorted(bounds)
    spans: list[Piece] = []
    for lo, hi in zip(cuts, cuts[1:]):
        covering = [p for p in live if p.lo <= lo and hi <= p.hi]
        if not covering:
            continue
        if any(p.levels is None for p in covering):
            levels = None
        else:
            merged: set[Ordinal] = set()
            for p in covering:
                merged |= p.levels  # type: ignore[arg-type]
            levels = frozenset(merged)
        piece = _reduce_piece(Piece(lo, hi, levels))
        if not piece.is_empty():
            spans.append(piece)
    # Pin junctions, merge, then re-reduce (merging widens feasibility),
    # to a fixpoint.
    cur = spans
    while True:
        nxt = [_reduce_piece(p) for p in _merge_once(_push_junctions(cur))]
        if nxt == cur:
            return tuple(nxt)
        cur = nxt


def _combine(a: OrdinalSet, b: OrdinalSet, op: str) -> OrdinalSet:
    bounds: set[Ordinal] = set()
    for p in list(a.pieces) + list(b.pieces):
        bounds.add(p.lo)
        bounds.add(p.hi)
    cuts = sorted(bounds)
    out: list[Piece] = []
    for lo, hi in zip(cuts, cuts[1:]):
        la = _span_levels(a, lo, hi)
        lb = _span_levels(b, lo, hi)
        lvl = _level_op(la, lb, op, lo, hi)
        if lvl == "none":
            continue
        out.append(Piece(lo, hi, lvl))  # type: ignore[arg-type]
    return OrdinalSet(tuple(out))


def _span_levels(s: OrdinalSet, lo: Ordinal, hi: Ordinal):
    """Coverage of an elementary span: 'none', None (all) or a frozenset."""
    for p in s.pieces:
        if p.lo <= lo and hi <= p.hi:
            return p.levels
    return "none"


def _level_op(la, lb, op: str, lo: Ordinal, hi: Ordinal):
    if op == "union":
        if la == "none":
            return lb
        if lb == "none":
            return la
        if la is None or lb is None:
            return None
        return frozenset(la | lb)
    if op == "inter":
        if la == "none" or lb == "none":
            return "none"
        if la is None:
            return lb
        if lb is None:
            return la
        return frozenset(la & lb)
    # difference
    if la == "none":
        return "none"
    if lb == "none":
        return la
    if lb is None:
        return "none"
    if la is None:
        la = frozenset(feasible_levels(lo, hi))
    return frozenset(la - lb)


# ---------------------------------------------------------------------------
# Literals:  "{0} u [w,w^2)"  and the JSON list form  ["0", ["w","w^2"]]
# ---------------------------------------------------------------------------


def format_set(s: OrdinalSet) -> str:
    if not s.pieces:
        return "{}"
    parts = []
    for p in s.pieces:
        if p.levels is not None:
            inner = ",".join(str(x) for x in sorted(p.levels))
            parts.append(f"[{p.lo},{p.hi})@{{{inner}}}")
        elif p.hi == p.lo.successor():
            parts.append(f"{{{p.lo}}}")
        else:
            parts.append(f"[{p.lo},{p.hi})")
    return " u ".join(parts)


def parse_set(text: str) -> OrdinalSet:
    text = text.strip()
    if text in ("{}", "empty"):
        return OrdinalSet.empty()
    pieces: list[Piece] = []
    for chunk in _split_on_u(text):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError("empty set piece")
        levels: frozenset[Ordinal] | None = None
        if "@" in chunk:
            chunk, _, lvl = chunk.partition("@")
            chunk = chunk.strip()
            lvl = lvl.strip()
            if not (lvl.startswith("{") and lvl.endswith("}")):
                raise ParseError(f"bad level filter {lvl!r}")
            levels = frozenset(
                parse_ordinal(x) for x in lvl[1:-1].split(",") if x.strip()
            )
        if chunk.startswith("{") and chunk.endswith("}"):
            g = parse_ordinal(chunk[1:-1])
            pieces.append(Piece(g, g.successor(), levels))
            continue
        if len(chunk) < 2 or chunk[0] not in "[(" or chunk[-1] not in ")]":
            raise ParseError(f"bad set piece {chunk!r}")
        body = chunk[1:-1]
        depth = 0
        split = -1
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                split = i
                break
        if split < 0:
            raise ParseError(f"expected comma in {chunk!r}")
        lo = parse_ordinal(body[:split])
        hi = parse_ordinal(body[split + 1 :])
        if chunk[0] == "(":
            lo = lo.successor()
        if chunk[-1] == "]":
            hi = hi.successor()
        pieces.append(Piece(lo, hi, levels))
    return OrdinalSet(tuple(pieces))


def _split_on_u(text: str) -> list[str]:
    parts = []
    depth = 0
    cur: list[str] = []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "u" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts
