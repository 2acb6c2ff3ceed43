"""Hereditary Cantor-normal-form ordinals below epsilon_0.

An ordinal is a finite sum  w^e1*c1 + ... + w^ek*ck  with strictly
decreasing exponents (themselves ordinals) and positive integer
coefficients.  The empty sum is 0.  Values are immutable and canonical:
two equal ordinals are structurally identical.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

from .errors import DifferenceUndefined, ParseError

__all__ = [
    "Ordinal",
    "ZERO",
    "ONE",
    "OMEGA",
    "omega_power",
    "compare",
    "add",
    "left_subtract",
    "cnf_difference",
    "limit_order",
    "classify",
    "parse_ordinal",
    "format_ordinal",
    "ordinal_enumeration",
]


@dataclass(frozen=True)
class Ordinal:
    """CNF ordinal: tuple of (exponent, coefficient) terms, exponents descending."""

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        for i, (e, c) in enumerate(self.terms):
            if c < 1:
                raise ValueError("coefficients must be >= 1")
            if i > 0 and compare(self.terms[i - 1][0], e) <= 0:
                raise ValueError("exponents must be strictly decreasing")

    # Comparisons delegate to compare() so Ordinals sort naturally.
    def __lt__(self, other: "Ordinal") -> bool:
        return compare(self, other) < 0

    def __le__(self, other: "Ordinal") -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: "Ordinal") -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: "Ordinal") -> bool:
        return compare(self, other) >= 0

    def __add__(self, other: "Ordinal") -> "Ordinal":
        return add(self, other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"

    def __hash__(self) -> int:  # cached: ordinals are hashed constantly
        try:
            return object.__getattribute__(self, "_hash")
        except AttributeError:
            h = hash(self.terms)
            object.__setattr__(self, "_hash", h)
            return h

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    def as_int(self) -> int:
        """The integer value of a finite ordinal."""
        if self.is_zero:
            return 0
        if not self.is_finite:
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1]

    def successor(self) -> "Ordinal":
        return add(self, ONE)

    def predecessor(self) -> "Ordinal":
        """The unique b with b+1 = self; only successors have one."""
        if not self.is_successor:
            raise ValueError(f"{self} is not a successor")
        e, c = self.terms[-1]
        head = self.terms[:-1]
        if c > 1:
            return Ordinal(head + ((e, c - 1),))
        return Ordinal(head)


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return Ordinal(((ZERO, n),)) if n else ZERO


def omega_power(e: Ordinal) -> Ordinal:
    """w^e as a single-term ordinal (w^0 = 1)."""
    return Ordinal(((e, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """-1, 0, 1 for a<b, a=b, a>b; lexicographic on (exponent, coefficient)."""
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) != len(b.terms):
        return -1 if len(a.terms) < len(b.terms) else 1
    return 0


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum: terms of a below b's leading exponent are absorbed."""
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    lead = b.terms[0][0]
    kept = [t for t in a.terms if compare(t[0], lead) > 0]
    merged = list(b.terms)
    if len(kept) < len(a.terms) and a.terms[len(kept)][0] == lead:
        merged[0] = (lead, a.terms[len(kept)][1] + b.terms[0][1])
    return Ordinal(tuple(kept) + tuple(merged))


def mul_nat(a: Ordinal, n: int) -> Ordinal:
    """a*n for a natural multiplier (right factor)."""
    if n < 0:
        raise ValueError("multiplier must be >= 0")
    if n == 0 or a.is_zero:
        return ZERO
    # (w^e*c + rest)*n = w^e*(c*(n-1)) + a  for n >= 1.
    e, c = a.terms[0]
    if len(a.terms) == 1:
        return Ordinal(((e, c * n),))
    return add(Ordinal(((e, c * (n - 1)),)), a)


def mul_omega(a: Ordinal) -> Ordinal:
    """a*w = w^(leading exponent + 1) for a > 0."""
    if a.is_zero:
        return ZERO
    return omega_power(add(a.terms[0][0], ONE))


def left_subtract(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique d with a + d = b, for a <= b."""
    cmp = compare(a, b)
    if cmp > 0:
        raise DifferenceUndefined(f"{a} > {b}")
    if cmp == 0:
        return ZERO
    for i, (ea, ca) in enumerate(a.terms):
        eb, cb = b.terms[i]
        c = compare(ea, eb)
        if c < 0:
            # a's remaining terms are absorbed by b's i-th term.
            return Ordinal(b.terms[i:])
        if c == 0 and ca != cb:
            # b continues with a larger coefficient at the same exponent.
            return Ordinal(((eb, cb - ca),) + b.terms[i + 1 :])
        if c > 0:  # pragma: no cover - impossible for a < b
            raise DifferenceUndefined(f"{a} > {b}")
    return Ordinal(b.terms[len(a.terms) :])


def cnf_difference(a: Ordinal, b: Ordinal) -> list[Ordinal]:
    """Exponents nu_1 >= ... >= nu_m with a + w^nu_1 + ... + w^nu_m = b.

    Coefficients are expanded into repeated exponents; empty for a = b.
    """
    d = left_subtract(a, b)
    out: list[Ordinal] = []
    for e, c in d.terms:
        out.extend([e] * c)
    return out


def limit_order(a: Ordinal) -> Ordinal:
    """o_L(a): the final CNF exponent; 0 exactly for successors."""
    if a.is_zero:
        raise ValueError("limit_order undefined for 0")
    return a.terms[-1][0]


def classify(a: Ordinal) -> str:
    """'zero' | 'successor' | 'limit'."""
    if a.is_zero:
        return "zero"
    return "successor" if a.is_successor else "limit"


# ---------------------------------------------------------------------------
# Literal grammar
#
#   ordinal := term ("+" term)* | "0"
#   term    := "w" "^" atom ("*" nat)? | "w" ("*" nat)? | nat
#   atom    := nat | "w" | "(" ordinal ")"
#
# Non-canonical literals (ascending or duplicate exponents) are accepted;
# the value is the left-to-right ordinal sum of the terms.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|(\^)|(\*)|(\+)|(\()|(\)))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, column=self.pos + 1)

    def peek(self) -> str | None:
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            return None
        return m.group(m.lastindex or 0)

    def take(self) -> str | None:
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(m.lastindex or 0)

    def expect(self, token: str):
        got = self.take()
        if got != token:
            self.error(f"expected {token!r}, found {got!r}")

    def at_end(self) -> bool:
        return self.pos >= len(self.text) or self.text[self.pos :].isspace()

    def ordinal(self) -> Ordinal:
        value = self.term()
        while self.peek() == "+":
            self.take()
            value = add(value, self.term())
        return value

    def term(self) -> Ordinal:
        tok = self.take()
        if tok is None:
            self.error("expected a term")
        if tok.isdigit():
            return from_int(int(tok))
        if tok != "w":
            self.error(f"unexpected token {tok!r}")
        exponent = ONE
        if self.peek() == "^":
            self.take()
            exponent = self.atom()
        coeff = 1
        if self.peek() == "*":
            self.take()
            c = self.take()
            if c is None or not c.isdigit() or int(c) < 1:
                self.error("expected a nonzero coefficient after '*'")
            coeff = int(c)
        return mul_nat(omega_power(exponent), coeff)

    def atom(self) -> Ordinal:
        tok = self.peek()
        if tok == "(":
            self.take()
            inner = self.ordinal()
            self.expect(")")
            return inner
        tok = self.take()
        if tok == "w":
            return OMEGA
        if tok is not None and tok.isdigit():
            return from_int(int(tok))
        self.error(f"expected an exponent atom, found {tok!r}")
        raise AssertionError  # unreachable


def parse_ordinal(text: str) -> Ordinal:
    p = _Parser(text)
    if p.at_end():
        p.error("empty ordinal literal")
    value = p.ordinal()
    if not p.at_end():
        p.error(f"trailing input: {text[p.pos:].strip()!r}")
    return value


def _format_atom(e: Ordinal) -> str:
    if e == OMEGA:
        return "w"
    if e.is_finite:
        return str(e.as_int())
    return f"({format_ordinal(e)})"


def format_ordinal(a: Ordinal) -> str:
    if a.is_zero:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero:
            parts.append(str(c))
        elif e == ONE:
            parts.append("w" if c == 1 else f"w*{c}")
        else:
            base = f"w^{_format_atom(e)}"
            parts.append(base if c == 1 else f"{base}*{c}")
    return " + ".join(parts)


@functools.lru_cache(maxsize=None)
def ordinal_enumeration(flat: int = 2000, nested: int = 100) -> tuple[Ordinal, ...]:
    """Frozen test enumeration: `flat` ordinals below w^w plus `nested` ones.

    The flat part walks term counts, exponents and coefficients in a fixed
    order; the nested part reuses small flat ordinals as exponents.
    """
    flat_pool: list[Ordinal] = []
    seen: set[Ordinal] = set()

    def emit(o: Ordinal, pool: list[Ordinal], cap: int) -> bool:
        if o not in seen:
            seen.add(o)
            pool.append(o)
        return len(pool) >= cap

    emit(ZERO, flat_pool, flat)
    coeffs = (1, 2, 3, 5)
    exps = [from_int(k) for k in range(7)]
    done = False
    for nterms in (1, 2, 3):
        if done:
            break
        for shape in _descending_tuples(exps, nterms):
            if done:
                break
            for cs in _coeff_tuples(coeffs, nterms):
                o = Ordinal(tuple((e, c) for e, c in zip(shape, cs)))
                if emit(o, flat_pool, flat):
                    done = True
                    break

    nested_pool: list[Ordinal] = []
    heads = [o for o in flat_pool[:40] if not o.is_zero and not o.is_finite]
    tails = flat_pool[:12]
    for head in heads:
        for c in (1, 2):
            for tail in tails:
                o = add(mul_nat(omega_power(head), c), tail)
                if o in seen:
                    continue
                seen.add(o)
                nested_pool.append(o)
                if len(nested_pool) >= nested:
                    return tuple(flat_pool) + tuple(nested_pool)
    return tuple(flat_pool) + tuple(nested_pool)


def _descending_tuples(exps: list[Ordinal], n: int):
    """Strictly descending n-tuples of exponents, largest-first order."""
    import itertools

    for combo in itertools.combinations(exps, n):
        yield tuple(sorted(combo, key=lambda o: o, reverse=True))


def _coeff_tuples(coeffs, n: int):
    import itertools

    return itertools.product(coeffs, repeat=n)
