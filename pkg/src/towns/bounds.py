"""Upper-bound oracle for the extremal size of (a,b)-towns mod k.

Each rule is a guarded statement: it either fires with an exact bound or
reports that it does not apply.  The oracle evaluates every rule for every
prime divisor p of k (a town mod k is also a town mod p), and keeps the minimum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Optional

from .algebra import is_prime, prime_divisors


@dataclass(frozen=True)
class Bound:
    """A numeric bound with the symbolic form it was derived from.

    ``base``/``exponent`` are set for exponential bounds, so comparisons stay
    exact integer arithmetic.
    """

    value: int
    expression: str
    base: int | None = None
    exponent: int | None = None

    @classmethod
    def power(cls, base: int, exponent: int, expression: str) -> "Bound":
        return cls(base**exponent, expression, base, exponent)


@dataclass(frozen=True)
class FiredRule:
    id: str
    anchor: str
    p: int
    bound: Bound
    tight: bool = False

    def to_dict(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "p": self.p, "value": self.bound.value, "expr": self.bound.expression}


@dataclass(frozen=True)
class BoundResult:
    value: int
    expression: str
    tight: bool
    rules: tuple[FiredRule, ...] = field(default_factory=tuple)

    @property
    def binding(self) -> list[FiredRule]:
        """Fired rules that achieve the minimum."""
        return [r for r in self.rules if r.bound.value == self.value]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "expr": self.expression,
            "tight": self.tight,
            "rules": [r.to_dict() for r in self.rules],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


class NotApplicable(Exception):
    """A bound statement whose hypotheses fail for the given parameters."""


# -- individual statements ----------------------------------------------------


def modular_rw(n: int, p: int, s: int, t: int, residues: Iterable[int]) -> int:
    """C(n, s) for families with sizes = t and pairwise intersections in L (|L| = s) mod p.

    Raises :class:`NotApplicable` when any hypothesis fails.
    """
    if not is_prime(p):
        raise NotApplicable(f"{p} is not prime")
    L = {x % p for x in residues}
    if len(L) != s:
        raise NotApplicable(f"|L| = {len(L)} residues mod p, expected s = {s}")
    if not 1 <= s <= p - 1:
        raise NotApplicable(f"need 1 <= s <= p-1, got s={s}, p={p}")
    if t < 0 or t % p in L:
        raise NotApplicable(f"t = {t} lies in L mod {p}")
    if s + t > n:
        raise NotApplicable(f"s + t = {s + t} > n = {n}")
    return comb(n, s)


def _nd(p: int, *xs: int) -> bool:
    """p divides none of xs."""
    return all(x % p for x in xs)


def n_minus_1_direct(a: int, b: int, n: int, p: int) -> bool:
    """n-1 bound via the vector u = (1,...,1, n a^-1 alpha) (i) or e = (0,...,0,1) (ii)."""
    first = _nd(p, a, b, a - b, n, a * a - n * b - a + b)
    second = a % p == 0 and _nd(p, b, n - 1)
    return first or second


def n_minus_1_substituted(a: int, b: int, n: int, p: int) -> bool:
    """The direct n-1 conditions applied to the complement family's parameters."""
    return n_minus_1_direct(n - a, n - 2 * a + b, n, p)


def two_one_schedule(a: int, b: int, n: int, p: int) -> Optional[Bound]:
    """Bound for (2,1)-towns mod p: n if n = 3, n-1 if n is not 0 or 3, silent otherwise."""
    if p < 3 or a % p != 2 or b % p != 1:
        return None
    if n % p == 3 % p:
        return Bound(n, "n")
    if n % p != 0:
        return Bound(n - 1, "n−1")
    return None


def eventown_bound(a: int, b: int, n: int, p: int) -> Optional[Bound]:
    """2^floor(n/2) for (0,0) and 2^floor((n+1)/2) for (m,m), m nonzero mod p."""
    if (a - b) % p:
        return None
    if a % p == 0:
        return Bound.power(2, n // 2, "2^⌊n/2⌋")
    return Bound.power(2, (n + 1) // 2, "2^⌊(n+1)/2⌋")


# The mod-3 rows whose extremal size is known exactly, indexed by n mod 3.
TIGHT_MOD3: dict[tuple[int, int], tuple[int, int, int]] = {
    (0, 2): (-2, 0, -1),
    (1, 0): (0, 0, 0),
    (2, 1): (0, -1, -1),
}


def _offset_expr(off: int) -> str:
    return "n" if off == 0 else f"n−{-off}"


def mod3_table(a: int, b: int, n: int) -> Optional[Bound]:
    offsets = TIGHT_MOD3.get((a % 3, b % 3))
    if offsets is None:
        return None
    off = offsets[n % 3]
    return Bound(n + off, _offset_expr(off))


# Reference mod-3 table: (lower, upper) expression per (a,b) and n mod 3.
# Expressions are evaluated by :func:`eval_expression`.
REFERENCE_MOD3_TABLE: dict[tuple[int, int], tuple[tuple[str, str], ...]] = {
    (0, 0): (("24^⌊n/12⌋", "2^⌊n/2⌋"),) * 3,
    (1, 1): (("24^⌊(n−1)/12⌋", "2^⌊(n+1)/2⌋"),) * 3,
    (2, 2): (("24^⌊(n−2)/12⌋", "2^⌊(n+1)/2⌋"),) * 3,
    (0, 2): (("n−2", "n−2"), ("n", "n"), ("n−1", "n−1")),
    (1, 0): (("n", "n"),) * 3,
    (2, 1): (("n", "n"), ("n−1", "n−1"), ("n−1", "n−1")),
    (0, 1): (("⌊(n−1)/2⌋", "n−1"), ("⌊(n−1)/2⌋", "n"), ("⌊n/2⌋", "n−1")),
    (1, 2): (("⌊n/2⌋", "n"), ("⌊(n−1)/2⌋", "n"), ("⌊(n−2)/2⌋", "n−1")),
    (2, 0): (("⌊n/2⌋", "n"), ("⌊n/2⌋", "n"), ("⌊n/2⌋", "n−1")),
}


def eval_expression(expr: str, n: int) -> int:
    """Evaluate the small expression language used in bound and table cells.

    Grammar: ``n``, ``n−c``, ``n+c``, integers, ``⌊X/d⌋``, ``(X)`` and ``B^X``.
    """
    s = expr.replace("−", "-").replace(" ", "")
    pos = 0

    def atom() -> int:
        nonlocal pos
        if s.startswith("⌊", pos):
            pos += 1
            num = sum_()
            if s[pos] != "/":
                raise ValueError(f"expected '/' in {expr!r}")
            pos += 1
            den = number()
            if s[pos] != "⌋":
                raise ValueError(f"expected '⌋' in {expr!r}")
            pos += 1
            return num // den
        if s[pos] == "(":
            pos += 1
            v = sum_()
            if s[pos] != ")":
                raise ValueError(f"expected ')' in {expr!r}")
            pos += 1
            return v
        if s[pos] == "n":
            pos += 1
            return n
        return number()

    def number() -> int:
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"expected a number at {pos} in {expr!r}")
        return int(s[start:pos])

    def power() -> int:
        nonlocal pos
        base = atom()
        if pos < len(s) and s[pos] == "^":
            pos += 1
            return base ** power()
        return base

    def sum_() -> int:
        nonlocal pos
        v = power()
        while pos < len(s) and s[pos] in "+-":
            op = s[pos]
            pos += 1
            w = power()
            v = v + w if op == "+" else v - w
        return v

    out = sum_()
    if pos != len(s):
        raise ValueError(f"trailing input in {expr!r}")
    return out


# -- the oracle ---------------------------------------------------------------

RuleFn = Callable[[int, int, int, int, int], Optional[FiredRule]]


def _rule_rw(a, b, k, n, p):
    try:
        v = modular_rw(n, p, 1, a % p, {b})
    except NotApplicable:
        return None
    return FiredRule("rw-linear", "sizes ≡ a, intersections ≡ b, p∤a−b: at most C(n,1)", p, Bound(v, "n"))


def _rule_rw_complement(a, b, k, n, p):
    try:
        v = modular_rw(n, p, 1, (n - a) % p, {n - 2 * a + b})
    except NotApplicable:
        return None
    return FiredRule("rw-linear-complement", "linear bound on the complement family", p, Bound(v, "n"))


def _rule_direct(a, b, k, n, p):
    if not n_minus_1_direct(a % p, b % p, n, p):
        return None
    return FiredRule(
        "n-minus-1-direct", "p∤a,b,a−b,n,a²−nb−a+b  or  p|a, p∤b,n−1", p, Bound(n - 1, "n−1")
    )


def _rule_substituted(a, b, k, n, p):
    if not n_minus_1_substituted(a % p, b % p, n, p):
        return None
    return FiredRule(
        "n-minus-1-complement",
        "p∤n−a,n−2a+b,a−b,n,a²−nb−a+b  or  p|n−a, p∤n−2a+b,n−1",
        p,
        Bound(n - 1, "n−1"),
    )


def _rule_two_one(a, b, k, n, p):
    bd = two_one_schedule(a, b, n, p)
    if bd is None:
        return None
    # both cases are attained (oddtown complement / the star {1,j}), so tight when k = p
    return FiredRule("two-one-schedule", "(2,1) mod p: n if n≡3, n−1 if n≢0,3", p, bd, tight=(k == p))


def _rule_eventown(a, b, k, n, p):
    bd = eventown_bound(a, b, n, p)
    if bd is None:
        return None
    anchor = "(0,0) mod p: 2^⌊n/2⌋" if a % p == 0 else "(m,m) mod p: totally isotropic span"
    return FiredRule("isotropic-span", anchor, p, bd)


def _rule_mod3_table(a, b, k, n, p):
    if p != 3:
        return None
    bd = mod3_table(a, b, n)
    if bd is None:
        return None
    return FiredRule("mod3-tight-table", "solved mod-3 rows (0,2), (1,0), (2,1)", p, bd, tight=(k == 3))


RULES: tuple[RuleFn, ...] = (
    _rule_rw,
    _rule_rw_complement,
    _rule_direct,
    _rule_substituted,
    _rule_two_one,
    _rule_eventown,
    _rule_mod3_table,
)


def bound_oracle(a: int, b: int, k: int, n: int, rules: Iterable[RuleFn] = RULES) -> BoundResult:
    a, b = a % k, b % k
    fired = [FiredRule("trivial", "all subsets of [n]", k, Bound.power(2, n, "2^n"))]
    for p in prime_divisors(k):
        for rule in rules:
            r = rule(a, b, k, n, p)
            if r is not None:
                fired.append(r)
    value = min(r.bound.value for r in fired)
    binding = [r for r in fired if r.bound.value == value]
    return BoundResult(
        value=value,
        expression=binding[0].bound.expression,
        tight=any(r.tight for r in binding),
        rules=tuple(fired),
    )


def invariant_quantity(a: int, b: int, n: int) -> int:
    """a^2 - n b - a + b; unchanged mod p by (a, b) -> (n-a, n-2a+b)."""
    return a * a - n * b - a + b
