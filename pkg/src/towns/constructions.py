"""Explicit town families: blocks, stars, co-stars and the Hadamard-block construction.

Every generator returns a :class:`~towns.setcore.Family` tagged with the spec it
claims; the tests run :func:`~towns.setcore.check_town` on all of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import is_prime
from .setcore import Family, SetWord, TownSpec, substitute


def _prefix(m: int) -> int:
    return (1 << m) - 1


def _block_mask(start: int, size: int) -> int:
    """Mask of the consecutive elements start+1, ..., start+size."""
    return _prefix(size) << start


def block_construction(m: int, k: int, n: int) -> Family:
    """All unions of [m] with any subset of the floor((n-m)/k) consecutive k-blocks after it."""
    if not 0 <= m < k:
        raise ValueError(f"need 0 <= m < k, got m={m}, k={k}")
    if m > n:
        raise ValueError(f"core [m] does not fit in [n]: m={m}, n={n}")
    spec = TownSpec(n, k, m, m)
    core = _prefix(m)
    if n <= k:
        return Family.from_bits(spec, [core])
    blocks = [_block_mask(m + i * k, k) for i in range((n - m) // k)]
    masks = []
    for choice in range(1 << len(blocks)):
        s = core
        for i, blk in enumerate(blocks):
            if choice >> i & 1:
                s |= blk
        masks.append(s)
    return Family.from_bits(spec, masks)


# -- Hadamard matrices ------------------------------------------------------


@dataclass(frozen=True)
class HadamardMatrix:
    order: int
    entries: np.ndarray

    def __post_init__(self):
        h = self.entries
        if h.shape != (self.order, self.order):
            raise ValueError("shape does not match order")
        if not np.all(np.abs(h) == 1):
            raise ValueError("entries must be +1 or -1")

    def is_hadamard(self) -> bool:
        h = self.entries.astype(np.int64)
        return bool(np.array_equal(h @ h.T, self.order * np.eye(self.order, dtype=np.int64)))

    def is_normalized(self) -> bool:
        return bool(np.all(self.entries[0] == 1) and np.all(self.entries[:, 0] == 1))


def paley_hadamard(q: int) -> HadamardMatrix:
    """Paley type I Hadamard matrix of order q + 1 for a prime q = 3 mod 4, normalised."""
    if not is_prime(q) or q % 4 != 3:
        raise ValueError(f"Paley I needs a prime q = 3 mod 4, got {q}")
    squares = {x * x % q for x in range(1, q)}
    chi = [0] + [1 if x in squares else -1 for x in range(1, q)]
    # Jacobsthal matrix Q[i][j] = chi(j - i); S = [[0, 1^T], [-1, Q]] is skew, H = I + S
    n = q + 1
    h = np.zeros((n, n), dtype=np.int64)
    h[0, 1:] = 1
    h[1:, 0] = -1
    for i in range(q):
        for j in range(q):
            h[i + 1, j + 1] = chi[(j - i) % q]
    h += np.eye(n, dtype=np.int64)
    # negate rows with a leading -1 to make the first column all +1 (the first row already is)
    h[h[:, 0] == -1] *= -1
    return HadamardMatrix(n, h)


def _hadamard_for(k: int) -> HadamardMatrix:
    q = 4 * k - 1
    if not is_prime(q):
        raise ValueError(f"no Paley source of order {4 * k} (4k-1 = {q} is not prime); k=3 is the supported case")
    return paley_hadamard(q)


def hadamard_supports(h: HadamardMatrix) -> list[int]:
    """Positive and negative supports of the rows, as masks over [order]; row order kept."""
    out = []
    for row in h.entries:
        pos = sum(1 << j for j, x in enumerate(row) if x == 1)
        out.append(pos)
        out.append(pos ^ _prefix(h.order))
    return out


def frankl_odlyzko(k: int, n: int) -> Family:
    """(0,0)-town mod k of size (8k)^floor(n/4k) built from an order-4k Hadamard matrix.

    Each 4k-block of coordinates contributes one of the 8k row supports; the
    family is the product over blocks.  Leftover coordinates stay unused.
    """
    h = _hadamard_for(k)
    width = 4 * k
    cands = hadamard_supports(h)
    nblocks = n // width
    masks = [0]
    for blk in range(nblocks):
        shift = blk * width
        masks = [m | (c << shift) for m in masks for c in cands]
    return Family.from_bits(TownSpec(n, k, 0, 0), masks)


def augment(family: Family, m: int) -> Family:
    """Append m fresh elements to the ground set and add all of them to every member."""
    spec = family.spec
    n = spec.n + m
    extra = _prefix(m) << spec.n
    new_spec = TownSpec.reduced(n, spec.k, spec.a + m, spec.b + m)
    return Family(new_spec, tuple(SetWord(s.bits | extra, n) for s in family.members))


# -- stars --------------------------------------------------------------------


def star_shape(a: int, b: int, k: int) -> tuple[int, int]:
    """Core size c (smallest c = b mod k) and petal size d (smallest positive d = a-b mod k)."""
    c = b % k
    d = (a - b) % k or k
    return c, d


def star(a: int, b: int, k: int, n: int) -> Family:
    """Core [c] together with one of the consecutive d-blocks that follow it."""
    a, b = a % k, b % k
    c, d = star_shape(a, b, k)
    if c + d > n:
        raise ValueError(f"no star for (a,b)=({a},{b}) mod {k} in [{n}]: needs c+d={c + d} <= n")
    core = _prefix(c)
    masks = [core | _block_mask(c + i * d, d) for i in range((n - c) // d)]
    return Family.from_bits(TownSpec(n, k, a, b), masks)


def co_star(a: int, b: int, k: int, n: int) -> Family:
    """Complements of the star for the substituted parameters (n-a, n-2a+b)."""
    inner = star((n - a) % k, (n - 2 * a + b) % k, k, n)
    out = substitute(inner)
    assert (out.spec.a, out.spec.b) == (a % k, b % k)
    return out


def singleton(a: int, b: int, k: int, n: int) -> Family:
    """The one-set family {[c]}, c the smallest admissible cardinality."""
    c = a % k
    if c > n:
        raise ValueError(f"no set of size = {a} mod {k} in [{n}]")
    return Family.from_bits(TownSpec(n, k, a % k, b % k), [_prefix(c)])


# -- best lower bound ---------------------------------------------------------


@dataclass(frozen=True)
class Construction:
    name: str
    family: Family
    expression: str

    @property
    def size(self) -> int:
        return len(self.family)


def _floor_expr(c: int, d: int) -> str:
    top = "n" if c == 0 else f"n−{c}"
    if d == 1:
        return top
    return f"⌊{top}/{d}⌋" if c == 0 else f"⌊({top})/{d}⌋"


def candidate_constructions(a: int, b: int, k: int, n: int) -> list[Construction]:
    """Every generator that applies to the parameters, in priority order."""
    a, b = a % k, b % k
    out = []
    try:
        c, d = star_shape(a, b, k)
        out.append(Construction("star", star(a, b, k, n), _floor_expr(c, d)))
    except ValueError:
        pass
    try:
        c, d = star_shape((n - a) % k, (n - 2 * a + b) % k, k)
        out.append(Construction("co-star", co_star(a, b, k, n), _floor_expr(c, d)))
    except ValueError:
        pass
    if a == b and a <= n:
        top = "n" if a == 0 else f"n−{a}"
        block_expr = "1" if n <= k else f"2^⌊{'(' + top + ')' if a else top}/{k}⌋"
        out.append(Construction("block", block_construction(a, k, n), block_expr))
        try:
            fo = frankl_odlyzko(k, n - a)
        except ValueError:
            pass
        else:
            if a:
                out.append(Construction("fo-augment", augment(fo, a), f"{8 * k}^⌊({top})/{4 * k}⌋"))
            else:
                out.append(Construction("fo", fo, f"{8 * k}^⌊n/{4 * k}⌋"))
    try:
        out.append(Construction("singleton", singleton(a, b, k, n), "1"))
    except ValueError:
        pass
    return out


def best_construction(a: int, b: int, k: int, n: int) -> Construction:
    best = None
    for cand in candidate_constructions(a, b, k, n):
        if best is None or cand.size > best.size:
            best = cand
    if best is None:
        return Construction("empty", Family(TownSpec.reduced(n, k, a, b)), "0")
    return best


def best_lower_bound(a: int, b: int, k: int, n: int) -> Family:
    """Largest family among the applicable generators; ties go to the earlier generator."""
    return best_construction(a, b, k, n).family
