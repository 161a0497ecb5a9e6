"""Exact arithmetic in GF(p) and GF(p^2) and the linear-algebra certificates built on it.

GF(p^2) is realised as GF(p)[x]/(x^2 - r) with ``r`` the smallest quadratic
non-residue mod ``p``, so every certificate is reproducible bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .setcore import Family


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_divisors(k: int) -> list[int]:
    out = []
    d = 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def find_nonresidue(p: int) -> int:
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            return r
    raise AssertionError("unreachable: every odd prime has a non-residue")


@dataclass(frozen=True)
class QuadExtScalar:
    """The element c0 + c1*x of GF(p^2), x^2 = r."""

    c0: int
    c1: int
    p: int
    r: int

    def _lift(self, other) -> "QuadExtScalar":
        if isinstance(other, QuadExtScalar):
            if (other.p, other.r) != (self.p, self.r):
                raise ValueError("operands live in different fields")
            return other
        return QuadExtScalar(other % self.p, 0, self.p, self.r)

    def __add__(self, other):
        o = self._lift(other)
        return QuadExtScalar((self.c0 + o.c0) % self.p, (self.c1 + o.c1) % self.p, self.p, self.r)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar(-self.c0 % self.p, -self.c1 % self.p, self.p, self.r)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        p = self.p
        return QuadExtScalar(
            (self.c0 * o.c0 + self.r * self.c1 * o.c1) % p,
            (self.c0 * o.c1 + self.c1 * o.c0) % p,
            p,
            self.r,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadExtScalar":
        # (c0 + c1 x)^-1 = (c0 - c1 x) / (c0^2 - r c1^2); the norm is nonzero since r is a non-residue
        p = self.p
        norm = (self.c0 * self.c0 - self.r * self.c1 * self.c1) % p
        if norm == 0:
            raise ZeroDivisionError("zero has no inverse")
        ninv = pow(norm, -1, p)
        return QuadExtScalar(self.c0 * ninv % p, -self.c1 * ninv % p, p, self.r)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __bool__(self):
        return bool(self.c0 or self.c1)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.c1 == 0 and self.c0 == other % self.p
        if isinstance(other, QuadExtScalar):
            return (self.c0, self.c1, self.p, self.r) == (other.c0, other.c1, other.p, other.r)
        return NotImplemented

    def __hash__(self):
        return hash((self.c0, self.c1, self.p, self.r))

    def __repr__(self):
        if self.c1 == 0:
            return str(self.c0)
        x = "x" if self.c1 == 1 else f"{self.c1}x"
        return x if self.c0 == 0 else f"{self.c0}+{x}"


@dataclass(frozen=True)
class QuadExt:
    p: int
    r: int

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if pow(self.r, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"{self.r} is a square mod {self.p}")

    @classmethod
    def for_prime(cls, p: int) -> "QuadExt":
        return _field(p)

    def __call__(self, c0: int, c1: int = 0) -> QuadExtScalar:
        return QuadExtScalar(c0 % self.p, c1 % self.p, self.p, self.r)

    @property
    def zero(self) -> QuadExtScalar:
        return self(0)

    @property
    def one(self) -> QuadExtScalar:
        return self(1)

    def elements(self) -> list[QuadExtScalar]:
        return [self(c0, c1) for c1 in range(self.p) for c0 in range(self.p)]


@lru_cache(maxsize=None)
def _field(p: int) -> QuadExt:
    return QuadExt(p, find_nonresidue(p))


def sqrt_of(field: QuadExt, v: int) -> QuadExtScalar:
    """A square root of ``v`` in GF(p^2), the one with lexicographically smallest (c1, c0).

    Residues have a root in GF(p) itself; a non-residue v equals r*t^2 and has root t*x.
    """
    p = field.p
    v %= p
    for t in range(p):
        if t * t % p == v:
            return field(t, 0)
    for t in range(1, p):
        if field.r * t * t % p == v:
            return field(0, t)
    raise AssertionError("unreachable: every element of GF(p) is a square in GF(p^2)")


# -- vectors and matrices ---------------------------------------------------

Matrix = list[list[QuadExtScalar]]


def alpha_vectors(family: Family, p: int, alpha: QuadExtScalar | None = None) -> list[list[QuadExtScalar]]:
    """Characteristic vectors of the members with ``alpha`` appended.

    By default ``alpha`` is the square root of ``-b`` (``b`` reduced mod p).
    """
    field = QuadExt.for_prime(p)
    if alpha is None:
        alpha = sqrt_of(field, -family.spec.b)
    zero, one = field.zero, field.one
    n = family.spec.n
    out = []
    for s in family.members:
        vec = [one if s.bits >> i & 1 else zero for i in range(n)]
        vec.append(alpha)
        out.append(vec)
    return out


def dot(u: Sequence[QuadExtScalar], v: Sequence[QuadExtScalar]) -> QuadExtScalar:
    if len(u) != len(v):
        raise ValueError("length mismatch")
    acc = u[0] * 0 if u else None
    for x, y in zip(u, v):
        acc = acc + x * y
    return acc


def gram_matrix(vectors: Sequence[Sequence[QuadExtScalar]]) -> Matrix:
    if vectors and len({len(v) for v in vectors}) != 1:
        raise ValueError("vectors must have equal length")
    m = len(vectors)
    g: Matrix = [[None] * m for _ in range(m)]  # type: ignore[list-item]
    for i in range(m):
        for j in range(i, m):
            g[i][j] = g[j][i] = dot(vectors[i], vectors[j])
    return g


def rank(matrix: Sequence[Sequence[QuadExtScalar]]) -> int:
    """Rank by Gaussian elimination; the input is not modified."""
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        pivot = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        inv = rows[rk][col].inverse()
        prow = [x * inv for x in rows[rk]]
        rows[rk] = prow
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        rk += 1
        if rk == len(rows):
            break
    return rk


# -- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Outcome of replaying one linear-algebra proof step on a concrete family.

    ``kind`` is ``"independence"`` or ``"isotropy"``.  For independence ``rank``
    must equal ``size``; for isotropy ``rank`` is the span dimension, checked
    against ``dim_bound`` and ``size <= 2**rank``.
    """

    kind: str
    p: int
    r: int
    alpha: QuadExtScalar
    rank: int
    size: int
    holds: bool
    gram_ok: bool
    dim_bound: int | None = None

    @property
    def bound(self) -> int | None:
        return None if self.dim_bound is None else 2**self.dim_bound

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "p": self.p,
            "r": self.r,
            "alpha": [self.alpha.c0, self.alpha.c1],
            "rank": self.rank,
            "size": self.size,
            "holds": self.holds,
            "gram_ok": self.gram_ok,
        }
        if self.dim_bound is not None:
            d["dim_bound"] = self.dim_bound
            d["bound"] = self.bound
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_prime(family: Family, p: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"certificates need an odd prime, got p={p}")
    if family.spec.k % p:
        raise ValueError(f"p={p} does not divide k={family.spec.k}")


def independence_certificate(family: Family, p: int) -> Certificate:
    """Rank of the alpha-vectors (alpha^2 = -b); a valid town with p not dividing a-b has full rank.

    ``holds`` also requires the Gram matrix to be (a-b)I, so a non-town never certifies.
    """
    _check_prime(family, p)
    a, b = family.spec.a % p, family.spec.b % p
    if a == b:
        raise ValueError(f"p={p} divides a-b; use the isotropy certificate")
    field = QuadExt.for_prime(p)
    alpha = sqrt_of(field, -b)
    vecs = alpha_vectors(family, p, alpha)
    g = gram_matrix(vecs)
    diag = field(a - b)
    gram_ok = all(g[i][j] == (diag if i == j else 0) for i in range(len(g)) for j in range(len(g)))
    rk = rank(vecs)
    return Certificate("independence", p, field.r, alpha, rk, len(family), gram_ok and rk == len(family), gram_ok)


def isotropy_certificate(family: Family, p: int) -> Certificate:
    """Total isotropy of the span of the alpha-vectors (alpha^2 = -m) for an (m,m)-town.

    For m = 0 mod p the appended coordinate is identically zero, so the span sits
    inside GF(p^2)^n and the dimension bound drops to floor(n/2).
    """
    _check_prime(family, p)
    a, b = family.spec.a % p, family.spec.b % p
    if a != b:
        raise ValueError(f"isotropy needs a = b mod p, got a={a}, b={b}, p={p}")
    field = QuadExt.for_prime(p)
    alpha = sqrt_of(field, -a)
    n = family.spec.n
    vecs = alpha_vectors(family, p, alpha)
    g = gram_matrix(vecs)
    gram_ok = all(x == 0 for row in g for x in row)
    dim_bound = n // 2 if a == 0 else (n + 1) // 2
    span = rank(vecs)
    holds = gram_ok and span <= dim_bound and len(family) <= 2**span
    return Certificate("isotropy", p, field.r, alpha, span, len(family), holds, gram_ok, dim_bound)


def certify(family: Family, p: int) -> Certificate:
    """Independence when a != b mod p, isotropy otherwise."""
    if family.spec.a % p == family.spec.b % p:
        return isotropy_certificate(family, p)
    return independence_certificate(family, p)
