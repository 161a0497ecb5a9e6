"""Sets over [n] as bit vectors, (a,b)-town families, the checker and the family file format.

Element ``i`` of the ground set ``[n] = {1, ..., n}`` is stored in bit ``i - 1``.
Python integers are arbitrary precision, so the same representation serves any width.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class FamilyFormatError(ValueError):
    """Raised for malformed family files; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class TownSpec:
    n: int
    k: int
    a: int
    b: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ground set size must be positive, got n={self.n}")
        if self.k < 2:
            raise ValueError(f"modulus must be at least 2, got k={self.k}")
        if not (0 <= self.a < self.k and 0 <= self.b < self.k):
            raise ValueError(f"residues must lie in [0, k), got a={self.a}, b={self.b}, k={self.k}")

    @classmethod
    def reduced(cls, n: int, k: int, a: int, b: int) -> "TownSpec":
        """Build a spec after reducing ``a`` and ``b`` modulo ``k``."""
        return cls(n, k, a % k, b % k)

    def substituted(self) -> "TownSpec":
        return TownSpec.reduced(self.n, self.k, self.n - self.a, self.n - 2 * self.a + self.b)

    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.k, self.n)

    def __str__(self):
        return f"({self.a},{self.b})-town mod {self.k} over [{self.n}]"


@dataclass(frozen=True, order=True)
class SetWord:
    """A subset of [n] stored as an integer bit mask."""

    bits: int
    n: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bit mask {self.bits:#x} does not fit width {self.n}")

    @classmethod
    def from_elements(cls, elements: Iterable[int], n: int) -> "SetWord":
        bits = 0
        for e in elements:
            if not 1 <= e <= n:
                raise ValueError(f"element {e} outside [1, {n}]")
            bits |= 1 << (e - 1)
        return cls(bits, n)

    @classmethod
    def full(cls, n: int) -> "SetWord":
        return cls((1 << n) - 1, n)

    def elements(self) -> list[int]:
        out = []
        bits, i = self.bits, 1
        while bits:
            if bits & 1:
                out.append(i)
            bits >>= 1
            i += 1
        return out

    def complement(self) -> "SetWord":
        return SetWord(self.bits ^ ((1 << self.n) - 1), self.n)

    def widen(self, n: int) -> "SetWord":
        if n < self.n:
            raise ValueError("cannot narrow a set word")
        return SetWord(self.bits, n)

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, element: int) -> bool:
        return 1 <= element <= self.n and bool(self.bits >> (element - 1) & 1)

    def __repr__(self):
        return "{" + ",".join(map(str, self.elements())) + "}"


def cardinality(s: SetWord) -> int:
    return s.bits.bit_count()


def intersect_size(s: SetWord, t: SetWord) -> int:
    if s.n != t.n:
        raise ValueError(f"width mismatch: {s.n} != {t.n}")
    return (s.bits & t.bits).bit_count()


@dataclass(frozen=True)
class Family:
    """An ordered collection of distinct subsets of [spec.n], tagged with the town parameters."""

    spec: TownSpec
    members: tuple[SetWord, ...] = ()

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        seen = set()
        for s in members:
            if s.n != self.spec.n:
                raise ValueError(f"member {s!r} has width {s.n}, expected {self.spec.n}")
            if s.bits in seen:
                raise ValueError(f"duplicate member {s!r}")
            seen.add(s.bits)

    @classmethod
    def from_lists(cls, spec: TownSpec, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(spec, tuple(SetWord.from_elements(s, spec.n) for s in sets))

    @classmethod
    def from_bits(cls, spec: TownSpec, masks: Iterable[int]) -> "Family":
        return cls(spec, tuple(SetWord(m, spec.n) for m in masks))

    def with_spec(self, spec: TownSpec) -> "Family":
        return Family(spec, self.members)

    def as_lists(self) -> list[list[int]]:
        return [s.elements() for s in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[SetWord]:
        return iter(self.members)


@dataclass(frozen=True)
class Violation:
    """One failure of the town property.

    ``kind`` is ``"size"`` (``indices`` holds one member index) or
    ``"intersection"`` (two indices).  Indices are 0-based positions in the family.
    """

    kind: str
    indices: tuple[int, ...]
    observed: int
    residue: int
    expected: int

    def describe(self, family: Family) -> str:
        sets = " and ".join(f"#{i + 1} {family.members[i]!r}" for i in self.indices)
        what = "size" if self.kind == "size" else "intersection size"
        return f"{sets}: {what} {self.observed} = {self.residue} mod {family.spec.k}, expected {self.expected}"


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.passed


def check_town(family: Family) -> CheckReport:
    """Check every size and every pairwise intersection, collecting all violations."""
    spec = family.spec
    k = spec.k
    masks = [s.bits for s in family.members]
    violations = []
    for i, m in enumerate(masks):
        c = m.bit_count()
        if c % k != spec.a:
            violations.append(Violation("size", (i,), c, c % k, spec.a))
    for i, j in itertools.combinations(range(len(masks)), 2):
        c = (masks[i] & masks[j]).bit_count()
        if c % k != spec.b:
            violations.append(Violation("intersection", (i, j), c, c % k, spec.b))
    return CheckReport(not violations, tuple(violations))


def is_town(masks: Sequence[int], k: int, a: int, b: int) -> bool:
    """Fail-fast variant of :func:`check_town` on raw bit masks."""
    for i, m in enumerate(masks):
        if m.bit_count() % k != a:
            return False
        for other in masks[:i]:
            if (m & other).bit_count() % k != b:
                return False
    return True


def substitute(family: Family) -> Family:
    """Replace every member by its complement; the spec moves to (n-a, n-2a+b) mod k."""
    return Family(family.spec.substituted(), tuple(s.complement() for s in family.members))


def relabel(family: Family, perm: Sequence[int]) -> Family:
    """Apply a permutation of [n], given as ``perm[i-1] = image of i``."""
    n = family.spec.n
    return Family(
        family.spec,
        tuple(SetWord.from_elements((perm[e - 1] for e in s.elements()), n) for s in family.members),
    )


# -- family files -----------------------------------------------------------


def parse_family(text: str) -> Family:
    spec = None
    members: list[SetWord] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if spec is None:
            if not line:
                continue
            fields = line.split()
            if len(fields) != 4:
                raise FamilyFormatError(f"header must be 'n k a b', got {line!r}", lineno)
            try:
                n, k, a, b = (int(f) for f in fields)
                spec = TownSpec(n, k, a, b)
            except ValueError as exc:
                raise FamilyFormatError(f"bad header {line!r}: {exc}", lineno) from None
            continue
        if not line:
            continue
        if line == "-":
            bits = 0
        else:
            bits = 0
            prev = 0
            for tok in line.split():
                try:
                    e = int(tok)
                except ValueError:
                    raise FamilyFormatError(f"not an integer: {tok!r}", lineno) from None
                if not 1 <= e <= spec.n:
                    raise FamilyFormatError(f"element {e} outside [1, {spec.n}]", lineno)
                if e == prev or bits >> (e - 1) & 1:
                    raise FamilyFormatError(f"duplicate element {e}", lineno)
                if e < prev:
                    raise FamilyFormatError("elements must be strictly increasing", lineno)
                bits |= 1 << (e - 1)
                prev = e
        if bits in seen:
            raise FamilyFormatError(f"duplicate set (first seen on line {seen[bits]})", lineno)
        seen[bits] = lineno
        members.append(SetWord(bits, spec.n))
    if spec is None:
        raise FamilyFormatError("missing header line 'n k a b'")
    return Family(spec, tuple(members))


def render_family(family: Family) -> str:
    s = family.spec
    lines = [f"{s.n} {s.k} {s.a} {s.b}"]
    for m in family.members:
        lines.append(" ".join(map(str, m.elements())) if m.bits else "-")
    return "\n".join(lines) + "\n"


def read_family(path) -> Family:
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read())


def write_family(family: Family, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_family(family))
