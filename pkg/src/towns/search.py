"""Exact extremal sizes by maximum-clique search on the compatibility graph.

Vertices are the subsets of [n] with admissible cardinality, edges join pairs
whose intersection has admissible size, so towns are exactly cliques.  The
solver is a bitset branch and bound with greedy colouring bounds over a
degeneracy ordering; Python integers serve as the bitsets.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

from .setcore import Family, SetWord, TownSpec, is_town

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
LOWER_BOUND_ONLY = "lower-bound-only"


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 10**8
    max_seconds: float = 300.0


class BudgetExceeded(Exception):
    def __init__(self, which: str):
        self.which = which
        super().__init__(which)


@dataclass
class CompatGraph:
    spec: TownSpec
    vertices: list[SetWord]
    adjacency: list[int]

    @property
    def masks(self) -> list[int]:
        return [v.bits for v in self.vertices]

    def __len__(self):
        return len(self.vertices)

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adjacency) // 2

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)


@dataclass
class ExtremalResult:
    size: int
    witness: Family
    status: str
    nodes_explored: int
    elapsed: float
    tripped: Optional[str] = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def to_dict(self) -> dict:
        return {
            "a": self.witness.spec.a,
            "b": self.witness.spec.b,
            "k": self.witness.spec.k,
            "n": self.witness.spec.n,
            "size": self.size,
            "status": self.status,
            "tripped": self.tripped,
            "nodes": self.nodes_explored,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "witness": self.witness.as_lists(),
        }


def candidate_count(spec: TownSpec) -> int:
    return sum(comb(spec.n, c) for c in range(spec.a, spec.n + 1, spec.k))


def build_graph(spec: TownSpec, max_n: int = 28, max_vertices: int = 50_000) -> CompatGraph:
    """Candidates in order of cardinality, then lexicographically; [c] leads its class."""
    if spec.n > max_n:
        raise BudgetExceeded(f"n={spec.n} exceeds the graph guard n <= {max_n}")
    count = candidate_count(spec)
    if count > max_vertices:
        raise BudgetExceeded(f"{count} candidate sets exceed the guard of {max_vertices}")
    masks = []
    for c in range(spec.a, spec.n + 1, spec.k):
        for combo in itertools.combinations(range(spec.n), c):
            masks.append(sum(1 << i for i in combo))
    k, b = spec.k, spec.b
    adj = [0] * len(masks)
    for i, s in enumerate(masks):
        row = 0
        for j in range(i + 1, len(masks)):
            if (s & masks[j]).bit_count() % k == b:
                row |= 1 << j
                adj[j] |= 1 << i
        adj[i] |= row
    return CompatGraph(spec, [SetWord(m, spec.n) for m in masks], adj)


def degeneracy_order(adjacency: Sequence[int]) -> list[int]:
    """Vertices ordered from the densest core outwards (reverse min-degree removal)."""
    n = len(adjacency)
    alive = (1 << n) - 1
    degree = [a.bit_count() for a in adjacency]
    removed = []
    buckets: dict[int, set[int]] = {}
    for v, d in enumerate(degree):
        buckets.setdefault(d, set()).add(v)
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while not buckets.get(d):
            d += 1
        v = min(buckets[d])
        buckets[d].discard(v)
        removed.append(v)
        alive &= ~(1 << v)
        nb = adjacency[v] & alive
        while nb:
            low = nb & -nb
            u = low.bit_length() - 1
            nb ^= low
            buckets[degree[u]].discard(u)
            degree[u] -= 1
            buckets.setdefault(degree[u], set()).add(u)
    return removed[::-1]


class _Solver:
    """Branch and bound over a relabelled graph; bit i is the i-th vertex of ``order``."""

    def __init__(self, adjacency: Sequence[int], order: Sequence[int], budget: Budget, best: int = 0):
        pos = {v: i for i, v in enumerate(order)}
        self.order = list(order)
        self.pos = pos
        self.adj = []
        for v in order:
            row, new = adjacency[v], 0
            while row:
                low = row & -row
                new |= 1 << pos[low.bit_length() - 1]
                row ^= low
            self.adj.append(new)
        self.budget = budget
        self.best = best
        self.best_clique: Optional[list[int]] = None
        self.nodes = 0
        self.start = time.monotonic()

    def to_internal(self, mask: int) -> int:
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << self.pos[low.bit_length() - 1]
            mask ^= low
        return out

    def run(self, chosen: list[int], candidates: int) -> None:
        """Search cliques extending ``chosen`` (internal labels) within ``candidates``."""
        if len(chosen) > self.best:
            self.best = len(chosen)
            self.best_clique = list(chosen)
        if candidates:
            self._expand(chosen, candidates)

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise BudgetExceeded("nodes")
        if self.nodes & 0xFFF == 0 and time.monotonic() - self.start > self.budget.max_seconds:
            raise BudgetExceeded("time")

    def _expand(self, chosen: list[int], P: int) -> None:
        self._tick()
        adj = self.adj
        # greedy sequential colouring; vertices coloured below kmin can never be branched on
        kmin = self.best - len(chosen) + 1
        verts: list[int] = []
        colors: list[int] = []
        U = P
        color = 0
        while U:
            color += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~adj[v]
                Q ^= low
                U ^= low
                if color >= kmin:
                    verts.append(v)
                    colors.append(color)
        for i in range(len(verts) - 1, -1, -1):
            if len(chosen) + colors[i] <= self.best:
                return
            v = verts[i]
            chosen.append(v)
            newP = P & adj[v]
            if newP:
                self._expand(chosen, newP)
            elif len(chosen) > self.best:
                self.best = len(chosen)
                self.best_clique = list(chosen)
            chosen.pop()
            P &= ~(1 << v)


def _result(spec: TownSpec, graph: CompatGraph, clique: Optional[Sequence[int]], seed: Optional[Family],
            nodes: int, start: float, tripped: Optional[str]) -> ExtremalResult:
    if clique is not None:
        witness = Family(spec, tuple(sorted((graph.vertices[v] for v in clique), key=lambda s: (len(s), s.bits))))
    elif seed is not None:
        witness = seed
    else:
        witness = Family(spec)
    return ExtremalResult(
        size=len(witness),
        witness=witness,
        status=OPTIMAL if tripped is None else LOWER_BOUND_ONLY,
        nodes_explored=nodes,
        elapsed=time.monotonic() - start,
        tripped=tripped,
    )


def max_clique(graph: CompatGraph, budget: Budget = Budget(), seed: Optional[Family] = None) -> ExtremalResult:
    """Exact maximum clique of the whole graph, no symmetry reduction.

    ``seed`` is a known town used as the starting incumbent and as the witness
    when nothing larger exists.
    """
    start = time.monotonic()
    order = degeneracy_order(graph.adjacency)
    solver = _Solver(graph.adjacency, order, budget, best=len(seed) if seed is not None else 0)
    tripped = None
    try:
        solver.run([], (1 << len(order)) - 1)
    except BudgetExceeded as exc:
        tripped = exc.which
    clique = None if solver.best_clique is None else [order[v] for v in solver.best_clique]
    return _result(graph.spec, graph, clique, seed, max(solver.nodes, 1), start, tripped)


# -- symmetry-reduced search ------------------------------------------------


@dataclass(frozen=True)
class RootTask:
    """One root of the reduced search: cliques through ``root`` inside ``allowed``."""

    cardinality: int
    root: int
    allowed: int


def root_tasks(graph: CompatGraph) -> list[RootTask]:
    """One representative [c] per cardinality class, with classes already covered removed.

    S_n acts transitively on the c-subsets, so a clique meeting class c maps to
    one through [c].  Once class c is searched, its vertices (and, when
    complementation preserves the spec, those of class n-c) are excluded from
    later roots.  Roots with small neighbourhoods go first.
    """
    spec = graph.spec
    classes: dict[int, int] = {}
    first: dict[int, int] = {}
    for i, v in enumerate(graph.vertices):
        c = len(v)
        classes[c] = classes.get(c, 0) | (1 << i)
        first.setdefault(c, i)
    self_dual = spec.substituted() == spec
    pending = sorted(classes, key=lambda c: (graph.adjacency[first[c]].bit_count(), c))
    allowed = (1 << len(graph.vertices)) - 1
    tasks = []
    covered: set[int] = set()
    for c in pending:
        if c in covered:
            continue
        tasks.append(RootTask(c, first[c], allowed))
        for cc in {c, spec.n - c} if self_dual else {c}:
            if cc in classes:
                covered.add(cc)
                allowed &= ~classes[cc]
    return tasks


def _solve_root(graph: CompatGraph, order: list[int], task: RootTask, budget: Budget, best: int):
    solver = _Solver(graph.adjacency, order, budget, best=best)
    tripped = None
    try:
        cands = solver.to_internal(graph.adjacency[task.root] & task.allowed)
        solver.run([solver.pos[task.root]], cands)
    except BudgetExceeded as exc:
        tripped = exc.which
    clique = None if solver.best_clique is None else [order[v] for v in solver.best_clique]
    return solver.best, clique, solver.nodes, tripped


def _solve_root_star(args):
    return _solve_root(*args)


def extremal_search(
    spec: TownSpec,
    budget: Budget = Budget(),
    seed: Optional[Family] = None,
    threads: int = 1,
    symmetry: bool = True,
) -> ExtremalResult:
    """Largest (a,b)-town for ``spec``.

    With ``threads > 1`` the roots run in worker processes, each starting
    from the seed's size; the reported size, witness and status do not depend
    on the worker count (the node counter does).
    """
    start = time.monotonic()
    if seed is not None:
        if seed.spec != spec or not is_town([s.bits for s in seed], spec.k, spec.a, spec.b):
            raise ValueError("seed must be a valid town for the same spec")
    graph = build_graph(spec)
    if not symmetry:
        return max_clique(graph, budget, seed)
    order = degeneracy_order(graph.adjacency)
    tasks = root_tasks(graph)
    base = len(seed) if seed is not None else 0
    remaining = budget
    best, best_clique, nodes, tripped = base, None, 0, None
    if threads <= 1:
        for task in tasks:
            size, clique, used, trip = _solve_root(graph, order, task, remaining, best)
            nodes += used
            if clique is not None and size > best:
                best, best_clique = size, clique
            if trip is not None:
                tripped = trip
                break
            elapsed = time.monotonic() - start
            remaining = Budget(budget.max_nodes - nodes, budget.max_seconds - elapsed)
            log.debug("root |S|=%d done: best=%d nodes=%d", task.cardinality, best, nodes)
    else:
        args = [(graph, order, t, budget, base) for t in tasks]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_solve_root_star, args))
        for size, clique, used, trip in outcomes:
            nodes += used
            if clique is not None and size > best:
                best, best_clique = size, clique
            if trip is not None and tripped is None:
                tripped = trip
    return _result(spec, graph, best_clique, seed, max(nodes, 1), start, tripped)


# -- independent oracle -------------------------------------------------------


def naive_extremal(spec: TownSpec) -> int:
    """Largest town by listing every clique; frozensets, no bitsets, no bounds."""
    sets = [
        frozenset(c)
        for size in range(spec.n + 1)
        if size % spec.k == spec.a
        for c in itertools.combinations(range(1, spec.n + 1), size)
    ]
    if len(sets) > 64 and spec.n > 6:
        raise ValueError(f"naive enumeration limited to 64 candidates or n <= 6, got {len(sets)} at n={spec.n}")
    later = [
        [j for j in range(i + 1, len(sets)) if len(sets[i] & sets[j]) % spec.k == spec.b]
        for i in range(len(sets))
    ]
    best = 0

    def grow(size: int, options: list[int]) -> None:
        nonlocal best
        best = max(best, size)
        for j in options:
            grow(size + 1, [x for x in options if x > j and x in later_sets[j]])

    later_sets = [set(x) for x in later]
    grow(0, list(range(len(sets))))
    return best


# -- conjecture probes ----------------------------------------------------------


@dataclass
class ProbeFinding:
    conjecture: str
    detail: str
    witness: Optional[list[list[int]]] = None


@dataclass
class ProbeReport:
    k: int
    n_max: int
    cells: dict[tuple[int, int, int], int] = field(default_factory=dict)
    skipped: list[tuple[int, int, int]] = field(default_factory=list)
    confirmations: dict[str, int] = field(default_factory=lambda: {"monotone-diagonal": 0, "linear-off-diagonal": 0})
    counterexamples: list[ProbeFinding] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n_max": self.n_max,
            "cells": len(self.cells),
            "skipped": [list(c) for c in self.skipped],
            "confirmations": self.confirmations,
            "counterexamples": [f.__dict__ for f in self.counterexamples],
        }


def probe_conjectures(k: int, n_max: int, budget: Budget = Budget(), solve=None) -> ProbeReport:
    """Test two open conjectures on every cell solved to optimality.

    monotone-diagonal: E(m1,m1) >= E(m2,m2) whenever m1 < m2.
    linear-off-diagonal: E(a,b) <= n whenever a != b mod k.
    ``solve`` maps a spec to an :class:`ExtremalResult` (defaults to :func:`extremal_search`).
    """
    solve = solve or (lambda spec: extremal_search(spec, budget))
    report = ProbeReport(k, n_max)
    witnesses: dict[tuple[int, int, int], Family] = {}
    for n in range(1, n_max + 1):
        for a, b in itertools.product(range(k), repeat=2):
            res = solve(TownSpec(n, k, a, b))
            if not res.optimal:
                report.skipped.append((a, b, n))
                continue
            report.cells[(a, b, n)] = res.size
            witnesses[(a, b, n)] = res.witness
        for a, b in itertools.product(range(k), repeat=2):
            if a == b or (a, b, n) not in report.cells:
                continue
            size = report.cells[(a, b, n)]
            if size <= n:
                report.confirmations["linear-off-diagonal"] += 1
            else:
                report.counterexamples.append(ProbeFinding(
                    "linear-off-diagonal",
                    f"({a},{b})-town mod {k} over [{n}] of size {size} > n",
                    witnesses[(a, b, n)].as_lists(),
                ))
        for m1, m2 in itertools.combinations(range(k), 2):
            c1, c2 = (m1, m1, n), (m2, m2, n)
            if c1 not in report.cells or c2 not in report.cells:
                continue
            if report.cells[c1] >= report.cells[c2]:
                report.confirmations["monotone-diagonal"] += 1
            else:
                report.counterexamples.append(ProbeFinding(
                    "monotone-diagonal",
                    f"n={n}: E({m1},{m1})={report.cells[c1]} < E({m2},{m2})={report.cells[c2]} mod {k}",
                    witnesses[c2].as_lists(),
                ))
    return report
