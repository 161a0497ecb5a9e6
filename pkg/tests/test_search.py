import itertools

import pytest
from hypothesis import given, settings, strategies as st

from towns.search import (
    LOWER_BOUND_ONLY,
    OPTIMAL,
    Budget,
    BudgetExceeded,
    ProbeReport,
    build_graph,
    candidate_count,
    degeneracy_order,
    extremal_search,
    max_clique,
    naive_extremal,
    probe_conjectures,
    root_tasks,
)
from towns.setcore import Family, TownSpec, check_town


def brute_graph(spec):
    """Vertices and edges straight from the definition, on Python sets."""
    verts = [
        frozenset(c)
        for r in range(spec.n + 1)
        for c in itertools.combinations(range(1, spec.n + 1), r)
        if r % spec.k == spec.a
    ]
    edges = {
        frozenset((s, t))
        for s, t in itertools.combinations(verts, 2)
        if len(s & t) % spec.k == spec.b
    }
    return verts, edges


@pytest.mark.parametrize(
    "spec, nv, ne",
    [
        (TownSpec(3, 3, 0, 0), 2, 1),
        (TownSpec(4, 2, 1, 0), 8, None),
        (TownSpec(2, 3, 1, 2), 2, 0),
    ],
)
def test_build_graph_examples(spec, nv, ne):
    g = build_graph(spec)
    verts, edges = brute_graph(spec)
    assert len(g) == nv == len(verts)
    if ne is not None:
        assert g.edge_count() == ne
    assert g.edge_count() == len(edges)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_build_graph_matches_definition(k):
    for n in range(1, 7):
        for a, b in itertools.product(range(k), repeat=2):
            spec = TownSpec(n, k, a, b)
            g = build_graph(spec)
            assert len(g) == candidate_count(spec)
            verts, edges = brute_graph(spec)
            got = {frozenset((frozenset(g.vertices[i].elements()), frozenset(g.vertices[j].elements())))
                   for i in range(len(g)) for j in range(i + 1, len(g)) if g.has_edge(i, j)}
            assert got == edges
            for i in range(len(g)):
                assert not g.has_edge(i, i)
                assert all(g.has_edge(i, j) == g.has_edge(j, i) for j in range(len(g)))


def test_build_graph_guard():
    with pytest.raises(BudgetExceeded):
        build_graph(TownSpec(29, 3, 0, 0))
    with pytest.raises(BudgetExceeded):
        build_graph(TownSpec(20, 2, 0, 0), max_vertices=1000)


def test_degeneracy_order_is_permutation():
    g = build_graph(TownSpec(7, 3, 1, 1))
    order = degeneracy_order(g.adjacency)
    assert sorted(order) == list(range(len(g)))


def test_max_clique_examples():
    assert max_clique(build_graph(TownSpec(4, 2, 1, 0))).size == 4
    assert max_clique(build_graph(TownSpec(2, 3, 1, 2))).size == 1
    r = max_clique(build_graph(TownSpec(6, 3, 0, 0)))
    assert r.size == 4 and r.status == OPTIMAL and check_town(r.witness).passed


def test_witness_example_0_0_mod3_n6():
    r = extremal_search(TownSpec(6, 3, 0, 0))
    assert r.witness.as_lists() == [[], [1, 2, 3], [4, 5, 6], [1, 2, 3, 4, 5, 6]]


def test_search_examples():
    assert extremal_search(TownSpec(7, 3, 2, 1)).size == 6
    assert extremal_search(TownSpec(9, 3, 0, 2)).size == 7


def test_naive_examples():
    assert naive_extremal(TownSpec(3, 2, 1, 0)) == 3
    assert naive_extremal(TownSpec(3, 3, 0, 1)) == 1
    with pytest.raises(ValueError):
        naive_extremal(TownSpec(9, 3, 0, 0))


def test_seed_symmetry_soundness(solved):
    for n in range(1, 8):
        for a, b in itertools.product(range(3), repeat=2):
            plain = max_clique(build_graph(TownSpec(n, 3, a, b)))
            assert solved(a, b, 3, n).size == plain.size, (a, b, n)


def test_root_tasks_cover_each_class_once():
    g = build_graph(TownSpec(12, 3, 0, 0))
    tasks = root_tasks(g)
    # complementation fixes (0,0) mod 3 at n = 12, so 3 covers 9 and 0 covers 12
    assert sorted(t.cardinality for t in tasks) == [0, 3, 6]
    for t in tasks:
        assert len(g.vertices[t.root]) == t.cardinality
        assert g.vertices[t.root].elements() == list(range(1, t.cardinality + 1))


def test_witness_and_nodes(solved):
    for n in range(1, 8):
        for a, b in itertools.product(range(3), repeat=2):
            r = solved(a, b, 3, n)
            assert check_town(r.witness).passed and len(r.witness) == r.size
            assert r.status == OPTIMAL and r.nodes_explored > 0


def test_determinism():
    spec = TownSpec(9, 3, 1, 2)
    r1, r2 = extremal_search(spec), extremal_search(spec)
    assert (r1.size, r1.witness, r1.nodes_explored) == (r2.size, r2.witness, r2.nodes_explored)


def test_parallel_matches_serial():
    spec = TownSpec(8, 3, 0, 0)
    serial = extremal_search(spec)
    par = extremal_search(spec, threads=2)
    assert (serial.size, serial.witness, serial.status) == (par.size, par.witness, par.status)


def test_seeded_search():
    from towns.constructions import best_lower_bound

    spec = TownSpec(9, 3, 0, 0)
    seed = best_lower_bound(0, 0, 3, 9)
    r = extremal_search(spec, seed=seed)
    assert r.size == extremal_search(spec).size and r.optimal
    with pytest.raises(ValueError):
        extremal_search(spec, seed=Family.from_lists(spec, [[1], [2, 3, 4]]))


def test_node_budget_downgrades_status():
    r = extremal_search(TownSpec(12, 3, 0, 0), Budget(max_nodes=50))
    assert r.status == LOWER_BOUND_ONLY and r.tripped == "nodes"
    assert check_town(r.witness).passed


def test_time_budget_downgrades_status():
    r = max_clique(build_graph(TownSpec(11, 3, 0, 0)), Budget(max_seconds=0.0))
    assert r.status in (LOWER_BOUND_ONLY, OPTIMAL)
    if r.status == LOWER_BOUND_ONLY:
        assert r.tripped == "time"


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(1, 6), st.data())
def test_oracle_equivalence_sampled(k, n, data):
    a = data.draw(st.integers(0, k - 1))
    b = data.draw(st.integers(0, k - 1))
    spec = TownSpec(n, k, a, b)
    assert extremal_search(spec).size == naive_extremal(spec)


def test_probe_small():
    report = probe_conjectures(3, 5)
    assert isinstance(report, ProbeReport)
    assert len(report.cells) == 45 and not report.counterexamples
    assert report.confirmations["monotone-diagonal"] == 15


def test_probe_empty_grid():
    report = probe_conjectures(3, 0)
    assert not report.cells and not report.counterexamples


def test_probe_reports_counterexample_without_failing():
    # a fake solver claiming an oversized off-diagonal cell must surface as a finding
    from towns.search import ExtremalResult

    def fake(spec):
        size = spec.n + 1 if (spec.a, spec.b) == (0, 1) else 0
        return ExtremalResult(size, Family(spec), OPTIMAL, 1, 0.0)

    report = probe_conjectures(3, 2, solve=fake)
    assert [f.conjecture for f in report.counterexamples] == ["linear-off-diagonal"] * 2
