import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_isomorphic
from taulab import rng as rngmod
from taulab.graph import (
    Graph,
    census,
    components,
    gen_gnp,
    pair_rank,
    read_edgelist,
    write_edgelist,
)


def test_pair_rank_is_colex_bijection():
    seen = {}
    rank = 0
    for v in range(1, 30):
        for u in range(v):
            assert pair_rank(u, v) == rank
            seen[rank] = (u, v)
            rank += 1
    assert len(seen) == math.comb(30, 2)


def test_from_edges_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])


def test_gen_gnp_extremes():
    full = gen_gnp(4, 1.0, 0)
    assert full.edge_count == 6
    empty = gen_gnp(5, 0.0, 0)
    assert empty.edge_count == 0


def test_gen_gnp_edge_count_concentrates():
    g = gen_gnp(1000, 0.01, 7)
    mu = math.comb(1000, 2) * 0.01
    sigma = math.sqrt(mu * 0.99)
    assert abs(g.edge_count - mu) <= 3 * sigma


def test_gen_gnp_bit_reproducible():
    a = gen_gnp(300, 0.02, 5)
    b = gen_gnp(300, 0.02, 5)
    assert a.edges == b.edges
    c = gen_gnp(300, 0.02, 6)
    assert a.edges != c.edges


def test_gen_gnp_sparse_path_valid():
    # n large enough to take the binomial + rank-sampling branch
    n = 4000
    g = gen_gnp(n, 0.001, 11)
    assert all(0 <= u < v < n for u, v in g.edges)
    mu = math.comb(n, 2) * 0.001
    assert abs(g.edge_count - mu) <= 4 * math.sqrt(mu)


@given(st.integers(0, 2**31), st.integers(2, 40), st.floats(0.05, 0.9))
@settings(max_examples=40, deadline=None)
def test_gen_gnp_properties(seed, n, p):
    g = gen_gnp(n, p, seed)
    assert g.n == n
    for u, v in g.edges:
        assert 0 <= u < v < n
        assert v in g.adj[u] and u in g.adj[v]


def test_components_and_isolated_vertices():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (4, 5)])
    comps = components(g)
    assert [c.vertices for c in comps] == [(0, 1, 2), (3,), (4, 5)]
    assert comps[0].is_path() and comps[2].is_path()
    assert not comps[1].is_path()  # single vertex is not a path here


def test_census_hand_example():
    # two P2, one P3, one triangle, one isolated vertex: n = 11
    g = Graph.from_edges(
        11,
        [(0, 1), (2, 3), (4, 5), (5, 6), (7, 8), (7, 9), (8, 9)],
    )
    c = census(g)
    assert c.path_counts == {2: 2, 3: 1}
    assert sorted(c.counts.values()) == [1, 1, 1, 2]
    assert c.total_vertices() == 11


def test_census_sum_invariant_random():
    for seed in range(20):
        g = gen_gnp(60, 0.03, seed)
        assert census(g).total_vertices() == 60


def _naive_census(g: Graph):
    comps = [c for c in components(g)]
    reps: list = []
    counts: list[int] = []
    for comp in comps:
        index = {v: i for i, v in enumerate(comp.vertices)}
        sub = Graph.from_edges(
            comp.order, [(index[u], index[v]) for u, v in comp.edges]
        )
        for i, r in enumerate(reps):
            if brute_isomorphic(sub, r):
                counts[i] += 1
                break
        else:
            reps.append(sub)
            counts.append(1)
    return sorted(counts)


def test_census_agrees_with_naive_classification():
    # the contract: exact classification on graphs with <= 12 vertices
    rng = rngmod.stream(123, 0)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(1, 13))
        p = float(rng.uniform(0.05, 0.5))
        seed = int(rng.integers(0, 2**31))
        g = gen_gnp(n, p, seed)
        assert sorted(census(g).counts.values()) == _naive_census(g)
        checked += 1


def test_edgelist_round_trip(tmp_path):
    g = gen_gnp(50, 0.1, 3)
    path = str(tmp_path / "g.edges")
    write_edgelist(g, path)
    h = read_edgelist(path)
    assert h.n == g.n and h.edges == g.edges


def test_edgelist_empty_graph(tmp_path):
    path = str(tmp_path / "e.edges")
    path_obj = tmp_path / "e.edges"
    path_obj.write_text("5 0\n")
    g = read_edgelist(path)
    assert g.n == 5 and g.edge_count == 0


@pytest.mark.parametrize(
    "text",
    [
        "nonsense\n",
        "3\n",
        "3 1\n0 0\n",
        "3 1\n1 0\n",
        "3 1\n0 3\n",
        "3 2\n0 1\n0 1\n",
        "3 2\n0 1\n",
        "3 1\n0 1\n1 2\n",
    ],
)
def test_edgelist_rejects_malformed(tmp_path, text):
    f = tmp_path / "bad.edges"
    f.write_text(text)
    with pytest.raises(ValueError):
        read_edgelist(str(f))
