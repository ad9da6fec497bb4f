import itertools

import networkx as nx
import pytest
from conftest import cycle, from_nx, path, random_graphs, small_graphs, to_nx
from hypothesis import given
from hypothesis import strategies as st

from girthforge import algorithms as alg
from girthforge import analysis as an
from girthforge import geometry as geo
from girthforge.graph import Graph


def star(k):
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def gadget():
    """Root 0 - 1, vertex 1 joined to the even vertices of an 8-cycle on 2..9."""
    edges = [(0, 1)] + [(1, 2 + 2 * i) for i in range(4)] + [(2 + i, 2 + (i + 1) % 8) for i in range(8)]
    return Graph.from_edges(10, edges)


# -- layers -------------------------------------------------------------------------

def test_layers_star():
    L = an.bfs_layers(star(4), 0, 2)
    assert L.layer(1).tolist() == [1, 2, 3, 4] and len(L.layer(2)) == 0


def test_layers_c8():
    L = an.bfs_layers(cycle(8), 0, 4)
    assert L.sizes() == [1, 2, 2, 2, 1]


def test_layers_q2():
    g = geo.conduit("Q", 2).graph
    for x in range(15):
        L = an.bfs_layers(g, x, 3)
        assert L.sizes() == [1, 3, 6, 12]
    assert g.n == 1 + 3 + 6 + 12 + 8


@given(random_graphs(max_n=60), st.data())
def test_layers_match_networkx(g, data):
    x = data.draw(st.integers(0, g.n - 1))
    L = an.bfs_layers(g, x, 4)
    ref = nx.single_source_shortest_path_length(to_nx(g), x, cutoff=4)
    for i in range(5):
        assert set(L.layer(i).tolist()) == {v for v, d in ref.items() if d == i}
    d = max(alg.max_degree(g), 1)
    assert an.layer_bound_ok(L, d)
    for i in range(1, 5):
        for v in L.layer(i).tolist():
            assert L.dist[L.parent[v]] == i - 1 and g.has_edge(v, int(L.parent[v]))


@given(random_graphs(max_n=40), st.data())
def test_lca_is_common_ancestor(g, data):
    x = data.draw(st.integers(0, g.n - 1))
    L = an.bfs_layers(g, x, g.n)
    reach = [v for v in range(g.n) if L.dist[v] >= 0]
    u = data.draw(st.sampled_from(reach))
    v = data.draw(st.sampled_from(reach))
    a = L.lca(u, v)
    au, av = L.ancestors(u), L.ancestors(v)
    common = [w for w in au if w in av]
    assert a == common[0]


# -- six-path claims ------------------------------------------------------------

def test_six_path_star():
    g = star(5)
    L = an.bfs_layers(g, 0, 4)
    for t in (1, 2, 3):
        assert an.six_path_check(g, L, t, "claim1") is None
        assert an.six_path_check(g, L, t, "claim2") is None


def test_six_path_hexagon_none():
    g = geo.conduit("H", 2).graph
    for x in range(g.n):
        L = an.bfs_layers(g, x, 4)
        assert an.six_path_check(g, L, 3, "claim1") is None
        assert an.six_path_check(g, L, 3, "claim2") is None


def test_six_path_gadget_witness():
    g = gadget()
    L = an.bfs_layers(g, 0, 4)
    w = an.six_path_check(g, L, 3, "claim1")
    assert w == [2, 3, 4, 5, 6, 7, 8]
    assert an.path_vertices_ok(g, w, L, 3, "claim1")
    assert an.hypothesis_holds(g, 3)[0] is False


def _brute_six_path(g, L, t, which):
    lo, hi = (t - 1, t) if which == "claim1" else (t, t + 1)
    allowed = [v for v in range(g.n) if L.dist[v] in (lo, hi)]
    xs = [v for v in allowed if L.dist[v] == lo]
    best = None
    for p in itertools.permutations(allowed, 7):
        if all(p[i] in xs for i in (0, 2, 4, 6)) and all(g.has_edge(p[i], p[i + 1]) for i in range(6)):
            if best is None or list(p) < best:
                best = list(p)
    return best


@given(small_graphs(max_n=9), st.integers(1, 3), st.sampled_from(["claim1", "claim2"]))
def test_six_path_matches_brute_force(g, t, which):
    L = an.bfs_layers(g, 0, t + 1)
    got = an.six_path_check(g, L, t, which)
    want = _brute_six_path(g, L, t, which)
    assert (got is None) == (want is None)
    if got is not None:
        assert an.path_vertices_ok(g, got, L, t, which)
        assert got == want


def test_six_path_budget():
    g = from_nx(nx.complete_bipartite_graph(6, 6))
    L = an.bfs_layers(g, 0, 3)
    from girthforge.errors import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        an.six_path_check(g, L, 2, "claim1", budget=3)


# -- bottlenecks --------------------------------------------------------------------

@given(st.integers(2, 40), st.integers(0, 2**16), st.integers(1, 4))
def test_bottlenecks_tree(n, seed, t):
    g = from_nx(nx.random_labeled_tree(n, seed=seed))
    assert an.count_bottlenecks(g, 0, t) == (0, 0, 0)


def test_bottlenecks_k55():
    g = from_nx(nx.complete_bipartite_graph(5, 5))
    assert an.count_bottlenecks(g, 0, 1) == (0, 20, 0)


@pytest.mark.parametrize("t", [2, 3])
def test_bottleneck_bounds_hexagon(t):
    g = geo.conduit("H", 2).graph
    for x in range(g.n):
        L = an.bfs_layers(g, x, t + 1)
        c1, c2, c3 = an.count_bottlenecks(g, x, t, L)
        assert c1 <= 2 * len(L.layer(t - 1))
        assert c2 <= 2 * len(L.layer(t))
        assert c3 <= 2.5 * len(L.layer(t))


@given(random_graphs(max_n=40), st.integers(1, 3))
def test_bottlenecks_brute(g, t):
    D = alg.all_pairs_distances(g)[0]
    A = lambda i: {v for v in range(g.n) if D[v] == i}
    At, Aup, Adown = A(t), A(t - 1), A(t + 1)
    c1 = sum(1 for u in At if len(set(g.neighbors(u).tolist()) & Aup) >= 4)
    c2 = sum(1 for u in At for v in g.neighbors(u).tolist()
             if v in Adown and len(set(g.neighbors(v).tolist()) & At) >= 4)
    c3 = sum(1 for u, v in g.edges().tolist() if u in At and v in At)
    assert an.count_bottlenecks(g, 0, t) == (c1, c2, c3)


# -- density bounds -----------------------------------------------------------------

def test_density_edgeless():
    rep = an.power_neighborhood_density(Graph.from_edges(4, []), 2, 1)
    assert rep.max_edges == 0 and rep.within_bound


def test_density_c5():
    rep = an.power_neighborhood_density(cycle(5), 2, 2)
    assert rep.max_edges == 6 and rep.bound == 192


def test_density_hexagon_golden():
    rep = an.power_neighborhood_density(geo.conduit("H", 2).graph, 3, 3)
    assert rep.bound == 35 * 3**5 == 8505
    assert rep.max_edges == 66 and rep.within_bound and rep.hypothesis


@given(random_graphs(max_n=25), st.integers(1, 3))
def test_density_brute(g, t):
    gt = alg.power(g, t)
    best = 0
    for v in range(g.n):
        nb = set(gt.neighbors(v).tolist())
        best = max(best, sum(1 for a, b in gt.edges().tolist() if a in nb and b in nb))
    d = max(alg.max_degree(g), 1)
    assert an.power_neighborhood_density(g, t, d, check_hypothesis=False).max_edges == best


def test_path_bound_k33():
    rep = an.neighborhood_path_bound(from_nx(nx.complete_bipartite_graph(3, 3)), 4, 3)
    assert rep.max_edges == 0 and rep.bound == 1.5 and rep.applicable is False


def test_path_bound_c7():
    rep = an.neighborhood_path_bound(cycle(7), 5, 2)
    assert rep.max_edges == 0 and rep.bound == 2 and rep.within_bound


def test_path_bound_petersen():
    g = from_nx(nx.petersen_graph())
    assert alg.girth(g) == 5
    rep = an.neighborhood_path_bound(g, 4, 3)
    assert rep.applicable and rep.max_edges == 0 and rep.within_bound


@given(random_graphs(max_n=30), st.integers(4, 7))
def test_path_bound_holds_when_applicable(g, k):
    d = max(alg.max_degree(g), 1)
    rep = an.neighborhood_path_bound(g, k, d)
    if rep.applicable:
        assert rep.within_bound


# -- invariants on hypothesis-satisfying graphs ----------------------------------------

@pytest.mark.parametrize("name,g,t", [
    ("H2", geo.conduit("H", 2).graph, 3),
    ("H2", geo.conduit("H", 2).graph, 2),
    ("Q2", geo.conduit("Q", 2).graph, 2),
    ("P3", geo.conduit("P", 3).graph, 2),
    ("petersen", from_nx(nx.petersen_graph()), 3),
])
def test_analysis_on_hypothesis_graphs(name, g, t):
    holds, _ = an.hypothesis_holds(g, t)
    rep = an.analyze(g, t)
    if holds:
        assert rep.claims_ok and rep.bottlenecks_ok and rep.density.within_bound


def test_c6_hypothesis_rejected():
    holds, w = an.hypothesis_holds(cycle(6), 2)
    assert not holds and alg.is_cycle(cycle(6), w) and len(w) == 6


def test_forbidden_lengths():
    assert an.forbidden_lengths(2) == [6]
    assert an.forbidden_lengths(3) == [8]
    assert an.forbidden_lengths(5) == [8, 10, 12]


def test_report_json():
    rep = an.analyze(path(6), 2)
    d = rep.to_dict()
    assert d["pass"] and all(r["bottlenecks"] == [0, 0, 0] for r in d["roots"])
