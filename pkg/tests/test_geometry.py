import itertools

import networkx as nx
import numpy as np
import pytest
from conftest import to_nx
from hypothesis import given
from hypothesis import strategies as st

from girthforge import algorithms as alg
from girthforge import geometry as geo
from girthforge.conduit import verify_conduit
from girthforge.errors import NotPrimePower
from girthforge.field import field_create

P_Q, Q_Q, H_Q = [2, 3, 4, 5], [2, 3, 4], [2, 3]


def _cross_max(h):
    D = alg.all_pairs_distances(h.graph)
    return int(D[np.ix_(h.a, h.b)].max()), D


@pytest.mark.parametrize("q", P_Q)
def test_projective_plane(q):
    h = geo.projective_plane_incidence(q)
    n = q * q + q + 1
    assert len(h.a) == len(h.b) == n
    assert alg.min_degree(h.graph) == alg.max_degree(h.graph) == q + 1
    assert alg.girth(h.graph) == 6
    D = alg.all_pairs_distances(h.graph)
    same = D[np.ix_(h.a, h.a)]
    assert np.all(same[~np.eye(n, dtype=bool)] == 2)


@pytest.mark.parametrize("q", Q_Q)
def test_symplectic_quadrangle(q):
    h = geo.symplectic_quadrangle_incidence(q)
    assert len(h.a) == len(h.b) == q**3 + q**2 + q + 1
    assert alg.min_degree(h.graph) == alg.max_degree(h.graph) == q + 1
    assert alg.girth(h.graph) == 8
    assert _cross_max(h)[0] <= 3


@pytest.mark.parametrize("q", H_Q)
def test_split_cayley_hexagon(q):
    h = geo.split_cayley_hexagon_incidence(q)
    assert len(h.a) == len(h.b) == (q**6 - 1) // (q - 1)
    assert alg.min_degree(h.graph) == alg.max_degree(h.graph) == q + 1
    assert alg.girth(h.graph) == 12
    assert _cross_max(h)[0] <= 5


@pytest.mark.slow
def test_split_cayley_hexagon_q4():
    h = geo.split_cayley_hexagon_incidence(4)
    assert h.graph.n == 2730 and alg.max_degree(h.graph) == alg.min_degree(h.graph) == 5


def test_small_vertex_counts():
    assert geo.projective_plane_incidence(2).graph.n == 14
    assert geo.projective_plane_incidence(3).graph.n == 26
    assert geo.symplectic_quadrangle_incidence(2).graph.n == 30
    assert geo.symplectic_quadrangle_incidence(3).graph.n == 80
    assert geo.split_cayley_hexagon_incidence(2).graph.n == 126
    assert geo.split_cayley_hexagon_incidence(3).graph.n == 728


@pytest.mark.parametrize("fn", [geo.projective_plane_incidence, geo.symplectic_quadrangle_incidence,
                                geo.split_cayley_hexagon_incidence])
@pytest.mark.parametrize("q", [1, 6, 10])
def test_not_prime_power(fn, q):
    with pytest.raises(NotPrimePower):
        fn(q)


def test_girths_against_networkx():
    for h in (geo.projective_plane_incidence(2), geo.symplectic_quadrangle_incidence(2),
              geo.split_cayley_hexagon_incidence(2)):
        assert nx.girth(to_nx(h.graph)) == alg.girth(h.graph)


def test_q2_lines_by_brute_force():
    """15 totally isotropic lines of W(2), enumerated over GF(2)^4 without the library."""
    vecs = [v for v in itertools.product(range(2), repeat=4) if any(v)]

    def form(x, y):
        return (x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2]) % 2

    lines = set()
    for x, y in itertools.combinations(vecs, 2):
        if form(x, y) == 0:
            z = tuple((a + b) % 2 for a, b in zip(x, y))
            lines.add(frozenset((x, y, z)))
    assert len(vecs) == 15 and len(lines) == 15
    model = geo.symplectic_quadrangle_model(2)
    got = set()
    for j in range(len(model.lines)):
        got.add(frozenset(model.points[i] for i in range(len(model.points)) if j in model.incidence[i]))
    assert got == lines


def test_quadric_point_count_brute_force():
    count = sum(1 for x in itertools.product(range(2), repeat=7) if any(x)
                and (x[0] * x[4] + x[1] * x[5] + x[2] * x[6] - x[3] * x[3]) % 2 == 0)
    assert count == 63 == len(geo.split_cayley_hexagon_model(2).points)


@pytest.mark.parametrize("q", [2, 3])
def test_hexagon_lines_are_quadric_lines(q):
    f = field_create(q)
    m = geo.split_cayley_hexagon_model(q)
    for i, pt in enumerate(m.points):
        assert geo.quadric_value(f, pt) == 0
    for j in range(len(m.lines)):
        pts = [m.points[i] for i in range(len(m.points)) if j in m.incidence[i]]
        assert len(pts) == q + 1
        span = set(geo.subspace_points(f, pts[:2]))
        assert set(pts) == span


@pytest.mark.parametrize("kind", ["P", "Q", "H"])
def test_points_normalized_and_distinct(kind):
    m = geo.incidence_model(kind, 2)
    f = field_create(2)
    assert len(set(m.points)) == len(m.points) == len(m.lines)
    assert all(geo.normalize(f, p) == p for p in m.points)
    assert list(m.points) == sorted(m.points)


@pytest.mark.parametrize("kind,q", [("P", 2), ("P", 3), ("Q", 2), ("Q", 3), ("H", 2)])
def test_double_counting(kind, q):
    h = geo.conduit(kind, q)
    assert h.graph.m == len(h.a) * (q + 1)


def test_complete_bipartite():
    assert geo.complete_bipartite_conduit(1).graph.edge_set() == {(0, 1)}
    k3 = geo.complete_bipartite_conduit(3)
    assert alg.girth(k3.graph) == 4 and k3.graph.m == 9
    c4 = geo.complete_bipartite_conduit(2).graph
    assert nx.is_isomorphic(to_nx(c4), nx.cycle_graph(4))


def test_mirror_swaps_parts():
    k = geo.complete_bipartite_conduit(2)
    m = geo.mirror(k)
    assert np.array_equal(m.a, k.b) and np.array_equal(m.b, k.a)
    assert m.graph.same_edges(k.graph)


def test_mirror_involution_and_transpose():
    p2 = geo.projective_plane_incidence(2)
    assert geo.mirror(geo.mirror(p2)).same_orderings(p2)
    assert np.array_equal(geo.mirror(p2).biadjacency(), p2.biadjacency().T)


@pytest.mark.parametrize("kind,q,tau", [("Q", 2, 3), ("Q", 3, 3), ("H", 2, 5), ("K", 3, 1)])
def test_conduit_parameters(kind, q, tau):
    h = geo.conduit(kind, q)
    assert geo.conduit_tau(kind) == tau
    rep = verify_conduit(h, tau, geo.conduit_girth(kind))
    assert rep.passed


def test_plane_counts_as_two_but_crosses_in_three():
    h = geo.conduit("P", 2)
    assert geo.conduit_tau("P") == 2
    assert verify_conduit(h, 3, 6).passed and not verify_conduit(h, 2).passed


@given(st.sampled_from(["P", "Q"]), st.sampled_from([2, 3]), st.data())
def test_sampled_cross_pairs(kind, q, data):
    h = geo.conduit(kind, q)
    i = data.draw(st.integers(0, len(h.a) - 1))
    j = data.draw(st.integers(0, len(h.b) - 1))
    d = alg.bfs_distances(h.graph, int(h.a[i]))[h.b[j]]
    assert d <= 3 and d % 2 == 1


def test_generators_deterministic():
    a = geo.split_cayley_hexagon_incidence.__wrapped__(2)
    b = geo.split_cayley_hexagon_incidence.__wrapped__(2)
    assert a.graph.same_edges(b.graph) and a.same_orderings(b)
