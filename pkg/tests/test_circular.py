import json

import networkx as nx
import numpy as np
import pytest
from conftest import to_nx
from hypothesis import given
from hypothesis import strategies as st

from girthforge import algorithms as alg
from girthforge import geometry as geo
from girthforge.circular import (CYCLE, MIRRORED, PATH, CircularSpec, ConduitRef, HopSpec,
                                 circular_construct, debruijn_circular, debruijn_graph,
                                 hamming_circular, path_construct, plan, spec_from_dict,
                                 spec_json, spec_to_dict, unfold)
from girthforge.errors import BadParameters, ResourceLimit, SelfDualityRequired, SpecValidation


def hop(kind, q, coord, mirrored=False):
    return HopSpec(ConduitRef(kind, q), coord, MIRRORED if mirrored else "forward")


# -- Hamming and De Bruijn circular graphs -----------------------------------------

def test_debruijn_k2():
    assert debruijn_graph(1, 2).edge_set() == {(0, 1)}


def test_debruijn_t2():
    g = debruijn_graph(2, 2)
    assert g.n == 4 and alg.diameter(g) <= 2


def test_debruijn_t3_cube_complete():
    g = debruijn_graph(3, 2)
    assert g.n == 8 and alg.power(g, 3).m == 28


@given(st.integers(1, 4), st.integers(1, 3))
def test_debruijn_diameter_and_degree(t, k):
    g = debruijn_graph(t, k)
    assert g.n == k**t and alg.max_degree(g) <= 2 * k
    assert alg.diameter(g) <= t


def test_debruijn_circular_t2_d4():
    g = debruijn_circular(2, 4)
    assert g.n == 8
    assert alg.max_degree(g) <= 4
    assert alg.min_degree(g) == alg.max_degree(g) == 3


def test_debruijn_circular_triangle():
    g = debruijn_circular(3, 2)
    assert nx.is_isomorphic(to_nx(g), nx.cycle_graph(3))


def test_debruijn_circular_bipartite_even_t():
    assert alg.is_bipartite(debruijn_circular(4, 4)).bipartite


@given(st.integers(2, 5), st.sampled_from([2, 4, 6]))
def test_prop2_graph_properties(t, d):
    if (d // 2) ** t * t > 20000:
        return
    for g in (debruijn_circular(t, d), hamming_circular(t, d)):
        N = (d // 2) ** t
        assert g.n == t * N and alg.max_degree(g) <= d
        assert alg.verify_clique_in_power(g, t, range(N)).verified
        assert alg.is_bipartite(g).bipartite == (t % 2 == 0)


def test_hamming_figure1():
    g = hamming_circular(3, 4)
    assert g.n == 24 and alg.min_degree(g) == alg.max_degree(g) == 4
    assert alg.verify_clique_in_power(g, 3, range(8)).verified
    # triangles: three tuples that differ only in successive coordinates
    assert alg.girth(g) == 3


def test_hamming_t2_d2():
    g = hamming_circular(2, 2)
    assert g.n == 2 and g.m == 1


def test_hamming_t5_girth4():
    assert alg.girth(hamming_circular(5, 4)) == 4


@pytest.mark.parametrize("t,d", [(1, 4), (3, 3), (3, 0)])
def test_prop2_bad_parameters(t, d):
    with pytest.raises(BadParameters):
        hamming_circular(t, d)
    with pytest.raises(BadParameters):
        debruijn_circular(t, d)


# -- circular construction ---------------------------------------------------------

def test_theorem3_qqq_plan():
    p = plan(CircularSpec((hop("Q", 2, 0), hop("Q", 2, 1), hop("Q", 2, 2)), CYCLE))
    assert (p.t, p.girth_floor, p.vertices, p.clique_size) == (9, 3, 10125, 3375)
    assert p.max_degree_bound == 6


def test_two_hop_mirror_cycle_rejected():
    with pytest.raises(SpecValidation):
        circular_construct(CircularSpec((hop("P", 2, 0), hop("P", 2, 0, True)), CYCLE))


def test_t4_mirror_spec():
    spec = CircularSpec((hop("P", 2, 0), hop("P", 2, 0, True), hop("P", 2, 1), hop("P", 2, 1, True)))
    b = circular_construct(spec)
    g = b.graph
    assert g.n == 196 and alg.max_degree(g) <= 6
    assert b.girth_floor == 4 and alg.girth(g) >= 4
    assert alg.is_bipartite(g).bipartite
    assert alg.verify_clique_in_power(g, 4, b.clique).verified


def test_t4_path_spec():
    b = path_construct(CircularSpec((hop("P", 2, 0), hop("P", 2, 1)), PATH, clique_parts=(1,)))
    g = b.graph
    assert g.n == 147 and alg.max_degree(g) == 6 and alg.girth(g) == 6
    assert alg.verify_clique_in_power(g, 4, np.arange(49, 98)).verified


def test_single_hop_path_is_conduit():
    k = geo.complete_bipartite_conduit(3)
    b = circular_construct(CircularSpec((HopSpec(k, 0),), PATH))
    assert nx.is_isomorphic(to_nx(b.graph), to_nx(k.graph))


def test_q_path_clique_needs_eighth_power():
    b = circular_construct(CircularSpec((hop("Q", 2, 0), hop("Q", 2, 1)), PATH, clique_parts=(1,)))
    assert len(b.clique) == 225 and b.plan.t == 8
    assert alg.verify_clique_in_power(b.graph, 8, b.clique).verified
    cert = alg.verify_clique_in_power(b.graph, 6, b.clique)
    assert not cert.verified and cert.missing_pairs == 7200


def test_path_construct_needs_path():
    with pytest.raises(SpecValidation):
        path_construct(CircularSpec((hop("Q", 2, 0), hop("Q", 2, 1)), CYCLE))


def test_unfold_q2():
    spec = unfold(CircularSpec((hop("Q", 2, 0), hop("Q", 2, 1))), 3)
    assert spec.parts == 6
    b = circular_construct(spec)
    g = b.graph
    assert g.n == 1350 and alg.max_degree(g) <= 6 and alg.girth(g) >= 6
    assert alg.is_bipartite(g).bipartite
    assert b.plan.clique_parts == (0, 2, 4) and len(b.clique) == 675
    assert alg.verify_clique_in_power(g, 6, b.clique).verified


def test_unfold_t10_plan():
    spec = unfold(CircularSpec((hop("H", 3, 0), hop("H", 3, 1))), 5)
    p = plan(spec)
    assert spec.parts == 10 and p.vertices == 10 * 364**2 and p.t == 10


def test_unfold_needs_self_duality():
    with pytest.raises(SelfDualityRequired):
        plan(unfold(CircularSpec((hop("Q", 3, 0), hop("Q", 3, 1))), 3))


def test_plain_lambda5_no_short_cycles():
    spec = CircularSpec(tuple(hop("P", 2, i) for i in range(5)))
    b = circular_construct(spec)
    assert b.girth_floor == 5
    assert alg.forbidden_cycles(b.graph, [4])[4].witness is None
    assert alg.girth(b.graph) >= 5


def test_resource_limit():
    spec = unfold(CircularSpec((hop("H", 3, 0), hop("H", 3, 1), hop("H", 3, 2))), 5)
    with pytest.raises(ResourceLimit):
        circular_construct(spec)


def test_spec_json_roundtrip():
    spec = unfold(CircularSpec((hop("Q", 2, 0), hop("Q", 2, 1))), 3)
    d = spec_to_dict(spec)
    back = spec_from_dict(json.loads(spec_json(spec)))
    assert back.hops == spec.hops and plan(back).clique_parts == plan(spec).clique_parts
    assert d["expected"]["clique"]["size"] == 675


def test_spec_from_dict_malformed():
    with pytest.raises(SpecValidation):
        spec_from_dict({"hops": [{"coord": 0}]})


@given(st.lists(st.sampled_from(["Q", "P"]), min_size=2, max_size=3), st.booleans())
def test_small_specs_meet_floor(kinds, as_path):
    spec = CircularSpec(tuple(hop(k, 2, i) for i, k in enumerate(kinds)), PATH if as_path else CYCLE)
    try:
        p = plan(spec)
    except SpecValidation:
        return
    if p.vertices > 40000:
        return
    b = circular_construct(spec)
    g = b.graph
    assert g.n == p.vertices and alg.max_degree(g) <= p.max_degree_bound
    assert alg.girth(g) >= b.girth_floor
    assert alg.verify_clique_in_power(g, p.t, b.clique).verified
