from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from gatewaylogic.errors import DisconnectedGraph, InvalidGraph, IsBridge, UnknownEdge, UnknownVertex
from gatewaylogic.multigraph import EdgeEnd, Multigraph, Path, line_graph, random_connected_multigraph

from helpers import bridges_by_removal


def simple_paths(g: Multigraph, start: str):
    """Every path (edges, vertices) beginning with ``start``, by brute force."""
    out = []

    def grow(edges, verts, at):
        out.append((tuple(edges), tuple(verts)))
        for e in g.edge_ids:
            if e in edges:
                continue
            ends = g.endpoints(e)
            if at not in ends or at in verts:
                continue
            nxt = ends[1] if ends[0] == at else ends[0]
            grow(edges + [e], verts + [at], nxt)

    for first_end in set(g.endpoints(start)):
        grow([start], [], first_end)
    return {p for p in out}


def gateway_by_paths(g: Multigraph, gate, a_set, b_set) -> bool:
    for a in a_set:
        for edges, _ in simple_paths(g, a):
            if edges[-1] in b_set and gate not in edges:
                return False
    return True


graph_seeds = st.integers(0, 10 ** 6)


def graph_from(seed, loops=True):
    rng = random.Random(seed)
    return random_connected_multigraph(rng, 4, 6, loops=loops and seed % 3 == 0)


# examples

def test_incident_edges_of_q(fig3):
    assert fig3.incident_edges("q") == {"m", "k", "c"}


def test_endpoints_of_k(fig3):
    assert set(fig3.endpoints("k")) == {"q", "u"}


def test_isolated_vertex_has_no_edges():
    g = Multigraph(["a", "b", "z"], {"e": ("a", "b")})
    assert g.incident_edges("z") == frozenset()


def test_unknown_vertex_and_edge(fig3):
    with pytest.raises(UnknownVertex):
        fig3.incident_edges("nowhere")
    with pytest.raises(UnknownEdge):
        fig3.component_without("q", "nothing")


def test_bad_graphs_rejected():
    with pytest.raises(InvalidGraph):
        Multigraph(["a"], {"e": ("a", "b")})
    with pytest.raises(InvalidGraph):
        Multigraph(["a", "a"], {})


def test_component_without(fig3):
    assert fig3.component_without("u", "m'") == ({"p", "q", "u"}, {"m", "k", "c"})
    verts, edges = fig3.component_without("u", "k")
    assert verts == set(fig3.vertices)
    assert edges == set(fig3.edge_ids) - {"k"}


def test_component_single_edge():
    g = line_graph(["e"])
    assert g.component_without("v0", "e") == ({"v0"}, set())


def test_bridges_examples(fig3):
    assert fig3.bridges() == {"m", "m'", "m''"}
    tri = Multigraph(["a", "b", "c"], {"x": ("a", "b"), "y": ("b", "c"), "z": ("c", "a")})
    assert tri.bridges() == set()
    assert line_graph(["e", "f"]).bridges() == {"e", "f"}


def test_bridges_need_connected_graph():
    with pytest.raises(DisconnectedGraph):
        Multigraph(["a", "b"], {}).bridges()


def test_gateway_examples(fig3):
    assert fig3.is_gateway("m'", {"m", "k"}, {"k'", "c'"})
    assert fig3.is_gateway("k", {"k"}, {"m", "m''"})
    assert not fig3.is_gateway("k", {"m"}, {"m'"})
    for e in fig3.edge_ids:
        for f in fig3.edge_ids:
            assert fig3.is_gateway(e, {e}, {f})


def test_non_gateway_witness_path(fig3):
    witness = [edges for edges, _ in simple_paths(fig3, "m") if edges[-1] == "m'" and "k" not in edges]
    assert ("m", "c", "m'") in witness


def test_cycle_examples(fig3):
    tri = Multigraph(["a", "b", "c"], {"x": ("a", "b"), "y": ("b", "c"), "z": ("c", "a")})
    cyc = tri.find_cycle_through("x")
    assert cyc.circular and set(cyc.edges) == {"x", "y", "z"} and cyc.problems(tri) == []
    cyc = fig3.find_cycle_through("k")
    assert cyc.edges == ("k", "c", "k") and cyc.problems(fig3) == []
    with pytest.raises(IsBridge):
        fig3.find_cycle_through("m")


def test_loop_is_its_own_cycle():
    g = Multigraph(["a", "b"], {"l": ("a", "a"), "e": ("a", "b")})
    assert g.bridges() == {"e"}
    cyc = g.find_cycle_through("l")
    assert cyc.edges == ("l", "l") and cyc.problems(g) == []
    assert g.ends_at("a") == [EdgeEnd("e", 0), EdgeEnd("l", 0), EdgeEnd("l", 1)] or len(g.ends_at("a")) == 3


def test_connectivity_examples(fig3):
    assert fig3.is_connected()
    assert not Multigraph(["a", "b"], {}).is_connected()
    assert Multigraph(["a"], {}).is_connected()


def test_path_problems_detects_breaks(fig3):
    assert Path(("m", "k", "m'"), ("q", "u")).problems(fig3) == []
    assert Path(("m", "m'"), ("q",)).problems(fig3)
    assert Path(("m", "k", "m"), ("q", "u")).problems(fig3)


# properties

@settings(max_examples=150, deadline=None)
@given(graph_seeds)
def test_bridges_match_removal(seed):
    g = graph_from(seed)
    assert g.bridges() == bridges_by_removal(g)


@settings(max_examples=150, deadline=None)
@given(graph_seeds)
def test_component_sides_of_each_edge(seed):
    g = graph_from(seed)
    for e in g.edge_ids:
        if g.is_loop(e):
            continue
        u, w = g.endpoints(e)
        cu, cw = g.component_without(u, e), g.component_without(w, e)
        if e in g.bridges():
            assert cu[0] | cw[0] == set(g.vertices) and not cu[0] & cw[0]
        else:
            assert cu == cw


@settings(max_examples=150, deadline=None)
@given(graph_seeds, st.data())
def test_gateway_matches_path_enumeration(seed, data):
    g = graph_from(seed)
    edges = g.edge_ids
    gate = data.draw(st.sampled_from(edges))
    a_set = data.draw(st.sets(st.sampled_from(edges), min_size=1, max_size=3))
    b_set = data.draw(st.sets(st.sampled_from(edges), min_size=1, max_size=3))
    assert g.is_gateway(gate, a_set, b_set) == gateway_by_paths(g, gate, a_set, b_set)


@settings(max_examples=100, deadline=None)
@given(graph_seeds, st.data())
def test_bridge_separates_its_sides(seed, data):
    g = graph_from(seed)
    bridges = sorted(g.bridges())
    if not bridges:
        return
    b = data.draw(st.sampled_from(bridges))
    u, w = g.endpoints(b)
    left = sorted(g.component_without(u, b)[1] | {b})
    right = sorted(g.component_without(w, b)[1] | {b})
    a_set = data.draw(st.sets(st.sampled_from(left), min_size=1))
    b_set = data.draw(st.sets(st.sampled_from(right), min_size=1))
    assert g.is_gateway(b, a_set, b_set)


@settings(max_examples=150, deadline=None)
@given(graph_seeds)
def test_cycles_are_valid_paths(seed):
    g = graph_from(seed)
    for e in g.edge_ids:
        if e in g.bridges():
            with pytest.raises(IsBridge):
                g.find_cycle_through(e)
            continue
        cyc = g.find_cycle_through(e)
        assert cyc.circular and cyc.edges[0] == cyc.edges[-1] == e
        assert cyc.problems(g) == []
        assert not set(cyc.edges) & g.bridges()
