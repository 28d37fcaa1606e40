from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gatewaylogic.canonical_flow import (
    REROUTE_CASES,
    FlowAssignment,
    KnowledgeProfile,
    ProfileBounds,
    augment_for_edge,
    build_base,
    build_flow,
    classify_reroute,
    find_gamma_path,
    gamma_path_problems,
    random_profile,
    reroute_to_match,
    scale_flow,
    validate_profile,
    verify_flow,
)
from gatewaylogic.catalog import reroute_fixtures
from gatewaylogic.errors import CaseViolation, InconsistentProfile, InvalidProfile, NoGammaPath, NonPositiveScale
from gatewaylogic.multigraph import EdgeEnd, Multigraph, two_stage_graph, line_graph

from helpers import bridges_by_removal


def conditions(vs):
    return {v.condition for v in vs}


def oracle_conditions(p, f, F) -> set:
    """Independent reading of the edge and vertex conditions."""
    g = p.graph
    bridges = bridges_by_removal(g)
    bad = set()
    for e in g.edge_ids:
        u0, u1 = g.endpoints(e)
        a, b = f[EdgeEnd(e, 0)], f[EdgeEnd(e, 1)]
        s = a + b
        if (s > 0) != p.sink[e]:
            bad.add("1c")
        if e in bridges:
            if not p.sink[e] and s != 0:
                bad.add("2a")
            if (a < 0 and not p.knows_side[EdgeEnd(e, 0)]) or (b < 0 and not p.knows_side[EdgeEnd(e, 1)]):
                bad.add("2b")
            if e in F and p.knows_delta[e] and not p.sink[e] and a >= 0 and b >= 0:
                bad.add("2c")
        else:
            if s < 0 and not p.knows_delta[e]:
                bad.add("3a")
            if e in F and p.knows_delta[e] and not p.sink[e] and s >= 0:
                bad.add("3b")
    for v in g.vertices:
        touching = [e for e in g.edge_ids if v in g.endpoints(e)]
        if any(p.sink[e] for e in touching):
            continue
        total = sum(f[EdgeEnd(e, side)] for e in touching for side in (0, 1) if g.endpoints(e)[side] == v)
        if total < 0:
            bad.add("local")
    return bad


def independent_path_check(p, gp) -> bool:
    g = p.graph
    edges, verts = gp.path.edges, gp.path.vertices
    bridges = bridges_by_removal(g)
    if len(set(edges)) != len(edges) or len(set(verts)) != len(verts):
        return False
    for i, v in enumerate(verts):
        if v not in g.endpoints(edges[i]) or v not in g.endpoints(edges[i + 1]):
            return False
    if not p.knows_side[g.end_at(edges[0], verts[0])]:
        return False
    for i, e in enumerate(edges[:-1]):
        if p.sink[e]:
            return False
        if i > 0 and e in bridges and not p.knows_side[g.end_at(e, verts[i])]:
            return False
    return p.sink[edges[-1]]


profile_seeds = st.integers(0, 10 ** 6)


def some_profile(seed, **kw):
    return random_profile(random.Random(seed), ProfileBounds(**kw) if kw else None)


# profiles

def test_validate_profile_examples():
    g = line_graph(["a", "b"])
    assert validate_profile(KnowledgeProfile(g)) == []
    mono = KnowledgeProfile(g, knows_side={EdgeEnd("a", 0): True})
    assert conditions(validate_profile(mono)) == {"monotonicity"}
    split = KnowledgeProfile(g, knows_delta={"a": True})
    assert conditions(validate_profile(split)) == {"split"}
    loop = KnowledgeProfile(Multigraph(["x"], {"l": ("x", "x")}))
    assert conditions(validate_profile(loop)) == {"loop"}


def test_build_base_refuses_bad_profile():
    with pytest.raises(InvalidProfile):
        build_base(KnowledgeProfile(line_graph(["a"]), knows_delta={"a": True}))


# verification

def test_verify_examples():
    g = two_stage_graph()
    p = KnowledgeProfile.build(g, sinks=["c"])
    assert verify_flow(p, build_base(p), []) == []
    assert conditions(verify_flow(p, FlowAssignment.zero(g), [])) == {"1c"}
    pair = Multigraph(["x", "y"], {"b": ("x", "y"), "e": ("x", "y")})
    blank = KnowledgeProfile(pair)
    loop_flow = FlowAssignment.from_edges({"b": (1, -1), "e": (-1, 1)})
    assert verify_flow(blank, loop_flow, pair.edge_ids) == []


def test_verify_reports_missing_ends():
    p = KnowledgeProfile(line_graph(["a"]))
    assert conditions(verify_flow(p, FlowAssignment({}), [])) == {"total"}


@settings(max_examples=200, deadline=None)
@given(profile_seeds, st.data())
def test_verify_matches_oracle(seed, data):
    p = some_profile(seed)
    g = p.graph
    values = {end: Fraction(data.draw(st.integers(-2, 2))) for end in g.all_ends()}
    f = FlowAssignment(values)
    F = data.draw(st.sets(st.sampled_from(g.edge_ids)))
    assert conditions(verify_flow(p, f, F)) == oracle_conditions(p, f, F)


# base flow

def test_build_base_examples():
    g = line_graph(["a", "b", "c", "d"])
    f = build_base(KnowledgeProfile.build(g, sinks=["d"]))
    assert f.pair("d") == (1, 1) and all(f.pair(e) == (0, 0) for e in "abc")
    assert build_base(KnowledgeProfile(g)) == FlowAssignment.zero(g)
    two = build_base(KnowledgeProfile.build(g, sinks=["a", "c"]))
    assert sum(1 for x in two.values() if x == 1) == 4


@settings(max_examples=150, deadline=None)
@given(profile_seeds)
def test_base_verifies_without_requirements(seed):
    p = some_profile(seed)
    assert verify_flow(p, build_base(p), []) == []


# paths

def test_gamma_path_to_adjacent_sink():
    g = line_graph(["e", "h"])
    p = KnowledgeProfile.build(g, sinks=["h"], knows=["e"], sides=[("e", "v1")])
    gp = find_gamma_path(p, "e")
    assert gp.edges == ("e", "h") and gp.path.vertices == ("v1",)
    assert gamma_path_problems(p, gp) == []


def test_gamma_path_without_sinks():
    g = line_graph(["e", "h"])
    p = KnowledgeProfile.build(g, knows=["e"], sides=[("e", "v1")])
    with pytest.raises(NoGammaPath):
        find_gamma_path(p, "e")


def test_interior_bridge_blocks_or_passes():
    g = two_stage_graph()
    blocked = KnowledgeProfile.build(g, sinks=["m''"], knows=["k"], sides=[("k", "u")])
    with pytest.raises(NoGammaPath):
        find_gamma_path(blocked, "k")
    open_ = KnowledgeProfile.build(g, sinks=["m''"], knows=["k", "m'"], sides=[("k", "u"), ("m'", "v")])
    gp = find_gamma_path(open_, "k")
    assert gp.edges[0] == "k" and gp.edges[-1] == "m''" and "m'" in gp.edges
    assert gamma_path_problems(open_, gp) == [] and independent_path_check(open_, gp)


@settings(max_examples=150, deadline=None)
@given(profile_seeds)
def test_found_paths_satisfy_certificates(seed):
    p = some_profile(seed)
    for e in p.graph.edge_ids:
        if p.sink[e] or not p.knows_delta[e]:
            continue
        try:
            gp = find_gamma_path(p, e)
        except NoGammaPath:
            continue
        assert independent_path_check(p, gp)
        assert gamma_path_problems(p, gp) == []


# augmentation

def test_augment_is_identity_without_knowledge():
    g = line_graph(["a", "b"])
    p = KnowledgeProfile.build(g, sinks=["b"])
    f = build_base(p)
    assert augment_for_edge(p, f, [], "a") == f


def test_augment_bridge_on_two_stage_graph():
    g = two_stage_graph()
    p = KnowledgeProfile.build(g, sinks=["c"], knows=["m"], sides=[("m", "q")])
    out = augment_for_edge(p, build_base(p), [], "m")
    a, b = out.pair("m")
    assert a + b == 0 and min(a, b) < 0
    assert verify_flow(p, out, ["m"]) == []


def test_augment_non_bridge_on_theta():
    g = Multigraph(["x", "y"], {"h": ("x", "y"), "a": ("x", "y"), "s": ("x", "y")})
    p = KnowledgeProfile.build(g, sinks=["s"], knows=["h"], sides=[("h", "y")])
    out = augment_for_edge(p, build_base(p), [], "h")
    assert out.edge_sum("h") < 0
    assert verify_flow(p, out, ["h"]) == []


@settings(max_examples=150, deadline=None)
@given(profile_seeds)
def test_augmentation_keeps_interior_sums(seed):
    p = some_profile(seed)
    f = build_base(p)
    done = set()
    for h in p.graph.edge_ids:
        if p.knows_delta[h] and not p.sink[h]:
            try:
                gp = find_gamma_path(p, h)
            except NoGammaPath:
                return
            out = augment_for_edge(p, f, done, h)
            for e in gp.edges[1:-1]:
                assert out.edge_sum(e) == f.edge_sum(e)
            f = out
        done.add(h)
        assert verify_flow(p, f, done) == []


# full construction

def test_build_flow_examples():
    g = line_graph(["a", "b", "c"])
    assert build_flow(KnowledgeProfile(g)) == FlowAssignment.zero(g)
    with pytest.raises(InconsistentProfile):
        build_flow(KnowledgeProfile.build(g, knows=["b"], sides=[("b", "v2")]))
    chain = line_graph(["b", "s"])
    p = KnowledgeProfile.build(chain, sinks=["s"], knows=["b"], sides=[("b", "v1")])
    f = build_flow(p)
    assert f.pair("b") != (0, 0) and f.edge_sum("b") == 0
    assert verify_flow(p, f, chain.edge_ids) == []


@settings(max_examples=200, deadline=None)
@given(profile_seeds)
def test_built_flows_verify_with_zero_and_sink_rules(seed):
    p = some_profile(seed)
    g = p.graph
    try:
        f = build_flow(p)
    except InconsistentProfile:
        assert any(p.knows_delta.values())
        return
    E = g.edge_ids
    assert verify_flow(p, f, E) == []
    for h in bridges_by_removal(g):
        if not p.sink[h]:
            for end in g.ends(h):
                assert (f[end] == 0) == (not p.knows_delta[h])
    if any(p.knows_delta[e] and not p.sink[e] for e in E):
        assert any(p.sink.values())
    for lam in (Fraction(1, 3), 2, 7):
        assert verify_flow(p, scale_flow(f, lam), E) == []


@settings(max_examples=200, deadline=None)
@given(profile_seeds)
def test_sink_free_knowledge_is_inconsistent(seed):
    p = some_profile(seed, sink_free_rate=1.0)
    if any(p.knows_delta.values()):
        with pytest.raises(InconsistentProfile):
            build_flow(p)
    else:
        assert build_flow(p) == FlowAssignment.zero(p.graph)


@settings(max_examples=150, deadline=None)
@given(profile_seeds, st.data())
def test_monotone_restriction(seed, data):
    p = some_profile(seed)
    try:
        f = build_flow(p)
    except InconsistentProfile:
        return
    sub = data.draw(st.sets(st.sampled_from(p.graph.edge_ids)))
    assert verify_flow(p, f, sub) == []


# scaling

def test_scale_examples():
    g = line_graph(["a", "s"])
    p = KnowledgeProfile.build(g, sinks=["s"], knows=["a"], sides=[("a", "v1")])
    f = build_flow(p)
    assert scale_flow(f, 1) == f
    assert verify_flow(p, scale_flow(f, 2), g.edge_ids) == []
    third = scale_flow(f, Fraction(1, 3))
    assert all(third[end] * 3 == f[end] for end in f)
    with pytest.raises(NonPositiveScale):
        scale_flow(f, 0)
    with pytest.raises(NonPositiveScale):
        scale_flow(f, -1)


# rerouting

FIXTURES = reroute_fixtures()


def test_fixtures_cover_every_case():
    assert {fx.case for fx in FIXTURES} == set(REROUTE_CASES)


@pytest.mark.parametrize("fx", FIXTURES, ids=[fx.name for fx in FIXTURES])
def test_reroute_fixture(fx):
    p, E = fx.profile, fx.profile.graph.edge_ids
    assert verify_flow(p, fx.base, E) == []
    assert classify_reroute(p, fx.base, fx.edge, fx.target) == fx.case
    out = reroute_to_match(p, fx.base, fx.edge, fx.target)
    assert out.pair(fx.edge) == tuple(Fraction(x) for x in fx.target)
    assert verify_flow(p, out, E) == []
    assert oracle_conditions(p, out, set(E)) == set()


def test_same_sign_bridge_is_scaled_globally():
    fx = next(f for f in FIXTURES if f.case == "IIIb")
    out = reroute_to_match(fx.profile, fx.base, fx.edge, fx.target)
    assert fx.base.pair("h") == (-2, 2)
    assert out == scale_flow(fx.base, Fraction(3, 2))


def test_mirrored_opposite_sign_case():
    fx = next(f for f in FIXTURES if f.name.endswith("mirrored"))
    assert fx.base.pair("h")[0] > 0 > fx.target[0]


def test_reroute_to_own_values():
    for fx in FIXTURES:
        for e in fx.profile.graph.edge_ids:
            out = reroute_to_match(fx.profile, fx.base, e, fx.base.pair(e))
            assert out.pair(e) == fx.base.pair(e)


def test_reroute_rejects_impossible_target():
    fx = next(f for f in FIXTURES if f.case == "IIIa")
    with pytest.raises(CaseViolation):
        reroute_to_match(fx.profile, fx.base, "h", (1, 0))


@settings(max_examples=150, deadline=None)
@given(profile_seeds, st.sampled_from([Fraction(1, 2), 3, 5]))
def test_reroute_to_values_of_another_flow(seed, lam):
    p = some_profile(seed)
    try:
        base = build_flow(p)
    except InconsistentProfile:
        return
    other = scale_flow(base, lam)
    E = p.graph.edge_ids
    for h in E:
        out = reroute_to_match(p, base, h, other.pair(h))
        assert out.pair(h) == other.pair(h)
        assert verify_flow(p, out, E) == []
