"""Named signatures and protocols used by the fixtures, scripts and tests.

The two encryption protocols live on the four-channel network ``m, k, c, m'``:
vertex ``q`` reads the message ``m`` and key ``k`` and emits the ciphertext
``c``; vertex ``u`` reads ``c`` and ``k`` and emits the decoded ``m'``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .canonical_flow import FlowAssignment, KnowledgeProfile, build_flow
from .formula import Signature
from .multigraph import EdgeEnd, Multigraph, two_stage_graph, line_graph
from .protocol import Protocol


def line_signature(edges: Sequence[str]) -> Signature:
    return Signature.with_default_props(line_graph(list(edges)))


def two_stage_signature() -> Signature:
    return Signature.with_default_props(two_stage_graph())


def encryption_graph() -> Multigraph:
    return Multigraph(
        ["p", "q", "u", "v"],
        {"m": ("p", "q"), "k": ("q", "u"), "c": ("q", "u"), "m'": ("u", "v")},
    )


def bits(width: int) -> list[str]:
    return ["".join(t) for t in product("01", repeat=width)]


def xor(a: str, b: str) -> str:
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def hamming(a: str, b: str) -> int:
    return sum(x != y for x, y in zip(a, b))


def encryption_protocol(width: int, max_errors: int) -> Protocol:
    """Bit strings of ``width`` on every channel; each stage may flip up to ``max_errors`` bits.

    Propositions ``eq_<w>`` on ``m'`` hold when the decoded message equals ``w``.
    """
    words = bits(width)
    g = encryption_graph()
    sig = Signature(g, {"m'": [f"eq_{w}" for w in words]})
    # incident edges sorted: q -> (c, k, m); u -> (c, k, m')
    q_local = [(c, k, m) for m in words for k in words for c in words if hamming(c, xor(m, k)) <= max_errors]
    u_local = [(c, k, m2) for c in words for k in words for m2 in words if hamming(m2, xor(c, k)) <= max_errors]
    return Protocol(
        sig,
        {e: words for e in g.edge_ids},
        {"q": q_local, "u": u_local},
        {f"eq_{w}": [w] for w in words},
    )


def p1_protocol() -> Protocol:
    """One-bit exact encryption: ``c = m xor k`` and ``m' = c xor k``; ``p1`` holds when ``m' = 1``."""
    g = encryption_graph()
    sig = Signature(g, {"m'": ["p1"]})
    q_local = [(xor(m, k), k, m) for m in "01" for k in "01"]
    u_local = [(c, k, xor(c, k)) for c in "01" for k in "01"]
    return Protocol(sig, {e: ["0", "1"] for e in g.edge_ids}, {"q": q_local, "u": u_local}, {"p1": ["1"]})


def p2_protocol(width: int = 4) -> Protocol:
    """Noisy encryption: each of the two stages may flip at most one bit."""
    return encryption_protocol(width, 1)


# Hand-built reroute cases, one per branch of ``reroute_to_match``.

@dataclass(frozen=True)
class RerouteFixture:
    name: str
    case: str
    profile: KnowledgeProfile
    base: FlowAssignment
    edge: str
    target: tuple


def reroute_fixtures() -> list[RerouteFixture]:
    two = Multigraph(["x", "y"], {"h": ("x", "y")})
    sink_edge = KnowledgeProfile(two, {"h": True}, {"h": True}, {EdgeEnd("h", 1): True})

    parallel = Multigraph(["x", "y"], {"h": ("x", "y"), "e": ("x", "y")})
    blank_cycle = KnowledgeProfile(parallel)

    triangle = Multigraph(["x", "y", "z"], {"h": ("x", "y"), "a": ("y", "z"), "s": ("z", "x")})
    knowing_cycle = KnowledgeProfile.build(triangle, sinks=["s"], knows=["h"], sides=[("h", "x"), ("h", "y")])

    lone_bridge = KnowledgeProfile(line_graph(["h"]))

    tail = Multigraph(["w", "x", "y"], {"s": ("x", "w"), "h": ("x", "y")})
    one_side = KnowledgeProfile.build(tail, sinks=["s"], knows=["h"], sides=[("h", "x")])

    chain = Multigraph(["w", "x", "y", "z"], {"s": ("w", "x"), "h": ("x", "y"), "s2": ("y", "z")})
    both_sides = KnowledgeProfile.build(chain, sinks=["s", "s2"], knows=["h"], sides=[("h", "x"), ("h", "y")])

    return [
        RerouteFixture("sink edge", "I", sink_edge, build_flow(sink_edge), "h", (3, -1)),
        RerouteFixture("blind cycle", "IIa", blank_cycle, build_flow(blank_cycle), "h", (5, -5)),
        RerouteFixture("knowing cycle", "IIb", knowing_cycle, build_flow(knowing_cycle), "h", (-1, -4)),
        RerouteFixture("idle bridge", "IIIa", lone_bridge, build_flow(lone_bridge), "h", (0, 0)),
        RerouteFixture("same-sign bridge", "IIIb", one_side, build_flow(one_side), "h", (-3, 3)),
        RerouteFixture("opposite-sign bridge", "IIIc", both_sides, build_flow(both_sides), "h", (3, -3)),
        RerouteFixture("opposite-sign bridge, mirrored", "IIIc", both_sides,
                       FlowAssignment.from_edges({"s": (1, 1), "h": (2, -2), "s2": (1, 1)}), "h", (-1, 1)),
    ]
