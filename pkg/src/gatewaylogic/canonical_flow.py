"""Flow constructions over finite knowledge profiles, in exact rational arithmetic.

A knowledge profile records, per edge, three kinds of boolean fact about a
fixed target disjunction: whether the edge's own disjunct holds (``sink``),
whether an observer of the edge knows the whole disjunction
(``knows_delta``), and, per edge end, whether the observer knows that some
disjunct holds on the far side of that end (``knows_side``). The end
``EdgeEnd(e, s)`` sits at vertex ``graph.vertex_of(EdgeEnd(e, s))`` and its
``knows_side`` flag speaks about the component reached through that vertex
once ``e`` is removed.

A flow assigns an exact rational to every edge end. ``verify_flow`` checks
the edge conditions and the vertex condition; the builders construct flows
that pass them, or report why none can be found.

Condition ids used in reports:

    1c     edge sum is positive exactly on sink edges
    2a     a bridge that is not a sink carries zero net flow
    2b     a negative end of a bridge needs knows_side at that end
    2c     a required bridge that knows but is not a sink has a negative end
    3a     a non-bridge with negative sum must know
    3b     a required non-bridge that knows but is not a sink has negative sum
    local  with no sink incident, the ends at a vertex sum to at least zero
"""
from __future__ import annotations

import math
import random
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import (
    CaseViolation,
    InconsistentProfile,
    InvalidInput,
    InvalidProfile,
    NoGammaPath,
    NonPositiveScale,
)
from .multigraph import EdgeEnd, EdgeId, Multigraph, Path, VertexId, random_connected_multigraph


@dataclass(frozen=True)
class Violation:
    condition: str
    edge: EdgeId | None = None
    where: str | None = None
    message: str = ""

    def __str__(self):
        loc = self.edge if self.where is None else f"{self.edge}@{self.where}" if self.edge else self.where
        return f"[{self.condition}] {loc}: {self.message}"


@dataclass(frozen=True, eq=True)
class KnowledgeProfile:
    graph: Multigraph
    sink: Mapping[EdgeId, bool] = field(default_factory=dict)
    knows_delta: Mapping[EdgeId, bool] = field(default_factory=dict)
    knows_side: Mapping[EdgeEnd, bool] = field(default_factory=dict)

    __hash__ = None

    def __post_init__(self):
        g = self.graph
        for name in ("sink", "knows_delta"):
            given = getattr(self, name)
            for e in given:
                g.endpoints(e)
            object.__setattr__(self, name, {e: bool(given.get(e, False)) for e in g.edge_ids})
        sides = {}
        for end, flag in self.knows_side.items():
            end = EdgeEnd(*end)
            g.endpoints(end.edge)
            if end.side not in (0, 1):
                raise InvalidProfile(f"bad end side {end.side}")
            sides[end] = bool(flag)
        object.__setattr__(self, "knows_side", {end: sides.get(end, False) for end in g.all_ends()})

    @classmethod
    def build(cls, graph: Multigraph, sinks: Iterable[EdgeId] = (), knows: Iterable[EdgeId] = (),
              sides: Iterable[tuple[EdgeId, VertexId]] = ()) -> "KnowledgeProfile":
        """Convenience constructor; ``sides`` lists ``(edge, vertex)`` pairs naming the end at ``vertex``."""
        return cls(
            graph,
            {e: True for e in sinks},
            {e: True for e in knows},
            {graph.end_at(e, v): True for e, v in sides},
        )

    def side(self, e: EdgeId, v: VertexId) -> bool:
        return self.knows_side[self.graph.end_at(e, v)]


class FlowAssignment(Mapping):
    """An immutable map from every edge end to an exact rational."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[EdgeEnd, object]):
        self._values = {EdgeEnd(*end): Fraction(x) for end, x in values.items()}

    @classmethod
    def zero(cls, graph: Multigraph) -> "FlowAssignment":
        return cls({end: 0 for end in graph.all_ends()})

    @classmethod
    def from_edges(cls, pairs: Mapping[EdgeId, tuple]) -> "FlowAssignment":
        """Build from ``{edge: (value at side 0, value at side 1)}``."""
        return cls({EdgeEnd(e, s): v[s] for e, v in pairs.items() for s in (0, 1)})

    def __getitem__(self, end):
        return self._values[EdgeEnd(*end)]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        if isinstance(other, FlowAssignment):
            return self._values == other._values
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._values.items()))

    def __repr__(self):
        body = ", ".join(f"{e}[{s}]={v}" for (e, s), v in sorted(self._values.items()))
        return f"FlowAssignment({body})"

    def pair(self, e: EdgeId) -> tuple[Fraction, Fraction]:
        return self._values[EdgeEnd(e, 0)], self._values[EdgeEnd(e, 1)]

    def edge_sum(self, e: EdgeId) -> Fraction:
        a, b = self.pair(e)
        return a + b

    def max_abs(self) -> Fraction:
        return max((abs(x) for x in self._values.values()), default=Fraction(0))

    def updated(self, changes: Mapping[EdgeEnd, object]) -> "FlowAssignment":
        out = dict(self._values)
        out.update({EdgeEnd(*k): Fraction(v) for k, v in changes.items()})
        return FlowAssignment(out)


# Profile and flow validation

def validate_profile(p: KnowledgeProfile) -> list[Violation]:
    """Every violated profile invariant (empty when the profile is well formed)."""
    g = p.graph
    out = []
    if not g.is_connected():
        out.append(Violation("connected", None, None, "the graph is not connected"))
        return out
    for e in g.edge_ids:
        if g.is_loop(e):
            out.append(Violation("loop", e, None, "loops are not supported by flow constructions"))
        ends = g.ends(e)
        for end in ends:
            if p.knows_side[end] and not p.knows_delta[e]:
                out.append(Violation("monotonicity", e, g.vertex_of(end), "knows a side but not the whole disjunction"))
        if p.knows_delta[e] and not p.sink[e] and not any(p.knows_side[end] for end in ends):
            out.append(Violation("split", e, None, "knows the disjunction, is no sink, and knows neither side"))
    return out


def _edge_violations(p: KnowledgeProfile, e: EdgeId, a: Fraction, b: Fraction, required: bool) -> list[Violation]:
    g = p.graph
    out = []
    total = a + b
    sink, knows = p.sink[e], p.knows_delta[e]
    if (total > 0) != sink:
        out.append(Violation("1c", e, None, f"edge sum {total} but sink is {sink}"))
    if e in g.bridges():
        if not sink and total != 0:
            out.append(Violation("2a", e, None, f"bridge without sink has sum {total}"))
        for end, x in zip(g.ends(e), (a, b)):
            if x < 0 and not p.knows_side[end]:
                out.append(Violation("2b", e, g.vertex_of(end), f"negative end {x} without knows_side"))
        if required and knows and not sink and not (a < 0 or b < 0):
            out.append(Violation("2c", e, None, "knowing bridge needs a negative end"))
    else:
        if total < 0 and not knows:
            out.append(Violation("3a", e, None, f"negative sum {total} without knows_delta"))
        if required and knows and not sink and not total < 0:
            out.append(Violation("3b", e, None, f"knowing non-bridge needs a negative sum, has {total}"))
    return out


def verify_flow(p: KnowledgeProfile, f: Mapping[EdgeEnd, Fraction], F: Iterable[EdgeId]) -> list[Violation]:
    """All violated conditions; the edges in ``F`` are held to the stronger 2c and 3b."""
    g = p.graph
    required = set(F)
    for e in required:
        g.endpoints(e)
    missing = [end for end in g.all_ends() if end not in f]
    if missing:
        return [Violation("total", end.edge, str(end.side), "no value for this end") for end in missing]
    out = []
    for e in g.edge_ids:
        out += _edge_violations(p, e, Fraction(f[EdgeEnd(e, 0)]), Fraction(f[EdgeEnd(e, 1)]), e in required)
    for v in g.vertices:
        ends = g.ends_at(v)
        if any(p.sink[end.edge] for end in ends):
            continue
        total = sum((Fraction(f[end]) for end in ends), Fraction(0))
        if total < 0:
            out.append(Violation("local", None, v, f"ends sum to {total} with no sink incident"))
    return out


def scale_flow(f: FlowAssignment, lam) -> FlowAssignment:
    lam = Fraction(lam)
    if lam <= 0:
        raise NonPositiveScale(f"scale factor must be positive, got {lam}")
    return FlowAssignment({end: lam * x for end, x in f.items()})


def build_base(p: KnowledgeProfile) -> FlowAssignment:
    """One unit on both ends of every sink edge, zero elsewhere."""
    bad = validate_profile(p)
    if bad:
        raise InvalidProfile("; ".join(map(str, bad)))
    return FlowAssignment({end: 1 if p.sink[end.edge] else 0 for end in p.graph.all_ends()})


# Path search

@dataclass(frozen=True)
class GammaPath:
    """A path from a non-sink edge to a sink, with the ends the constructions push on.

    ``tails[i]`` is the end of ``edges[i]`` at ``v_i`` (for ``i = 0`` the end
    away from the path); ``heads[i]`` is its end at ``v_{i+1}`` and exists for
    every edge but the last.
    """

    path: Path
    tails: tuple[EdgeEnd, ...]
    heads: tuple[EdgeEnd, ...]
    certificates: tuple[str, ...]

    @property
    def edges(self):
        return self.path.edges


def gamma_path_problems(p: KnowledgeProfile, gp: GammaPath) -> list[str]:
    """Independent re-check of the path conditions against the profile."""
    g = p.graph
    out = list(gp.path.problems(g))
    edges, verts = gp.path.edges, gp.path.vertices
    if len(edges) < 2:
        out.append("a path needs at least two edges")
        return out
    bridges = g.bridges()
    if not p.side(edges[0], verts[0]):
        out.append("start edge does not know the side it leaves through")
    for i, e in enumerate(edges[:-1]):
        if p.sink[e]:
            out.append(f"edge {e} before the end is a sink")
        if e in bridges and not p.side(e, verts[i]):
            out.append(f"bridge {e} does not know the side toward {verts[i]}")
    if not p.sink[edges[-1]]:
        out.append("last edge is not a sink")
    return out


def _ends_along(g: Multigraph, edges, verts):
    first_head = g.end_at(edges[0], verts[0])
    tails = [first_head.other()]
    heads = [first_head]
    for i in range(1, len(edges)):
        tails.append(g.end_at(edges[i], verts[i - 1]))
        if i < len(edges) - 1:
            heads.append(g.end_at(edges[i], verts[i]))
    return tuple(tails), tuple(heads)


def find_gamma_path(p: KnowledgeProfile, e: EdgeId, toward: EdgeEnd | None = None) -> GammaPath:
    """Breadth-first search for a path from ``e`` to a sink edge.

    The walk leaves ``e`` through the vertex of ``toward``; with ``toward``
    omitted, the ends of ``e`` whose ``knows_side`` holds are tried in side
    order. Sinks at a vertex are preferred over going further, and ties are
    broken by sorted edge id.
    """
    g = p.graph
    if p.sink[e]:
        raise InvalidInput(f"{e} is a sink; paths start at non-sink edges")
    if toward is not None:
        toward = EdgeEnd(*toward)
        if toward.edge != e:
            raise InvalidInput(f"{toward} is not an end of {e}")
        if not p.knows_side[toward]:
            raise InvalidInput(f"{e} does not know the side at {g.vertex_of(toward)}")
        candidates = [toward]
    else:
        if not p.knows_delta[e]:
            raise InvalidInput(f"{e} does not know the disjunction")
        candidates = [end for end in g.ends(e) if p.knows_side[end]]
    for start in candidates:
        found = _search_from(p, e, g.vertex_of(start))
        if found is not None:
            return found
    raise NoGammaPath(f"no path from {e} reaches a sink under the profile's knowledge")


def _search_from(p: KnowledgeProfile, e0: EdgeId, v1: VertexId) -> GammaPath | None:
    g = p.graph
    bridges = g.bridges()
    prev: dict[VertexId, tuple[VertexId, EdgeId] | None] = {v1: None}
    queue = deque([v1])
    while queue:
        x = queue.popleft()
        ends = sorted(g.ends_at(x))
        sink_here = next((end.edge for end in ends if p.sink[end.edge] and end.edge != e0), None)
        if sink_here is not None:
            verts, mids = [x], []
            while prev[verts[-1]] is not None:
                w, via = prev[verts[-1]]
                mids.append(via)
                verts.append(w)
            verts.reverse()
            mids.reverse()
            edges = (e0, *mids, sink_here)
            path = Path(edges, tuple(verts))
            tails, heads = _ends_along(g, edges, verts)
            certs = ["start: knows the side it leaves through"]
            for y in mids:
                certs.append("bridge: knows the side ahead" if y in bridges else "non-bridge, non-sink")
            certs.append("terminal sink")
            return GammaPath(path, tails, heads, tuple(certs))
        for end in ends:
            y = end.edge
            if y == e0 or p.sink[y]:
                continue
            w = g.vertex_of(end.other())
            if w in prev:
                continue
            if y in bridges and not p.knows_side[end.other()]:
                continue
            prev[w] = (x, y)
            queue.append(w)
    return None


# Constructions

def _lambda_above(x: Fraction) -> Fraction:
    """The smallest integer strictly greater than ``x``."""
    return Fraction(math.floor(x) + 1)


def augment_for_edge(p: KnowledgeProfile, f: FlowAssignment, F_prev: Iterable[EdgeId], h: EdgeId) -> FlowAssignment:
    """Extend a flow verifying for ``F_prev`` to one verifying for ``F_prev`` plus ``h``."""
    F_prev = set(F_prev)
    if verify_flow(p, f, F_prev):
        raise InvalidInput("the input flow does not verify for the given edge set")
    if not p.knows_delta[h] or p.sink[h]:
        return f
    lam = _lambda_above(f.max_abs())
    gp = find_gamma_path(p, h)
    is_bridge = h in p.graph.bridges()
    changes = {}
    for i, tail in enumerate(gp.tails):
        if i == 0 and not is_bridge:
            continue
        changes[tail] = f[tail] + lam
    for head in gp.heads:
        changes[head] = f[head] - lam
    out = f.updated(changes)
    left = verify_flow(p, out, F_prev | {h})
    if left:
        raise RuntimeError(f"augmentation broke verification: {left[0]}")
    return out


def build_flow(p: KnowledgeProfile) -> FlowAssignment:
    """Start from the base flow and augment for every edge in sorted order."""
    f = build_base(p)
    done: set[EdgeId] = set()
    for h in p.graph.edge_ids:
        try:
            f = augment_for_edge(p, f, done, h)
        except NoGammaPath as exc:
            raise InconsistentProfile(f"edge {h}: {exc}") from exc
        done.add(h)
    return f


REROUTE_CASES = ("I", "IIa", "IIb", "IIIa", "IIIb", "IIIc")


def classify_reroute(p: KnowledgeProfile, base: FlowAssignment, h: EdgeId, target) -> str:
    t0, t1 = map(Fraction, target)
    if p.sink[h]:
        return "I"
    if h not in p.graph.bridges():
        return "IIb" if p.knows_delta[h] else "IIa"
    prod = t1 * base[EdgeEnd(h, 1)]
    if prod == 0:
        return "IIIa"
    return "IIIb" if prod > 0 else "IIIc"


def reroute_to_match(p: KnowledgeProfile, base: FlowAssignment, h: EdgeId, target) -> FlowAssignment:
    """A flow verifying for every edge whose two values on ``h`` equal ``target`` exactly."""
    g = p.graph
    every = set(g.edge_ids)
    if verify_flow(p, base, every):
        raise InvalidInput("the base flow must verify for every edge")
    t = tuple(map(Fraction, target))
    bad = _edge_violations(p, h, t[0], t[1], required=True)
    if bad:
        raise CaseViolation(f"target values on {h} violate {bad[0].condition}: {bad[0].message}")
    case = classify_reroute(p, base, h, t)
    ell = base.pair(h)

    if case == "I":
        out = base.updated({EdgeEnd(h, 0): t[0], EdgeEnd(h, 1): t[1]})
    elif case in ("IIa", "IIb"):
        cycle = g.find_cycle_through(h)
        tails, heads = _cycle_ends(g, cycle, h)
        if case == "IIa":
            changes = {end: base[end] + t[0] - ell[0] for end in tails}
            changes.update({end: base[end] + t[1] - ell[1] for end in heads})
            out = base.updated(changes)
        else:
            lam = (t[0] + t[1]) / (ell[0] + ell[1])
            changes = {end: lam * x for end, x in base.items()}
            changes.update({end: lam * (base[end] - ell[0]) + t[0] for end in tails})
            changes.update({end: lam * (base[end] + ell[0]) - t[0] for end in heads})
            out = FlowAssignment(changes)
    elif case == "IIIa":
        if ell != t or any(ell):
            raise CaseViolation(f"zero-product case on {h} needs all four values to be zero")
        out = base
    elif case == "IIIb":
        out = scale_flow(base, t[1] / ell[1])
    else:
        neg_side = 1 if t[1] < 0 else 0
        pos_side = 1 - neg_side
        lam = _lambda_above(base.max_abs())
        mu = t[pos_side] / (ell[pos_side] + lam)
        gp = find_gamma_path(p, h, toward=EdgeEnd(h, neg_side))
        changes = {end: mu * x for end, x in base.items()}
        changes.update({end: mu * (base[end] + lam) for end in gp.tails})
        changes.update({end: mu * (base[end] - lam) for end in gp.heads})
        out = FlowAssignment(changes)

    left = verify_flow(p, out, every)
    if left or out.pair(h) != t:
        raise RuntimeError(f"reroute case {case} failed: {left[:1] or out.pair(h)}")
    return out


def _cycle_ends(g: Multigraph, cycle: Path, h: EdgeId):
    """Tail and head ends of ``e_0 .. e_{k-1}`` on a circular path leaving ``h`` at side 1."""
    edges = cycle.edges[:-1]
    verts = (g.endpoints(h)[0], *cycle.vertices)
    tails = tuple(g.end_at(e, verts[i]) if i else EdgeEnd(h, 0) for i, e in enumerate(edges))
    heads = tuple(g.end_at(e, verts[i + 1]) if i else EdgeEnd(h, 1) for i, e in enumerate(edges))
    return tails, heads


# Random profiles for the property suites

@dataclass(frozen=True)
class ProfileBounds:
    max_vertices: int = 5
    max_edges: int = 6
    sink_rate: float = 0.3
    side_rate: float = 0.35
    delta_rate: float = 0.2
    sink_free_rate: float = 0.25


def random_profile(rng: random.Random, bounds: ProfileBounds | None = None,
                   graph: Multigraph | None = None) -> KnowledgeProfile:
    """A random well-formed profile; a fraction of them have no sinks at all."""
    b = bounds or ProfileBounds()
    g = graph or random_connected_multigraph(rng, b.max_vertices, b.max_edges, loops=False)
    sink_free = rng.random() < b.sink_free_rate
    sink = {e: (not sink_free) and rng.random() < b.sink_rate for e in g.edge_ids}
    sides = {end: rng.random() < b.side_rate for end in g.all_ends()}
    knows = {}
    for e in g.edge_ids:
        ends = g.ends(e)
        knows[e] = any(sides[x] for x in ends) or rng.random() < b.delta_rate
        if knows[e] and not sink[e] and not any(sides[x] for x in ends):
            sides[rng.choice(ends)] = True
    return KnowledgeProfile(g, sink, knows, sides)
