"""Undirected multigraphs with loops, and the topology queries the logic needs.

Edges are named, so parallel edges between the same pair of vertices are
distinct objects. Every edge has exactly two *ends*, addressed by
``EdgeEnd(edge, side)`` with ``side`` in ``{0, 1}``; a loop has both ends at
the same vertex.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import DisconnectedGraph, InvalidGraph, IsBridge, UnknownEdge, UnknownVertex

VertexId = str
EdgeId = str


class EdgeEnd(NamedTuple):
    edge: EdgeId
    side: int

    def other(self) -> "EdgeEnd":
        return EdgeEnd(self.edge, 1 - self.side)


@dataclass(frozen=True)
class Path:
    """A path ``e0, v1, e1, ..., vk, ek``.

    ``edges`` holds ``e0..ek`` and ``vertices`` holds ``v1..vk`` (one fewer).
    A circular path has ``edges[0] == edges[-1]``.
    """

    edges: tuple[EdgeId, ...]
    vertices: tuple[VertexId, ...]
    circular: bool = False

    def __post_init__(self):
        if len(self.edges) != len(self.vertices) + 1:
            raise ValueError("a path has exactly one more edge than interior vertex")

    def __len__(self):
        return len(self.edges)

    def problems(self, g: "Multigraph") -> list[str]:
        """Return the list of violated path invariants (empty when the path is valid)."""
        out = []
        body = self.edges[:-1] if self.circular else self.edges
        if len(set(body)) != len(body):
            out.append("edges repeat")
        if self.circular and (self.edges[0] != self.edges[-1] or len(self.vertices) < 1):
            out.append("circular path must return to its first edge with k >= 1")
        if len(set(self.vertices)) != len(self.vertices):
            out.append("interior vertices repeat")
        for i, v in enumerate(self.vertices):
            for e in (self.edges[i], self.edges[i + 1]):
                if not g.has_edge(e):
                    out.append(f"unknown edge {e}")
                elif v not in g.endpoints(e):
                    out.append(f"edge {e} is not incident to {v}")
        return out


class Multigraph:
    """Immutable undirected multigraph.

    >>> g = Multigraph(["x", "y"], {"a": ("x", "y"), "b": ("x", "y")})
    >>> sorted(g.incident_edges("x"))
    ['a', 'b']
    """

    def __init__(self, vertices: Iterable[VertexId], edges: Mapping[EdgeId, Sequence[VertexId]]):
        verts = tuple(vertices)
        if len(set(verts)) != len(verts):
            raise InvalidGraph("vertex ids must be unique")
        ends: dict[EdgeId, tuple[VertexId, VertexId]] = {}
        for e, pair in edges.items():
            pair = tuple(pair)
            if len(pair) != 2:
                raise InvalidGraph(f"edge {e} must have exactly two endpoints")
            for v in pair:
                if v not in verts:
                    raise InvalidGraph(f"edge {e} has undeclared endpoint {v}")
            ends[e] = pair
        self._vertices = verts
        self._ends = ends
        self._vertex_set = frozenset(verts)
        self._incident: dict[VertexId, list[EdgeEnd]] = {v: [] for v in verts}
        for e in sorted(ends):
            for side in (0, 1):
                self._incident[ends[e][side]].append(EdgeEnd(e, side))
        self._bridges: frozenset[EdgeId] | None = None

    # basic accessors

    @property
    def vertices(self) -> tuple[VertexId, ...]:
        return self._vertices

    @property
    def edges(self) -> Mapping[EdgeId, tuple[VertexId, VertexId]]:
        return dict(self._ends)

    @property
    def edge_ids(self) -> list[EdgeId]:
        return sorted(self._ends)

    def has_edge(self, e: EdgeId) -> bool:
        return e in self._ends

    def endpoints(self, e: EdgeId) -> tuple[VertexId, VertexId]:
        """Both endpoints of ``e`` in stored order (side 0, side 1)."""
        self._check_edge(e)
        return self._ends[e]

    def vertex_of(self, end: EdgeEnd) -> VertexId:
        return self.endpoints(end.edge)[end.side]

    def ends(self, e: EdgeId) -> tuple[EdgeEnd, EdgeEnd]:
        self._check_edge(e)
        return EdgeEnd(e, 0), EdgeEnd(e, 1)

    def all_ends(self) -> list[EdgeEnd]:
        return [end for e in self.edge_ids for end in self.ends(e)]

    def ends_at(self, v: VertexId) -> list[EdgeEnd]:
        """Every edge end located at ``v``; a loop contributes two."""
        self._check_vertex(v)
        return list(self._incident[v])

    def end_at(self, e: EdgeId, v: VertexId) -> EdgeEnd:
        """The end of ``e`` at vertex ``v`` (side 0 for loops)."""
        u0, u1 = self.endpoints(e)
        if v == u0:
            return EdgeEnd(e, 0)
        if v == u1:
            return EdgeEnd(e, 1)
        raise UnknownVertex(f"edge {e} is not incident to {v}")

    def other_endpoint(self, e: EdgeId, v: VertexId) -> VertexId:
        u0, u1 = self.endpoints(e)
        return u1 if v == u0 else u0

    def is_loop(self, e: EdgeId) -> bool:
        u0, u1 = self.endpoints(e)
        return u0 == u1

    def incident_edges(self, v: VertexId) -> frozenset[EdgeId]:
        """The edges having ``v`` as an endpoint."""
        return frozenset(end.edge for end in self.ends_at(v))

    def _check_vertex(self, v):
        if v not in self._vertex_set:
            raise UnknownVertex(f"unknown vertex {v!r}")

    def _check_edge(self, e):
        if e not in self._ends:
            raise UnknownEdge(f"unknown edge {e!r}")

    def __eq__(self, other):
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self._vertex_set == other._vertex_set and self._ends == other._ends

    def __hash__(self):
        return hash((self._vertex_set, frozenset(self._ends.items())))

    def __repr__(self):
        edges = ", ".join(f"{e}:{u}-{v}" for e, (u, v) in sorted(self._ends.items()))
        return f"Multigraph(V={list(self._vertices)}, E={{{edges}}})"

    # topology

    def _reach(self, start: VertexId, removed: EdgeId | None = None) -> set[VertexId]:
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for end in self._incident[v]:
                if end.edge == removed:
                    continue
                w = self._ends[end.edge][1 - end.side]
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def is_connected(self) -> bool:
        if not self._vertices:
            return True
        return len(self._reach(self._vertices[0])) == len(self._vertices)

    def component_without(self, v: VertexId, e: EdgeId) -> tuple[frozenset[VertexId], frozenset[EdgeId]]:
        """The component of ``(V, E - {e})`` containing ``v``."""
        self._check_vertex(v)
        self._check_edge(e)
        verts = self._reach(v, removed=e)
        edges = frozenset(x for x, (a, _) in self._ends.items() if x != e and a in verts)
        return frozenset(verts), edges

    def bridges(self) -> frozenset[EdgeId]:
        """All edges whose removal disconnects the graph.

        Iterative low-link search keyed on edge ids, so a parallel edge is never
        mistaken for the tree edge it duplicates.
        """
        if self._bridges is not None:
            return self._bridges
        if not self.is_connected():
            raise DisconnectedGraph("bridges are defined for connected graphs only")
        order: dict[VertexId, int] = {}
        low: dict[VertexId, int] = {}
        found = set()
        for root in self._vertices:
            if root in order:
                continue
            order[root] = low[root] = len(order)
            stack = [(root, None, iter(self._incident[root]))]
            while stack:
                v, via, it = stack[-1]
                advanced = False
                for end in it:
                    if end.edge == via:
                        continue
                    w = self._ends[end.edge][1 - end.side]
                    if w not in order:
                        order[w] = low[w] = len(order)
                        stack.append((w, end.edge, iter(self._incident[w])))
                        advanced = True
                        break
                    low[v] = min(low[v], order[w])
                if advanced:
                    continue
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > order[parent]:
                        found.add(via)
        self._bridges = frozenset(found)
        return self._bridges

    def is_bridge(self, e: EdgeId) -> bool:
        self._check_edge(e)
        return e in self.bridges()

    def is_gateway(self, gate: EdgeId, a_set: Iterable[EdgeId], b_set: Iterable[EdgeId]) -> bool:
        """Whether every path from an edge of ``a_set`` to an edge of ``b_set`` uses ``gate``.

        Decided by components: a one-edge path forces ``A & B <= {gate}``, and
        otherwise no component of ``(V, E - {gate})`` may touch both sets.
        """
        a_set, b_set = frozenset(a_set), frozenset(b_set)
        for e in (gate, *a_set, *b_set):
            self._check_edge(e)
        if not (a_set & b_set) <= {gate}:
            return False
        rest_a, rest_b = a_set - {gate}, b_set - {gate}
        if not rest_a or not rest_b:
            return True
        label = self._component_labels(removed=gate)
        side_a = {label[self._ends[e][0]] for e in rest_a}
        side_b = {label[self._ends[e][0]] for e in rest_b}
        return not (side_a & side_b)

    def _component_labels(self, removed: EdgeId | None = None) -> dict[VertexId, int]:
        label: dict[VertexId, int] = {}
        for v in self._vertices:
            if v not in label:
                n = len(set(label.values()))
                for w in self._reach(v, removed=removed):
                    label[w] = n
        return label

    def find_cycle_through(self, e: EdgeId, via: VertexId | None = None) -> Path:
        """A circular path ``e, v1, ..., vk, e``.

        ``via`` fixes ``v1`` (an endpoint of ``e``); by default ``v1`` is the
        side-1 endpoint, so the cycle leaves ``e`` toward side 1 and returns at
        side 0. The search is breadth-first with edges tried in sorted order.
        """
        self._check_edge(e)
        if e in self.bridges():
            raise IsBridge(f"edge {e} is a bridge and lies on no cycle")
        u0, u1 = self._ends[e]
        if via is None:
            start, goal = u1, u0
        elif via in (u0, u1):
            start, goal = via, self.other_endpoint(e, via)
        else:
            raise UnknownVertex(f"{via!r} is not an endpoint of {e}")
        if start == goal:
            return Path((e, e), (start,), circular=True)
        prev: dict[VertexId, tuple[VertexId, EdgeId]] = {}
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            if v == goal:
                break
            for end in self._incident[v]:
                if end.edge == e:
                    continue
                w = self._ends[end.edge][1 - end.side]
                if w not in seen:
                    seen.add(w)
                    prev[w] = (v, end.edge)
                    queue.append(w)
        verts = [goal]
        mids = []
        while verts[-1] != start:
            v, x = prev[verts[-1]]
            mids.append(x)
            verts.append(v)
        verts.reverse()
        mids.reverse()
        return Path((e, *mids, e), tuple(verts), circular=True)


# Constructors for the topologies used throughout the tests and fixtures.

def two_stage_graph() -> Multigraph:
    """The two-stage encryption network: m, (k, c), m', (k', c'), m''."""
    return Multigraph(
        ["p", "q", "u", "v", "s", "t"],
        {
            "m": ("p", "q"),
            "k": ("q", "u"),
            "c": ("q", "u"),
            "m'": ("u", "v"),
            "k'": ("v", "s"),
            "c'": ("v", "s"),
            "m''": ("s", "t"),
        },
    )


def line_graph(edge_names: Sequence[EdgeId]) -> Multigraph:
    """A simple chain ``v0 -e0- v1 -e1- ... vn``."""
    verts = [f"v{i}" for i in range(len(edge_names) + 1)]
    return Multigraph(verts, {e: (verts[i], verts[i + 1]) for i, e in enumerate(edge_names)})


def random_connected_multigraph(
    rng: random.Random,
    max_vertices: int = 4,
    max_edges: int = 5,
    loops: bool = False,
) -> Multigraph:
    """A random connected multigraph: a random spanning tree plus extra (possibly parallel) edges."""
    n = rng.randint(min(2, max_vertices), max(2, min(max_vertices, max_edges + 1)))
    verts = [f"v{i}" for i in range(n)]
    pairs = [(verts[i], verts[rng.randrange(i)]) for i in range(1, n)]
    target = rng.randint(max(len(pairs), 1), max_edges)
    while len(pairs) < target:
        a, b = rng.choice(verts), rng.choice(verts)
        if a == b and not loops:
            if n == 1:
                break
            continue
        pairs.append((a, b))
    return Multigraph(verts, {f"e{i}": pair for i, pair in enumerate(pairs)})
