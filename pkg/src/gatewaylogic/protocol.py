"""Finite protocols: per-edge value domains, per-vertex local relations, a valuation, and runs."""
from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .errors import DomainViolation, InvalidProtocol, NoRunFound, StateSpaceTooLarge, UnknownEdge
from .formula import Signature
from .multigraph import EdgeId, VertexId

Value = str
DEFAULT_CAP = 2 ** 22


class Run(Mapping):
    """An immutable, hashable assignment of one value per edge."""

    __slots__ = ("_values", "_hash")

    def __init__(self, values: Mapping[EdgeId, Value]):
        self._values = dict(sorted(values.items()))
        self._hash = hash(tuple(self._values.items()))

    def __getitem__(self, e):
        return self._values[e]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Run):
            return self._values == other._values
        if isinstance(other, Mapping):
            return self._values == dict(other)
        return NotImplemented

    def __repr__(self):
        return "Run(" + ", ".join(f"{e}={v}" for e, v in self._values.items()) + ")"


class Protocol:
    """A protocol over a signature.

    ``locals`` maps each vertex to the set of allowed value tuples over its
    incident edges; tuples are aligned with ``sorted(incident_edges(v))``
    (``local_edges(v)``). Dict-shaped tuples are accepted and converted.
    """

    def __init__(
        self,
        sig: Signature,
        domains: Mapping[EdgeId, Iterable[Value]],
        locals: Mapping[VertexId, Iterable] | None = None,
        valuation: Mapping[str, Iterable[Value]] | None = None,
    ):
        g = sig.graph
        self.sig = sig
        self.domains: dict[EdgeId, tuple[Value, ...]] = {}
        for e in g.edge_ids:
            if e not in domains:
                raise InvalidProtocol(f"no domain for edge {e}")
            dom = tuple(dict.fromkeys(domains[e]))
            if not dom:
                raise InvalidProtocol(f"empty domain for edge {e}")
            self.domains[e] = dom
        for e in domains:
            if not g.has_edge(e):
                raise UnknownEdge(f"domain given for unknown edge {e!r}")
        self._local_edges = {v: tuple(sorted(g.incident_edges(v))) for v in g.vertices}
        locals = locals if locals is not None else {}
        self.locals: dict[VertexId, frozenset[tuple[Value, ...]] | None] = {}
        for v in g.vertices:
            spec = locals.get(v)
            self.locals[v] = None if spec is None else self._normalize_local(v, spec)
        for v in locals:
            if v not in self._local_edges:
                raise InvalidProtocol(f"local condition for unknown vertex {v!r}")
        valuation = valuation or {}
        self.valuation: dict[str, frozenset[Value]] = {}
        for name in (p.name for p in sig.all_props()):
            vals = frozenset(valuation.get(name, ()))
            dom = self.domains[sig.home(name)]
            if not vals <= set(dom):
                raise InvalidProtocol(f"valuation of {name} leaves the domain of {sig.home(name)}")
            self.valuation[name] = vals
        for name in valuation:
            sig.home(name)

    def _normalize_local(self, v, spec) -> frozenset:
        edges = self._local_edges[v]
        out = set()
        for t in spec:
            if isinstance(t, Mapping):
                if set(t) != set(edges):
                    raise InvalidProtocol(f"local tuple at {v} must assign exactly {list(edges)}")
                t = tuple(t[e] for e in edges)
            else:
                t = tuple(t)
                if len(t) != len(edges):
                    raise InvalidProtocol(f"local tuple at {v} must have {len(edges)} entries")
            for e, x in zip(edges, t):
                if x not in self.domains[e]:
                    raise InvalidProtocol(f"local tuple at {v} uses {x!r} outside the domain of {e}")
            out.add(t)
        return frozenset(out)

    def local_edges(self, v: VertexId) -> tuple[EdgeId, ...]:
        return self._local_edges[v]

    def allowed(self, v: VertexId) -> frozenset | None:
        """The allowed tuples at ``v``; ``None`` means every tuple is allowed."""
        return self.locals[v]

    def state_space_size(self) -> int:
        n = 1
        for dom in self.domains.values():
            n *= len(dom)
        return n

    def _key(self):
        return (
            self.sig,
            tuple(sorted(self.domains.items())),
            tuple(sorted((v, t) for v, t in self.locals.items())),
            tuple(sorted(self.valuation.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, Protocol):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            self._hash = hash(self._key())
            return self._hash

    def __repr__(self):
        return f"Protocol(edges={list(self.domains)}, vertices={list(self.locals)})"


def _check_local(P: Protocol, v: VertexId, values: Mapping[EdgeId, Value]) -> bool:
    allowed = P.locals[v]
    if allowed is None:
        return True
    return tuple(values[e] for e in P.local_edges(v)) in allowed


def is_run(P: Protocol, t: Mapping[EdgeId, Value]) -> bool:
    """Whether ``t`` satisfies every vertex's local condition."""
    for e, dom in P.domains.items():
        if e not in t:
            raise DomainViolation(f"no value for edge {e}")
        if t[e] not in dom:
            raise DomainViolation(f"value {t[e]!r} outside the domain of {e}")
    for e in t:
        if e not in P.domains:
            raise UnknownEdge(f"unknown edge {e!r}")
    return all(_check_local(P, v, t) for v in P.locals)


def iter_runs(P: Protocol, cap: int = DEFAULT_CAP) -> Iterator[Run]:
    """Runs in lexicographic order of their sorted-edge value tuples (domain order per edge)."""
    if P.state_space_size() > cap:
        raise StateSpaceTooLarge(f"{P.state_space_size()} candidate tuples exceed the cap {cap}")
    edges = sorted(P.domains)
    pos = {e: i for i, e in enumerate(edges)}
    # vertices whose local condition can be checked once edge i is assigned
    ready: list[list[VertexId]] = [[] for _ in edges]
    for v in P.locals:
        if P.locals[v] is not None and P.local_edges(v):
            ready[max(pos[e] for e in P.local_edges(v))].append(v)
    if any(P.locals[v] is not None and not P.local_edges(v) and () not in P.locals[v] for v in P.locals):
        return
    assign: dict[EdgeId, Value] = {}

    def rec(i):
        if i == len(edges):
            yield Run(assign)
            return
        e = edges[i]
        for x in P.domains[e]:
            assign[e] = x
            if all(_check_local(P, v, assign) for v in ready[i]):
                yield from rec(i + 1)
        del assign[e]

    yield from rec(0)


def enumerate_runs(P: Protocol, cap: int = DEFAULT_CAP) -> list[Run]:
    return list(iter_runs(P, cap))


def runs_equal_on(r: Mapping, r2: Mapping, e: EdgeId) -> bool:
    return r[e] == r2[e]


@dataclass(frozen=True)
class ProtocolBounds:
    max_domain: int = 3
    density: float = 0.5
    attempts: int = 100


def random_protocol(sig: Signature, seed: int, bounds: ProtocolBounds | None = None) -> Protocol:
    """A reproducible random protocol with at least one run.

    Domains are ``"0", "1", ...`` of random size up to ``max_domain``. Each
    vertex keeps a random ``density`` fraction of its full tuple product.
    Locals are resampled until some global run exists.
    """
    b = bounds or ProtocolBounds()
    if b.max_domain < 1 or not 0 < b.density <= 1:
        raise ValueError("max_domain must be positive and density in (0, 1]")
    rng = random.Random(seed)
    g = sig.graph
    domains = {e: [str(i) for i in range(rng.randint(1, b.max_domain))] for e in g.edge_ids}
    valuation = {}
    for p in sig.all_props():
        valuation[p.name] = [x for x in domains[p.edge] if rng.random() < 0.5]
    for _ in range(b.attempts):
        locals = {}
        for v in g.vertices:
            edges = sorted(g.incident_edges(v))
            full = list(product(*(domains[e] for e in edges)))
            if b.density >= 1:
                locals[v] = full
            else:
                k = max(1, round(b.density * len(full)))
                locals[v] = rng.sample(full, k)
        P = Protocol(sig, domains, locals, valuation)
        if next(iter_runs(P), None) is not None:
            return P
    raise NoRunFound(f"no protocol with a run after {b.attempts} attempts (seed {seed})")
