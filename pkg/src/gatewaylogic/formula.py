"""The object language: signatures, formula ASTs, concrete syntax, and
propositional reasoning over modal atoms.

Only four constructors exist (``Falsum``, ``Prop``, ``Implies``, ``Box``).
Negation, conjunction, disjunction and ``true`` are sugar built from them::

    ~a      = a -> false
    true    = false -> false
    a | b   = ~a -> b
    a & b   = ~(a -> ~b)

Concrete syntax: ``[e]`` and ``~`` bind tightest, then ``&``, then ``|``
(both left-associative), then right-associative ``->``.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    FormulaSyntaxError,
    InvalidSignature,
    TooManyAtoms,
    UnknownEdge,
    UnknownProposition,
)
from .multigraph import EdgeId, Multigraph

MAX_ATOMS = 20
KEYWORDS = frozenset({"true", "false"})
IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")


# AST

class Formula:
    """Base class of formula nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)


def _cached_hash(cls):
    generated = cls.__hash__

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = generated(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True)
class Falsum(Formula):
    def __repr__(self):
        return "Falsum()"


@_cached_hash
@dataclass(frozen=True)
class Prop(Formula):
    name: str
    edge: EdgeId

    def __repr__(self):
        return f"Prop({self.name!r}@{self.edge})"


@_cached_hash
@dataclass(frozen=True)
class Implies(Formula):
    ante: Formula
    cons: Formula

    def __repr__(self):
        return f"Implies({self.ante!r}, {self.cons!r})"


@_cached_hash
@dataclass(frozen=True)
class Box(Formula):
    edge: EdgeId
    body: Formula

    def __repr__(self):
        return f"Box({self.edge}, {self.body!r})"


FALSUM = Falsum()
TOP = Implies(FALSUM, FALSUM)


def neg(a: Formula) -> Formula:
    return Implies(a, FALSUM)


def disj(a: Formula, b: Formula) -> Formula:
    return Implies(neg(a), b)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(Implies(a, neg(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Implies(a, b), Implies(b, a))


def disj_all(items: Sequence[Formula]) -> Formula:
    """Left-associated disjunction; the empty disjunction is ``false``."""
    items = list(items)
    if not items:
        return FALSUM
    out = items[0]
    for x in items[1:]:
        out = disj(out, x)
    return out


def conj_all(items: Sequence[Formula]) -> Formula:
    """Left-associated conjunction; the empty conjunction is ``true``."""
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for x in items[1:]:
        out = conj(out, x)
    return out


def implies_chain(premises: Sequence[Formula], conclusion: Formula) -> Formula:
    """``p1 -> (p2 -> ... -> conclusion)``."""
    out = conclusion
    for p in reversed(list(premises)):
        out = Implies(p, out)
    return out


def subformulas(phi: Formula):
    """Yield every subformula, parents before children."""
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        if isinstance(f, Implies):
            stack.append(f.cons)
            stack.append(f.ante)
        elif isinstance(f, Box):
            stack.append(f.body)


def edges_mentioned(phi: Formula) -> set[EdgeId]:
    out = set()
    for f in subformulas(phi):
        if isinstance(f, (Prop, Box)):
            out.add(f.edge)
    return out


# Signatures

class Signature:
    """A connected multigraph plus pairwise-disjoint proposition sets, one per edge."""

    def __init__(self, graph: Multigraph, props: Mapping[EdgeId, Iterable[str]] | None = None):
        if not graph.is_connected():
            raise InvalidSignature("the graph of a signature must be connected")
        props = props or {}
        self.graph = graph
        self._props: dict[EdgeId, tuple[str, ...]] = {e: () for e in graph.edge_ids}
        self._home: dict[str, EdgeId] = {}
        for e, names in props.items():
            if not graph.has_edge(e):
                raise InvalidSignature(f"propositions declared for unknown edge {e!r}")
            names = tuple(names)
            for name in names:
                if not IDENT_RE.match(name) or name in KEYWORDS:
                    raise InvalidSignature(f"bad proposition name {name!r}")
                if name in self._home:
                    raise InvalidSignature(f"proposition {name!r} declared on two edges")
                self._home[name] = e
            self._props[e] = names

    @classmethod
    def with_default_props(cls, graph: Multigraph, per_edge: int = 1) -> "Signature":
        """One proposition ``p_<edge>`` per edge (plus ``q_<edge>``, ``r_<edge>``... when asked)."""
        letters = "pqrstuvw"[:per_edge]
        return cls(graph, {e: [f"{x}_{e}" for x in letters] for e in graph.edge_ids})

    @property
    def props(self) -> dict[EdgeId, tuple[str, ...]]:
        return dict(self._props)

    def home(self, name: str) -> EdgeId:
        try:
            return self._home[name]
        except KeyError:
            raise UnknownProposition(f"unknown proposition {name!r}") from None

    def prop(self, name: str) -> Prop:
        return Prop(name, self.home(name))

    def all_props(self) -> list[Prop]:
        return [Prop(n, e) for e in self.graph.edge_ids for n in self._props[e]]

    def props_on(self, edges: Iterable[EdgeId]) -> list[Prop]:
        return [Prop(n, e) for e in sorted(set(edges)) for n in self._props.get(e, ())]

    def check(self, phi: Formula) -> None:
        """Raise if ``phi`` mentions an edge or proposition foreign to this signature."""
        for f in subformulas(phi):
            if isinstance(f, Box) and not self.graph.has_edge(f.edge):
                raise UnknownEdge(f"unknown edge {f.edge!r}")
            if isinstance(f, Prop) and self._home.get(f.name) != f.edge:
                raise UnknownProposition(f"unknown proposition {f.name!r} on edge {f.edge!r}")

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self.graph == other.graph and self._props == other._props

    def __hash__(self):
        return hash((self.graph, frozenset(self._props.items())))

    def __repr__(self):
        return f"Signature({self.graph!r}, props={self._props})"


# Concrete syntax

_TOKEN_RE = re.compile(r"\s*(?:(->)|([~&|()\[\]])|([A-Za-z][A-Za-z0-9_']*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, sig: Signature | None, text: str):
        self.sig = sig
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self, expected=None):
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            what = repr(tok) if tok else "end of input"
            raise FormulaSyntaxError(f"expected {expected!r}, found {what}", self.text, pos)
        self.i += 1
        return tok, pos

    def parse(self) -> Formula:
        f = self.implication()
        tok, pos = self.tokens[self.i]
        if tok:
            raise FormulaSyntaxError(f"unexpected {tok!r}", self.text, pos)
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = disj(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = conj(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return neg(self.unary())
        if tok == "[":
            self.take()
            name, pos = self.take()
            if not name or not IDENT_RE.match(name) or name in KEYWORDS:
                raise FormulaSyntaxError("expected an edge name", self.text, pos)
            if self.sig is not None and not self.sig.graph.has_edge(name):
                raise UnknownEdge(f"unknown edge {name!r} at position {pos}")
            self.take("]")
            return Box(name, self.unary())
        return self.atom()

    def atom(self):
        tok, pos = self.take()
        if tok == "false":
            return FALSUM
        if tok == "true":
            return TOP
        if tok == "(":
            f = self.implication()
            self.take(")")
            return f
        if tok and IDENT_RE.match(tok):
            if self.sig is None:
                raise UnknownProposition(f"no signature to resolve {tok!r}")
            try:
                return self.sig.prop(tok)
            except UnknownProposition:
                raise UnknownProposition(f"unknown proposition {tok!r} at position {pos}") from None
        what = repr(tok) if tok else "end of input"
        raise FormulaSyntaxError(f"unexpected {what}", self.text, pos)


def parse(sig: Signature, text: str) -> Formula:
    """Parse concrete syntax into an AST with all sugar eliminated."""
    return _Parser(sig, text).parse()


_IMP, _OR, _AND, _UNARY, _ATOM = range(1, 6)


def _view(f: Formula):
    """Recognise sugar patterns so the printer can re-sugar."""
    if isinstance(f, Implies):
        a, b = f.ante, f.cons
        if a == FALSUM and b == FALSUM:
            return ("true",)
        if b == FALSUM and isinstance(a, Implies) and isinstance(a.cons, Implies) and a.cons.cons == FALSUM:
            return ("and", a.ante, a.cons.ante)
        if b == FALSUM:
            return ("not", a)
        if isinstance(a, Implies) and a.cons == FALSUM and a != TOP:
            return ("or", a.ante, b)
        return ("imp", a, b)
    return (None,)


def _emit(f: Formula) -> tuple[str, int]:
    if isinstance(f, Falsum):
        return "false", _ATOM
    if isinstance(f, Prop):
        return f.name, _ATOM
    if isinstance(f, Box):
        return f"[{f.edge}] {_wrap(f.body, _UNARY)}", _UNARY
    kind, *args = _view(f)
    if kind == "true":
        return "true", _ATOM
    if kind == "not":
        return f"~{_wrap(args[0], _UNARY)}", _UNARY
    if kind == "and":
        return f"{_wrap(args[0], _AND)} & {_wrap(args[1], _UNARY)}", _AND
    if kind == "or":
        return f"{_wrap(args[0], _OR)} | {_wrap(args[1], _AND)}", _OR
    return f"{_wrap(args[0], _OR)} -> {_wrap(args[1], _IMP)}", _IMP


def _wrap(f: Formula, need: int) -> str:
    text, prec = _emit(f)
    return text if prec >= need else f"({text})"


def to_text(f: Formula) -> str:
    """Print ``f`` in concrete syntax, re-sugaring where the AST allows it."""
    return _emit(f)[0]


# Fragments and modal atoms

def in_fragment(phi: Formula, edges: Iterable[EdgeId]) -> bool:
    """Whether every outermost box is labelled by, and every exposed proposition lives on, an edge in ``edges``."""
    allowed = frozenset(edges)
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Implies):
            stack.append(f.ante)
            stack.append(f.cons)
        elif isinstance(f, (Box, Prop)):
            if f.edge not in allowed:
                return False
    return True


def modal_atoms(phi: Formula) -> list[tuple[Formula, EdgeId]]:
    """The maximal proposition/box subformulas, in first-appearance order, with their home edge."""
    out: dict[Formula, EdgeId] = {}
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Implies):
            stack.append(f.cons)
            stack.append(f.ante)
        elif isinstance(f, (Box, Prop)):
            out.setdefault(f, f.edge)
    return list(out.items())


def _truth_vector(phi: Formula, atoms: list[Formula]) -> tuple[int, int]:
    """Evaluate ``phi`` on all assignments at once; bit j is its value under assignment j."""
    n = len(atoms)
    width = 1 << n
    full = (1 << width) - 1
    pattern = {}
    for i, a in enumerate(atoms):
        span = 1 << i
        block = ((1 << span) - 1) << span
        pattern[a] = block * (full // ((1 << (2 * span)) - 1))
    memo: dict[Formula, int] = {}

    def ev(f):
        if f in pattern:
            return pattern[f]
        if isinstance(f, Falsum):
            return 0
        got = memo.get(f)
        if got is None:
            got = (~ev(f.ante) & full) | ev(f.cons)
            memo[f] = got
        return got

    return ev(phi), full


def is_tautology(phi: Formula) -> bool:
    """Truth-table check treating modal atoms as independent propositional variables."""
    atoms = [a for a, _ in modal_atoms(phi)]
    if len(atoms) > MAX_ATOMS:
        raise TooManyAtoms(f"{len(atoms)} modal atoms exceed the limit of {MAX_ATOMS}")
    value, full = _truth_vector(phi, atoms)
    return value == full


# Edge-clausal normal form

@dataclass(frozen=True)
class EdgeClausalForm:
    """A conjunction of clauses; each clause maps an edge to a disjunct local to that edge.

    Edges absent from a clause contribute ``false``.
    """

    clauses: tuple[Mapping[EdgeId, Formula], ...] = field(default_factory=tuple)

    def to_formula(self) -> Formula:
        return conj_all([disj_all(list(c.values())) for c in self.clauses])


def _local_home(f: Formula) -> EdgeId | None:
    homes = {h for _, h in modal_atoms(f)}
    return homes.pop() if len(homes) == 1 else None


def _literal(f: Formula, positive: bool):
    while isinstance(f, Implies) and f.cons == FALSUM:
        f, positive = f.ante, not positive
    return f, positive


def _clause_union(c1, c2):
    seen = dict.fromkeys(c1)
    for lit in c2:
        if (lit[0], not lit[1]) in seen:
            return None
        seen.setdefault(lit)
    return tuple(seen)


def _dedupe(clauses):
    return list(dict.fromkeys(clauses))


def _cnf(f: Formula, positive: bool) -> list[tuple]:
    if not modal_atoms(f):
        holds = _truth_vector(f, [])[0] == 1
        return [] if holds == positive else [()]
    if _local_home(f) is not None:
        return [(_literal(f, positive),)]
    assert isinstance(f, Implies)
    if positive:
        left, right = _cnf(f.ante, False), _cnf(f.cons, True)
        out = []
        for c1 in left:
            for c2 in right:
                c = _clause_union(c1, c2)
                if c is not None:
                    out.append(c)
        return _dedupe(out)
    return _dedupe(_cnf(f.ante, True) + _cnf(f.cons, False))


def to_edge_clausal(phi: Formula) -> EdgeClausalForm:
    """Rewrite ``phi`` as a conjunction of clauses with one edge-local disjunct per edge.

    Maximal subformulas whose atoms all live on a single edge are kept whole, so
    a formula already in the one-disjunct-per-edge shape comes back unchanged.
    """
    atoms = modal_atoms(phi)
    if len(atoms) > MAX_ATOMS:
        raise TooManyAtoms(f"{len(atoms)} modal atoms exceed the limit of {MAX_ATOMS}")
    clauses = []
    for clause in _cnf(phi, True):
        grouped: dict[EdgeId, list[Formula]] = {}
        for block, positive in clause:
            grouped.setdefault(_local_home(block), []).append(block if positive else neg(block))
        clauses.append({e: disj_all(parts) for e, parts in grouped.items()})
    out = EdgeClausalForm(tuple(clauses))
    assert is_tautology(iff(phi, out.to_formula())), "clausal form is not equivalent"
    return out


# Random formulas, used by the fuzzers

def random_formula(
    sig: Signature,
    rng: random.Random,
    depth: int = 3,
    edges: Iterable[EdgeId] | None = None,
) -> Formula:
    """A random formula; with ``edges`` given the result lies in that edge fragment."""
    all_edges = sig.graph.edge_ids
    allowed = sorted(set(edges)) if edges is not None else all_edges

    def leaf(pool):
        props = sig.props_on(pool)
        if props and rng.random() < 0.85:
            return rng.choice(props)
        return FALSUM if rng.random() < 0.5 else TOP

    def gen(d, pool):
        if d <= 0 or rng.random() < 0.25:
            return leaf(pool)
        r = rng.random()
        if r < 0.35 and pool:
            return Box(rng.choice(pool), gen(d - 1, all_edges))
        if r < 0.5:
            return neg(gen(d - 1, pool))
        return Implies(gen(d - 1, pool), gen(d - 1, pool))

    return gen(depth, allowed)
