"""Shared helpers for the test modules."""
from __future__ import annotations

import random
from dataclasses import replace

from gatewaylogic.formula import FALSUM, Box, Falsum, Implies, neg
from gatewaylogic.proofcheck import ProofLine, ProofScript

MUTATIONS = ("relabel", "falsum", "swap", "negate", "unbox")


def _sites(f, path=()):
    yield path, f
    if isinstance(f, Implies):
        yield from _sites(f.ante, path + (0,))
        yield from _sites(f.cons, path + (1,))
    elif isinstance(f, Box):
        yield from _sites(f.body, path + (0,))


def _put(f, path, new):
    if not path:
        return new
    head, rest = path[0], path[1:]
    if isinstance(f, Implies):
        return Implies(_put(f.ante, rest, new), f.cons) if head == 0 else Implies(f.ante, _put(f.cons, rest, new))
    return Box(f.edge, _put(f.body, rest, new))


def mutate_formula(f, kind: str, rng: random.Random, edges):
    """One syntactic change of the given kind, or ``None`` when it has no site in ``f``."""
    sites = list(_sites(f))
    if kind == "relabel":
        boxes = [(p, x) for p, x in sites if isinstance(x, Box)]
        if not boxes or len(edges) < 2:
            return None
        p, x = rng.choice(boxes)
        other = rng.choice([e for e in edges if e != x.edge])
        return _put(f, p, Box(other, x.body))
    if kind == "falsum":
        cands = [(p, x) for p, x in sites if not isinstance(x, Falsum)]
        p, _ = rng.choice(cands) if cands else ((), None)
        return _put(f, p, FALSUM) if cands else None
    if kind == "swap":
        imps = [(p, x) for p, x in sites if isinstance(x, Implies) and x.ante != x.cons]
        if not imps:
            return None
        p, x = rng.choice(imps)
        return _put(f, p, Implies(x.cons, x.ante))
    if kind == "negate":
        return neg(f)
    boxes = [(p, x) for p, x in sites if isinstance(x, Box)]
    if not boxes:
        return None
    p, x = rng.choice(boxes)
    return _put(f, p, x.body)


def mutants(script: ProofScript, count: int, seed: int):
    """``count`` scripts, each differing from ``script`` in exactly one line's formula."""
    rng = random.Random(seed)
    edges = script.sig.graph.edge_ids
    out = []
    while len(out) < count:
        i = rng.randrange(len(script.lines))
        kind = MUTATIONS[len(out) % len(MUTATIONS)]
        old = script.lines[i]
        new = mutate_formula(old.formula, kind, rng, edges)
        if new is None or new == old.formula:
            kind = "negate"
            new = neg(old.formula)
        lines = list(script.lines)
        lines[i] = ProofLine(new, old.justification)
        out.append((i, kind, replace(script, lines=lines)))
    return out


def bridges_by_removal(g) -> set:
    """Edges whose deletion leaves the graph disconnected, by brute force."""
    from gatewaylogic.multigraph import Multigraph

    out = set()
    for e in g.edge_ids:
        rest = Multigraph(g.vertices, {x: g.endpoints(x) for x in g.edge_ids if x != e})
        if not rest.is_connected():
            out.add(e)
    return out
