"""Randomized soundness checking: axiom instances model-checked on random protocols."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .axioms import SCHEMAS, AxiomInstance
from .errors import NoRunFound
from .formula import Signature, random_formula, to_text
from .modelcheck import check_axiom_soundness
from .multigraph import Multigraph, random_connected_multigraph
from .protocol import ProtocolBounds, random_protocol


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    protocols: int = 200
    per_schema: int = 10
    max_vertices: int = 4
    max_edges: int = 5
    max_domain: int = 3
    depth: int = 3
    loop_rate: float = 0.3


@dataclass
class FuzzReport:
    protocols: int = 0
    skipped: int = 0
    instances: dict = field(default_factory=lambda: {s: 0 for s in SCHEMAS})
    counterexamples: list = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "protocols": self.protocols,
            "skipped_without_runs": self.skipped,
            "instances": dict(self.instances),
            "counterexamples": list(self.counterexamples),
        }


def random_gateway_triple(g: Multigraph, rng: random.Random, e: str, attempts: int = 50):
    """A verified ``(gate, A, B)`` with ``e`` in ``A``; falls back to the always-valid ``(e, {e}, B)``."""
    edges = g.edge_ids
    for _ in range(attempts):
        a_set = {e} | {x for x in edges if rng.random() < 0.3}
        b_set = {x for x in edges if rng.random() < 0.4} or {rng.choice(edges)}
        gate = rng.choice(edges)
        if g.is_gateway(gate, a_set, b_set):
            return gate, frozenset(a_set), frozenset(b_set)
    return e, frozenset({e}), frozenset({rng.choice(edges)})


def random_instance(sig: Signature, rng: random.Random, schema: str, depth: int = 2) -> AxiomInstance:
    edges = sig.graph.edge_ids
    e = rng.choice(edges)
    if schema == "gateway":
        gate, a_set, b_set = random_gateway_triple(sig.graph, rng, e)
        phi = random_formula(sig, rng, depth, edges=a_set)
        psi = random_formula(sig, rng, depth, edges=b_set)
        return AxiomInstance(schema, e, phi, psi, gate, a_set, b_set)
    phi = random_formula(sig, rng, depth)
    psi = random_formula(sig, rng, depth) if schema == "distributivity" else None
    return AxiomInstance(schema, e, phi, psi)


def soundness_fuzz(cfg: FuzzConfig | None = None) -> FuzzReport:
    cfg = cfg or FuzzConfig()
    report = FuzzReport()
    attempt = 0
    while report.protocols < cfg.protocols:
        rng = random.Random(cfg.seed * 1_000_003 + attempt)
        attempt += 1
        g = random_connected_multigraph(rng, cfg.max_vertices, cfg.max_edges, loops=rng.random() < cfg.loop_rate)
        sig = Signature.with_default_props(g)
        bounds = ProtocolBounds(max_domain=cfg.max_domain, density=rng.choice([0.3, 0.5, 0.8, 1.0]))
        try:
            P = random_protocol(sig, rng.randrange(2 ** 32), bounds)
        except NoRunFound:
            report.skipped += 1
            continue
        report.protocols += 1
        for schema in SCHEMAS:
            for _ in range(cfg.per_schema):
                inst = random_instance(sig, rng, schema, cfg.depth)
                bad = check_axiom_soundness(P, inst)
                report.instances[schema] += 1
                if bad is not None:
                    report.counterexamples.append({
                        "attempt": attempt - 1,
                        "schema": schema,
                        "formula": to_text(inst.formula(sig)),
                        "run": dict(bad),
                    })
    return report
