"""Writes the shipped example documents (graphs, protocols, runs, proofs, profiles, flows)."""
from __future__ import annotations

import re
from pathlib import Path

from . import io
from .canonical_flow import KnowledgeProfile
from .catalog import two_stage_signature, p1_protocol, reroute_fixtures
from .formula import Box
from .multigraph import two_stage_graph, line_graph
from .proofcheck import Hypothesis, Necessitation, ProofLine, ProofScript, derive_lemma_fixtures


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_")


def fixture_documents() -> dict[str, dict]:
    """File name to JSON document, for everything under ``fixtures/``."""
    docs: dict[str, dict] = {}
    docs["fig3.graph"] = io.graph_to_doc(two_stage_graph())

    P = p1_protocol()
    docs["p1.protocol"] = io.protocol_to_doc(P)
    docs["r1.run"] = io.run_to_doc({"m": "1", "k": "0", "c": "1", "m'": "1"})

    for script in derive_lemma_fixtures():
        docs[f"{script.name}.proof"] = io.proof_to_doc(script)

    sig = two_stage_signature()
    x = sig.prop("p_k")
    forbidden = ProofScript(sig, "hypothesis", [x], [
        ProofLine(x, Hypothesis(0)),
        ProofLine(Box("k", x), Necessitation("k", 0)),
    ], name="necessitation_under_hypotheses")
    docs["necessitation_under_hypotheses.proof"] = io.proof_to_doc(forbidden)

    chain = line_graph(["b", "s"])
    bridge = KnowledgeProfile.build(chain, sinks=["s"], knows=["b"], sides=[("b", "v1")])
    docs["bridge.profile"] = io.profile_to_doc(bridge)
    docs["sink_free.profile"] = io.profile_to_doc(
        KnowledgeProfile.build(chain, knows=["b"], sides=[("b", "v1")]))

    cases = []
    for fx in reroute_fixtures():
        stem = f"reroute_{_slug(fx.name)}"
        docs[f"{stem}.profile"] = io.profile_to_doc(fx.profile)
        docs[f"{stem}.flow"] = io.flow_to_doc(fx.base)
        cases.append({"name": fx.name, "case": fx.case, "profile": f"{stem}.profile", "base": f"{stem}.flow",
                      "edge": fx.edge, "target": [str(t) for t in fx.target]})
    docs["reroute_cases.json"] = {"cases": cases}
    return docs


def write_fixtures(directory) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in sorted(fixture_documents().items()):
        path = out / name
        path.write_text(io.dump_json(doc), encoding="utf-8")
        written.append(path)
    return written
