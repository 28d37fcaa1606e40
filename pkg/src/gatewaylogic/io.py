"""JSON documents for graphs, signatures, protocols, runs, proofs, profiles and flows.

Formulas inside documents are written in the concrete syntax of ``formula``.
Flow values are ``"numerator/denominator"`` strings so they round-trip exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Any

from .canonical_flow import FlowAssignment, KnowledgeProfile
from .errors import FormatError, GatewayLogicError
from .formula import Signature, parse, to_text
from .multigraph import EdgeEnd, Multigraph
from .protocol import Protocol, Run
from . import proofcheck as pc


def load_json(path) -> Any:
    text = FsPath(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, str(path), exc.lineno, exc.colno) from None


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class _Loader:
    """Wraps structural problems in a document into ``FormatError``."""

    def __init__(self, path=None):
        self.path = None if path is None else str(path)

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        if exc is None or isinstance(exc, FormatError):
            return False
        if isinstance(exc, (KeyError, TypeError, ValueError, AttributeError, IndexError, GatewayLogicError)):
            detail = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
            raise FormatError(detail, self.path) from exc
        return False


# graphs and signatures

def graph_to_doc(g: Multigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e, "ends": list(g.endpoints(e))} for e in g.edge_ids],
    }


def graph_from_doc(doc, path=None) -> Multigraph:
    with _Loader(path):
        return Multigraph(doc["vertices"], {x["id"]: tuple(x["ends"]) for x in doc["edges"]})


def signature_to_doc(sig: Signature) -> dict:
    return {"graph": graph_to_doc(sig.graph), "propositions": {e: list(ns) for e, ns in sig.props.items() if ns}}


def signature_from_doc(doc, path=None) -> Signature:
    with _Loader(path):
        return Signature(graph_from_doc(doc["graph"], path), doc.get("propositions", {}))


# protocols and runs

def protocol_to_doc(P: Protocol) -> dict:
    locals_doc = {}
    for v, allowed in P.locals.items():
        if allowed is None:
            locals_doc[v] = "any"
        else:
            edges = P.local_edges(v)
            locals_doc[v] = [dict(zip(edges, t)) for t in sorted(allowed)]
    return {
        "signature": signature_to_doc(P.sig),
        "domains": {e: list(d) for e, d in P.domains.items()},
        "locals": locals_doc,
        "valuation": {p: sorted(vals) for p, vals in P.valuation.items()},
    }


def protocol_from_doc(doc, path=None) -> Protocol:
    with _Loader(path):
        sig = signature_from_doc(doc["signature"], path)
        locals_spec = {}
        for v, spec in doc.get("locals", {}).items():
            if spec == "any":
                continue
            if not isinstance(spec, list):
                raise FormatError(f"locals of {v} must be a list of tuples or \"any\"", path)
            locals_spec[v] = spec
        return Protocol(sig, doc["domains"], locals_spec, doc.get("valuation", {}))


def run_to_doc(r) -> dict:
    return dict(r)


def run_from_doc(doc, path=None) -> Run:
    with _Loader(path):
        if not isinstance(doc, dict) or not all(isinstance(v, str) for v in doc.values()):
            raise FormatError("a run is a flat map from edge to value string", path)
        return Run(doc)


# proofs

_RULES = {
    "tautology": (pc.Tautology, ()),
    "truth": (pc.Truth, ("edge",)),
    "pos_introspection": (pc.PosIntrospection, ("edge",)),
    "neg_introspection": (pc.NegIntrospection, ("edge",)),
    "distributivity": (pc.Distributivity, ("edge",)),
    "gateway": (pc.Gateway, ("edge", "gate", "A", "B")),
    "mp": (pc.ModusPonens, ("minor", "impl")),
    "necessitation": (pc.Necessitation, ("edge", "line")),
    "hypothesis": (pc.Hypothesis, ("index",)),
    "theorem": (pc.Theorem, ("index",)),
}
_RULE_OF = {cls: name for name, (cls, _) in _RULES.items()}


def _justification_to_doc(j) -> dict:
    name = _RULE_OF[type(j)]
    out = {"rule": name}
    for key in _RULES[name][1]:
        attr = {"A": "a_set", "B": "b_set"}.get(key, key)
        val = getattr(j, attr)
        out[key] = sorted(val) if isinstance(val, frozenset) else val
    return out


def _justification_from_doc(doc, path):
    name = doc.get("rule")
    if name not in _RULES:
        raise FormatError(f"unknown rule {name!r}", path)
    cls, keys = _RULES[name]
    return cls(*(doc[k] for k in keys))


def proof_to_doc(script: pc.ProofScript, with_signature: bool = True) -> dict:
    doc = {
        "mode": script.mode,
        "lines": [{"formula": to_text(line.formula), **_justification_to_doc(line.justification)}
                  for line in script.lines],
    }
    if script.name:
        doc["name"] = script.name
    if script.hypotheses:
        doc["hypotheses"] = [to_text(h) for h in script.hypotheses]
    if script.goal is not None:
        doc["goal"] = to_text(script.goal)
    if script.theorems:
        doc["theorems"] = [proof_to_doc(t, with_signature=False) for t in script.theorems]
    if with_signature:
        doc["signature"] = signature_to_doc(script.sig)
    return doc


def proof_from_doc(doc, path=None, sig: Signature | None = None) -> pc.ProofScript:
    with _Loader(path):
        sig = sig or signature_from_doc(doc["signature"], path)
        lines = []
        for i, line in enumerate(doc["lines"]):
            try:
                formula = parse(sig, line["formula"])
            except GatewayLogicError as exc:
                raise FormatError(f"line {i}: {exc}", path) from exc
            lines.append(pc.ProofLine(formula, _justification_from_doc(line, path)))
        return pc.ProofScript(
            sig,
            doc.get("mode", "theorem"),
            [parse(sig, h) for h in doc.get("hypotheses", [])],
            lines,
            goal=parse(sig, doc["goal"]) if doc.get("goal") is not None else None,
            theorems=[proof_from_doc(t, path, sig) for t in doc.get("theorems", [])],
            name=doc.get("name", ""),
        )


# profiles and flows

def profile_to_doc(p: KnowledgeProfile) -> dict:
    return {
        "graph": graph_to_doc(p.graph),
        "edges": {
            e: {
                "sink": p.sink[e],
                "knows_delta": p.knows_delta[e],
                "knows_side": [p.knows_side[EdgeEnd(e, 0)], p.knows_side[EdgeEnd(e, 1)]],
            }
            for e in p.graph.edge_ids
        },
    }


def profile_from_doc(doc, path=None) -> KnowledgeProfile:
    with _Loader(path):
        g = graph_from_doc(doc["graph"], path)
        edges = doc.get("edges", {})
        sink, knows, sides = {}, {}, {}
        for e, flags in edges.items():
            sink[e] = bool(flags.get("sink", False))
            knows[e] = bool(flags.get("knows_delta", False))
            pair = flags.get("knows_side", [False, False])
            if len(pair) != 2:
                raise FormatError(f"knows_side of {e} needs two entries", path)
            sides[EdgeEnd(e, 0)], sides[EdgeEnd(e, 1)] = bool(pair[0]), bool(pair[1])
        return KnowledgeProfile(g, sink, knows, sides)


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def flow_to_doc(f: FlowAssignment) -> dict:
    edges = sorted({end.edge for end in f})
    return {"flow": {e: [fraction_text(f[EdgeEnd(e, 0)]), fraction_text(f[EdgeEnd(e, 1)])] for e in edges}}


def flow_from_doc(doc, path=None) -> FlowAssignment:
    with _Loader(path):
        pairs = {}
        for e, vals in doc["flow"].items():
            if len(vals) != 2:
                raise FormatError(f"flow of {e} needs two values", path)
            pairs[e] = tuple(Fraction(str(v)) for v in vals)
        return FlowAssignment.from_edges(pairs)


def read(kind: str, path):
    """Load a document of the given kind from ``path``."""
    loaders = {
        "graph": graph_from_doc,
        "signature": signature_from_doc,
        "protocol": protocol_from_doc,
        "run": run_from_doc,
        "proof": proof_from_doc,
        "profile": profile_from_doc,
        "flow": flow_from_doc,
    }
    return loaders[kind](load_json(path), path)
