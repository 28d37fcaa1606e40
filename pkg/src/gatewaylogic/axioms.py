"""The five axiom schemas of the proof system, as formula builders and checked instances."""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet

from .errors import MalformedInstance
from .formula import Box, Formula, Implies, Signature, in_fragment, neg
from .multigraph import EdgeId

SCHEMAS = ("truth", "pos_introspection", "neg_introspection", "distributivity", "gateway")


def truth(e: EdgeId, phi: Formula) -> Formula:
    return Implies(Box(e, phi), phi)


def pos_introspection(e: EdgeId, phi: Formula) -> Formula:
    return Implies(Box(e, phi), Box(e, Box(e, phi)))


def neg_introspection(e: EdgeId, phi: Formula) -> Formula:
    return Implies(neg(Box(e, phi)), Box(e, neg(Box(e, phi))))


def distributivity(e: EdgeId, phi: Formula, psi: Formula) -> Formula:
    return Implies(Box(e, Implies(phi, psi)), Implies(Box(e, phi), Box(e, psi)))


def gateway(e: EdgeId, g: EdgeId, phi: Formula, psi: Formula) -> Formula:
    """The shape only; side conditions are checked by ``gateway_side_conditions``."""
    return Implies(Box(e, Implies(phi, psi)), Implies(phi, Box(g, psi)))


def gateway_side_conditions(
    sig: Signature, e: EdgeId, g: EdgeId, a_set, b_set, phi: Formula, psi: Formula
) -> list[str]:
    """Return the failed side conditions (empty when the instance is licensed)."""
    a_set, b_set = frozenset(a_set), frozenset(b_set)
    out = []
    if e not in a_set:
        out.append(f"{e} is not in A")
    if not in_fragment(phi, a_set):
        out.append("antecedent leaves the A fragment")
    if not in_fragment(psi, b_set):
        out.append("consequent leaves the B fragment")
    if not sig.graph.is_gateway(g, a_set, b_set):
        out.append(f"{g} is not a gateway between A and B")
    return out


@dataclass(frozen=True)
class AxiomInstance:
    """One schema with its parameters; ``psi`` is used by distributivity and gateway."""

    schema: str
    edge: EdgeId
    phi: Formula
    psi: Formula | None = None
    gate: EdgeId | None = None
    a_set: FrozenSet[EdgeId] | None = None
    b_set: FrozenSet[EdgeId] | None = None

    def formula(self, sig: Signature) -> Formula:
        if self.schema not in SCHEMAS:
            raise MalformedInstance(f"unknown schema {self.schema!r}")
        if not sig.graph.has_edge(self.edge):
            raise MalformedInstance(f"unknown edge {self.edge!r}")
        sig.check(self.phi)
        if self.schema in ("distributivity", "gateway"):
            if self.psi is None:
                raise MalformedInstance(f"{self.schema} needs a second formula")
            sig.check(self.psi)
        if self.schema == "truth":
            return truth(self.edge, self.phi)
        if self.schema == "pos_introspection":
            return pos_introspection(self.edge, self.phi)
        if self.schema == "neg_introspection":
            return neg_introspection(self.edge, self.phi)
        if self.schema == "distributivity":
            return distributivity(self.edge, self.phi, self.psi)
        if self.gate is None or self.a_set is None or self.b_set is None:
            raise MalformedInstance("gateway needs a gate edge and both edge sets")
        failed = gateway_side_conditions(sig, self.edge, self.gate, self.a_set, self.b_set, self.phi, self.psi)
        if failed:
            raise MalformedInstance("; ".join(failed))
        return gateway(self.edge, self.gate, self.phi, self.psi)
