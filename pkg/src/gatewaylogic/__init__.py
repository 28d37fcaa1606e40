"""Epistemic logic of fixed-topology communication networks.

Topology analysis, finite-protocol model checking, proof checking with the
gateway rule, and exact-rational flow constructions over knowledge profiles.
"""
from .errors import GatewayLogicError
from .formula import Signature, parse, to_text
from .multigraph import EdgeEnd, Multigraph, Path
from .protocol import Protocol, Run, enumerate_runs, is_run

__all__ = [
    "EdgeEnd", "GatewayLogicError", "Multigraph", "Path", "Protocol", "Run",
    "Signature", "enumerate_runs", "is_run", "parse", "to_text",
]
