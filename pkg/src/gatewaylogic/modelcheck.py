"""Satisfaction of formulas at runs of a finite protocol.

Formulas are evaluated over the whole run set at once. A truth set is a
Python int used as a bitset over run indices, so a box costs one pass over
the equivalence classes of its edge.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from .axioms import AxiomInstance
from .errors import NotARun
from .formula import Box, Falsum, Formula, Implies, Prop
from .multigraph import EdgeId
from .protocol import DEFAULT_CAP, Protocol, Run, enumerate_runs, is_run


class StateSpace:
    """All runs of a protocol, their per-edge classes, and a truth-set cache."""

    def __init__(self, P: Protocol, cap: int = DEFAULT_CAP):
        self.protocol = P
        self.runs: list[Run] = enumerate_runs(P, cap)
        self.index = {r: i for i, r in enumerate(self.runs)}
        self.full = (1 << len(self.runs)) - 1
        # classes[e]: value -> bitset of runs carrying that value on e
        self.classes: dict[EdgeId, dict[str, int]] = {}
        for e in P.domains:
            by_value: dict[str, int] = {}
            for i, r in enumerate(self.runs):
                by_value[r[e]] = by_value.get(r[e], 0) | (1 << i)
            self.classes[e] = by_value
        self._memo: dict[Formula, int] = {}

    def truth_set(self, phi: Formula) -> int:
        got = self._memo.get(phi)
        if got is not None:
            return got
        if isinstance(phi, Falsum):
            out = 0
        elif isinstance(phi, Prop):
            allowed = self.protocol.valuation.get(phi.name, frozenset())
            out = 0
            for value, mask in self.classes[phi.edge].items():
                if value in allowed:
                    out |= mask
        elif isinstance(phi, Implies):
            out = (~self.truth_set(phi.ante) & self.full) | self.truth_set(phi.cons)
        elif isinstance(phi, Box):
            body = self.truth_set(phi.body)
            out = 0
            for mask in self.classes[phi.edge].values():
                if mask & body == mask:
                    out |= mask
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self._memo[phi] = out
        return out

    def holds_at(self, i: int, phi: Formula) -> bool:
        return bool(self.truth_set(phi) >> i & 1)

    def first_failure(self, phi: Formula) -> int | None:
        missing = ~self.truth_set(phi) & self.full
        if not missing:
            return None
        return (missing & -missing).bit_length() - 1


@lru_cache(maxsize=64)
def state_space(P: Protocol) -> StateSpace:
    return StateSpace(P)


def satisfies(P: Protocol, r: Mapping, phi: Formula) -> bool:
    P.sig.check(phi)
    run = r if isinstance(r, Run) else Run(r)
    if not is_run(P, run):
        raise NotARun("the assignment violates a local condition")
    space = state_space(P)
    return space.holds_at(space.index[run], phi)


def counterexample(P: Protocol, phi: Formula) -> Run | None:
    """The first run in enumeration order where ``phi`` fails, or ``None``."""
    P.sig.check(phi)
    space = state_space(P)
    i = space.first_failure(phi)
    return None if i is None else space.runs[i]


def is_valid(P: Protocol, phi: Formula) -> bool:
    return counterexample(P, phi) is None


def check_axiom_soundness(P: Protocol, instance: AxiomInstance) -> Run | None:
    """Model-check one schema instance; returns a counterexample run, or ``None`` when it holds everywhere."""
    return counterexample(P, instance.formula(P.sig))
