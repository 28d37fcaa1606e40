"""Checking Hilbert-style derivations, plus builders for the worked derivations we ship.

A script is a list of ``(formula, justification)`` lines. Line references are
0-based and must point strictly backwards. In ``hypothesis`` mode the
Necessitation rule is unavailable; axioms, tautologies, hypotheses and
previously checked theorems may still be used, and Modus Ponens is the only
rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Sequence, Union

from . import axioms
from .errors import GatewayLogicError, TooManyAtoms, TopologyMismatch
from .formula import (
    FALSUM,
    TOP,
    Box,
    Formula,
    Implies,
    Signature,
    disj,
    implies_chain,
    in_fragment,
    is_tautology,
    neg,
)
from .multigraph import EdgeId

REASONS = ("BadPattern", "NotTautology", "NotGateway", "FragmentViolation", "RuleForbiddenInMode", "BadReference")


# Justifications

@dataclass(frozen=True)
class Tautology:
    pass


@dataclass(frozen=True)
class Truth:
    edge: EdgeId


@dataclass(frozen=True)
class PosIntrospection:
    edge: EdgeId


@dataclass(frozen=True)
class NegIntrospection:
    edge: EdgeId


@dataclass(frozen=True)
class Distributivity:
    edge: EdgeId


@dataclass(frozen=True)
class Gateway:
    edge: EdgeId
    gate: EdgeId
    a_set: FrozenSet[EdgeId]
    b_set: FrozenSet[EdgeId]

    def __post_init__(self):
        object.__setattr__(self, "a_set", frozenset(self.a_set))
        object.__setattr__(self, "b_set", frozenset(self.b_set))


@dataclass(frozen=True)
class ModusPonens:
    """Line ``impl`` must read ``line minor -> this line``."""

    minor: int
    impl: int


@dataclass(frozen=True)
class Necessitation:
    edge: EdgeId
    line: int


@dataclass(frozen=True)
class Hypothesis:
    index: int


@dataclass(frozen=True)
class Theorem:
    """Cites ``script.theorems[index]``, an accepted theorem-mode script ending in this line."""

    index: int


Justification = Union[
    Tautology, Truth, PosIntrospection, NegIntrospection, Distributivity,
    Gateway, ModusPonens, Necessitation, Hypothesis, Theorem,
]


@dataclass
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass
class ProofScript:
    sig: Signature
    mode: str = "theorem"
    hypotheses: list[Formula] = field(default_factory=list)
    lines: list[ProofLine] = field(default_factory=list)
    goal: Formula | None = None
    theorems: list["ProofScript"] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if self.mode not in ("theorem", "hypothesis"):
            raise ValueError(f"mode must be 'theorem' or 'hypothesis', not {self.mode!r}")
        if self.mode == "theorem" and self.hypotheses:
            raise ValueError("a theorem-mode script has no hypotheses")

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1].formula if self.lines else None


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: int | None = None
    reason: str | None = None
    message: str = ""

    def __bool__(self):
        return self.accepted


class _Reject(Exception):
    def __init__(self, reason, message):
        super().__init__(message)
        self.reason = reason
        self.message = message


def match_gateway(sig: Signature, formula: Formula, e: EdgeId, g: EdgeId, a_set, b_set) -> bool:
    """Whether ``formula`` is a licensed Gateway instance for these parameters."""
    try:
        _check_gateway(sig, formula, e, g, frozenset(a_set), frozenset(b_set))
    except (_Reject, GatewayLogicError):
        return False
    return True


def _edges_known(sig, *edges):
    for e in edges:
        if not sig.graph.has_edge(e):
            raise _Reject("BadPattern", f"unknown edge {e!r}")


def _check_gateway(sig, f, e, g, a_set, b_set):
    _edges_known(sig, e, g, *a_set, *b_set)
    if not (isinstance(f, Implies) and isinstance(f.ante, Box) and f.ante.edge == e
            and isinstance(f.ante.body, Implies)):
        raise _Reject("BadPattern", "not of the form [e](A -> B) -> (A -> [g] B)")
    phi, psi = f.ante.body.ante, f.ante.body.cons
    if f != axioms.gateway(e, g, phi, psi):
        raise _Reject("BadPattern", "not of the form [e](A -> B) -> (A -> [g] B)")
    if e not in a_set:
        raise _Reject("FragmentViolation", f"{e} is not in the first edge set")
    if not in_fragment(phi, a_set):
        raise _Reject("FragmentViolation", "antecedent is outside the first edge set's fragment")
    if not in_fragment(psi, b_set):
        raise _Reject("FragmentViolation", "consequent is outside the second edge set's fragment")
    if not sig.graph.is_gateway(g, a_set, b_set):
        raise _Reject("NotGateway", f"{g} is not a gateway between the two edge sets")


def _check_schema(sig, f, just):
    e = just.edge
    _edges_known(sig, e)
    lead = f.ante if isinstance(f, Implies) else None
    if isinstance(just, NegIntrospection):
        lead = lead.ante if isinstance(lead, Implies) and lead.cons == FALSUM else None
    if not (isinstance(lead, Box) and lead.edge == e):
        raise _Reject("BadPattern", f"line does not start with a box on {e}")
    body = lead.body
    if isinstance(just, Truth):
        expected = axioms.truth(e, body)
    elif isinstance(just, PosIntrospection):
        expected = axioms.pos_introspection(e, body)
    elif isinstance(just, NegIntrospection):
        expected = axioms.neg_introspection(e, body)
    else:
        if not isinstance(body, Implies):
            raise _Reject("BadPattern", "distributivity needs a boxed implication")
        expected = axioms.distributivity(e, body.ante, body.cons)
    if f != expected:
        raise _Reject("BadPattern", f"line is not an instance of {type(just).__name__}")


def _ref(i, idx):
    if not isinstance(i, int) or not 0 <= i < idx:
        raise _Reject("BadReference", f"line reference {i} does not point to an earlier line")
    return i


def check_proof(script: ProofScript, _cache=None) -> Verdict:
    """Check every line; the verdict names the first failing line and a reason code."""
    cache = {} if _cache is None else _cache
    sig = script.sig
    formulas: list[Formula] = []
    for idx, line in enumerate(script.lines):
        f, just = line.formula, line.justification
        try:
            try:
                sig.check(f)
            except GatewayLogicError as exc:
                raise _Reject("BadPattern", str(exc))
            if isinstance(just, Tautology):
                try:
                    ok = is_tautology(f)
                except TooManyAtoms as exc:
                    raise _Reject("NotTautology", str(exc))
                if not ok:
                    raise _Reject("NotTautology", "not a propositional tautology")
            elif isinstance(just, (Truth, PosIntrospection, NegIntrospection, Distributivity)):
                _check_schema(sig, f, just)
            elif isinstance(just, Gateway):
                _check_gateway(sig, f, just.edge, just.gate, just.a_set, just.b_set)
            elif isinstance(just, ModusPonens):
                i, j = _ref(just.minor, idx), _ref(just.impl, idx)
                if formulas[j] != Implies(formulas[i], f):
                    raise _Reject("BadPattern", f"line {j} is not 'line {i} -> this line'")
            elif isinstance(just, Necessitation):
                if script.mode != "theorem":
                    raise _Reject("RuleForbiddenInMode", "necessitation is not available under hypotheses")
                _edges_known(sig, just.edge)
                i = _ref(just.line, idx)
                if f != Box(just.edge, formulas[i]):
                    raise _Reject("BadPattern", f"line is not [{just.edge}] of line {i}")
            elif isinstance(just, Hypothesis):
                if script.mode != "hypothesis":
                    raise _Reject("RuleForbiddenInMode", "a theorem-mode script has no hypotheses")
                k = just.index
                if not isinstance(k, int) or not 0 <= k < len(script.hypotheses):
                    raise _Reject("BadReference", f"no hypothesis {k}")
                if f != script.hypotheses[k]:
                    raise _Reject("BadPattern", f"line differs from hypothesis {k}")
            elif isinstance(just, Theorem):
                k = just.index
                if not isinstance(k, int) or not 0 <= k < len(script.theorems):
                    raise _Reject("BadReference", f"no theorem {k}")
                sub = script.theorems[k]
                if sub.mode != "theorem" or sub.sig != sig:
                    raise _Reject("BadReference", f"theorem {k} is not a theorem-mode script over this signature")
                key = id(sub)
                if key not in cache:
                    cache[key] = check_proof(sub, cache)
                if not cache[key].accepted:
                    raise _Reject("BadReference", f"theorem {k} is rejected: {cache[key].message}")
                if sub.conclusion != f:
                    raise _Reject("BadPattern", f"line differs from the conclusion of theorem {k}")
            else:
                raise _Reject("BadPattern", f"unknown justification {just!r}")
        except _Reject as rej:
            return Verdict(False, idx, rej.reason, rej.message)
        formulas.append(f)
    if script.goal is not None:
        last = len(formulas) - 1
        if not formulas or formulas[-1] != script.goal:
            return Verdict(False, max(last, 0), "BadPattern", "the last line is not the stated goal")
    return Verdict(True, message="accepted")


# Script construction

class ScriptBuilder:
    """Accumulates lines and offers a one-call propositional step."""

    def __init__(self, sig: Signature, mode: str = "theorem", hypotheses=(), name: str = ""):
        self.sig = sig
        self.mode = mode
        self.hypotheses = list(hypotheses)
        self.lines: list[ProofLine] = []
        self.theorems: list[ProofScript] = []
        self.name = name

    def add(self, formula: Formula, just: Justification) -> int:
        self.lines.append(ProofLine(formula, just))
        return len(self.lines) - 1

    def f(self, i: int) -> Formula:
        return self.lines[i].formula

    def mp(self, minor: int, impl: int) -> int:
        cons = self.f(impl)
        assert isinstance(cons, Implies) and cons.ante == self.f(minor)
        return self.add(cons.cons, ModusPonens(minor, impl))

    def nec(self, e: EdgeId, i: int) -> int:
        return self.add(Box(e, self.f(i)), Necessitation(e, i))

    def dist_mp(self, e: EdgeId, boxed: int) -> int:
        """From ``[e](A -> B)`` at line ``boxed`` obtain ``[e]A -> [e]B``."""
        body = self.f(boxed).body
        d = self.add(axioms.distributivity(e, body.ante, body.cons), Distributivity(e))
        return self.mp(boxed, d)

    def derive(self, conclusion: Formula, premises: Sequence[int]) -> int:
        """Add the tautology ``P1 -> (P2 -> ... -> C)`` and discharge each premise."""
        t = self.add(implies_chain([self.f(i) for i in premises], conclusion), Tautology())
        for i in premises:
            t = self.mp(i, t)
        return t

    def theorem(self, script: ProofScript) -> int:
        self.theorems.append(script)
        return self.add(script.conclusion, Theorem(len(self.theorems) - 1))

    def build(self, goal: Formula | None = None) -> ProofScript:
        return ProofScript(
            self.sig, self.mode, list(self.hypotheses), list(self.lines),
            goal=goal, theorems=list(self.theorems), name=self.name,
        )


def _require(sig: Signature, edges, gateways=()):
    for e in edges:
        if not sig.graph.has_edge(e):
            raise TopologyMismatch(f"the graph has no edge {e!r}")
    for g, a_set, b_set in gateways:
        if not sig.graph.is_gateway(g, a_set, b_set):
            raise TopologyMismatch(f"{g} is not a gateway between {sorted(a_set)} and {sorted(b_set)}")


def example1_script(sig: Signature, phi: Formula) -> ProofScript:
    """``[a]([b]phi | [c]phi) -> [b]phi`` on a three-channel chain a, b, c."""
    _require(sig, "abc", [("b", {"a", "b"}, {"c"})])
    b = ScriptBuilder(sig, name="example1")
    t = b.add(axioms.truth("c", phi), Truth("c"))
    bc_b = b.dist_mp("b", b.nec("b", t))
    not_b = neg(Box("b", phi))
    gw = b.add(axioms.gateway("a", "b", not_b, Box("c", phi)), Gateway("a", "b", {"a", "b"}, {"c"}))
    goal = Implies(Box("a", disj(Box("b", phi), Box("c", phi))), Box("b", phi))
    b.derive(goal, [bc_b, gw])
    return b.build(goal)


def example2_script(sig: Signature, phi: Formula) -> ProofScript:
    """``[a][e][c]phi -> [b][d]phi`` on a five-channel chain a, b, c, d, e."""
    _require(sig, "abcde", [("d", {"e"}, {"c"}), ("b", {"a"}, {"d"})])
    b = ScriptBuilder(sig, name="example2")
    c_phi, d_phi = Box("c", phi), Box("d", phi)
    t = b.add(axioms.truth("c", phi), Truth("c"))
    dc = b.dist_mp("d", b.nec("d", t))                                  # [d][c]phi -> [d]phi
    t2 = b.add(Implies(c_phi, Implies(TOP, c_phi)), Tautology())
    ec = b.dist_mp("e", b.nec("e", t2))                                 # [e][c]phi -> [e](true -> [c]phi)
    t3 = b.add(Implies(d_phi, Implies(TOP, d_phi)), Tautology())
    ad = b.dist_mp("a", b.nec("a", t3))                                 # [a][d]phi -> [a](true -> [d]phi)
    gw1 = b.add(axioms.gateway("e", "d", TOP, c_phi), Gateway("e", "d", {"e"}, {"c"}))
    ecd = b.derive(Implies(Box("e", c_phi), d_phi), [dc, ec, gw1])
    ec2 = b.dist_mp("a", b.nec("a", ecd))                               # [a][e][c]phi -> [a][d]phi
    gw2 = b.add(axioms.gateway("a", "b", TOP, d_phi), Gateway("a", "b", {"a"}, {"d"}))
    goal = Implies(Box("a", Box("e", c_phi)), Box("b", d_phi))
    b.derive(goal, [ad, ec2, gw2])
    return b.build(goal)


def example3_script(sig: Signature, phi: Formula) -> ProofScript:
    """``[m][m'']phi -> [m'][m'']phi`` on the two-stage encryption network."""
    _require(sig, ["m", "m'", "m''"], [("m'", {"m"}, {"m''"})])
    b = ScriptBuilder(sig, name="example3")
    target = Box("m''", phi)
    t = b.add(Implies(target, Implies(TOP, target)), Tautology())
    lifted = b.dist_mp("m", b.nec("m", t))
    gw = b.add(axioms.gateway("m", "m'", TOP, target), Gateway("m", "m'", {"m"}, {"m''"}))
    goal = Implies(Box("m", target), Box("m'", target))
    b.derive(goal, [lifted, gw])
    return b.build(goal)


def vee_script(sig: Signature, e, g, a_set, b_set, phi: Formula, psi: Formula) -> ProofScript:
    """``[e](phi | psi) -> (phi | [g]psi)``: a single Gateway line."""
    a_set, b_set = frozenset(a_set), frozenset(b_set)
    _require(sig, [e, g], [(g, a_set, b_set)])
    if e not in a_set or not in_fragment(phi, a_set) or not in_fragment(psi, b_set):
        raise TopologyMismatch("the side conditions of the vee derivation do not hold")
    b = ScriptBuilder(sig, name="vee")
    goal = Implies(Box(e, disj(phi, psi)), disj(phi, Box(g, psi)))
    b.add(goal, Gateway(e, g, a_set, b_set))
    return b.build(goal)


def second_vee_script(sig: Signature, g, a_set, b_set, phi: Formula, psi: Formula, chi: Formula) -> ProofScript:
    """``[g](phi | psi | chi) -> (phi | [g]psi | [g]chi)`` with phi local to g, psi to A, chi to B."""
    a_set, b_set = frozenset(a_set), frozenset(b_set)
    ga = a_set | {g}
    _require(sig, [g], [(g, a_set, b_set), (g, ga, b_set), (g, {g}, a_set)])
    if not (in_fragment(phi, {g}) and in_fragment(psi, a_set) and in_fragment(chi, b_set)):
        raise TopologyMismatch("the fragment conditions of the second vee derivation do not hold")
    b = ScriptBuilder(sig, name="second_vee")
    whole = Box(g, disj(disj(phi, psi), chi))
    # vee step with (g, A + {g}, B)
    v1 = b.add(axioms.gateway(g, g, neg(disj(phi, psi)), chi), Gateway(g, g, ga, b_set))
    swapped = disj(disj(phi, Box(g, chi)), psi)
    s = b.derive(Implies(whole, swapped), [v1])
    lifted = b.dist_mp(g, b.nec(g, s))                                  # [g][g]S -> [g]swapped
    pi = b.add(axioms.pos_introspection(g, whole.body), PosIntrospection(g))
    boxed_swap = b.derive(Implies(whole, Box(g, swapped)), [pi, lifted])
    # vee step with (g, {g}, A)
    v2 = b.add(axioms.gateway(g, g, neg(disj(phi, Box(g, chi))), psi), Gateway(g, g, {g}, a_set))
    goal = Implies(whole, disj(disj(phi, Box(g, psi)), Box(g, chi)))
    b.derive(goal, [boxed_swap, v2])
    return b.build(goal)


def pre_xyz_script(sig: Signature, e: EdgeId, phi: Formula) -> ProofScript:
    """``phi -> [e]phi`` for phi local to e."""
    _require(sig, [e])
    if not in_fragment(phi, {e}):
        raise TopologyMismatch(f"the formula is not local to {e}")
    b = ScriptBuilder(sig, name="pre_xyz")
    t = b.add(Implies(phi, phi), Tautology())
    n = b.nec(e, t)
    gw = b.add(axioms.gateway(e, e, phi, phi), Gateway(e, e, {e}, {e}))
    b.mp(n, gw)
    return b.build(Implies(phi, Box(e, phi)))


def xyz_script(sig: Signature, e: EdgeId, phi: Formula, local: Formula | None = None) -> ProofScript:
    """Hypothesis-mode derivation of ``[e]phi`` from two hypotheses local to ``e``.

    The hypotheses are ``x`` and ``x -> [e]phi`` (``x`` defaults to the first
    proposition on ``e``). Both are local to ``e``, so besides ``phi`` they also yield
    ``[e]phi``, which the script derives without Necessitation by citing three
    theorem-mode sub-derivations.
    """
    _require(sig, [e])
    if local is None:
        props = sig.props_on([e])
        local = props[0] if props else Box(e, TOP)
    h1, h2 = local, Implies(local, Box(e, phi))
    if not (in_fragment(h1, {e}) and in_fragment(h2, {e})):
        raise TopologyMismatch(f"the hypotheses are not local to {e}")
    # T1: [e]h1 -> ([e]h2 -> [e]phi)
    t1 = ScriptBuilder(sig, name="xyz_distribute")
    tr = t1.add(axioms.truth(e, phi), Truth(e))
    ded = t1.derive(Implies(h1, Implies(h2, phi)), [tr])
    step = t1.dist_mp(e, t1.nec(e, ded))                                 # [e]h1 -> [e](h2 -> phi)
    d2 = t1.add(axioms.distributivity(e, h2, phi), Distributivity(e))
    t1.derive(Implies(Box(e, h1), Implies(Box(e, h2), Box(e, phi))), [step, d2])
    dist_thm = t1.build()

    b = ScriptBuilder(sig, mode="hypothesis", hypotheses=[h1, h2], name="xyz")
    a1 = b.add(h1, Hypothesis(0))
    a2 = b.add(h2, Hypothesis(1))
    k1 = b.mp(a1, b.theorem(pre_xyz_script(sig, e, h1)))
    k2 = b.mp(a2, b.theorem(pre_xyz_script(sig, e, h2)))
    both = b.theorem(dist_thm)
    b.mp(k2, b.mp(k1, both))
    return b.build(Box(e, phi))


def default_fixture_formula(sig: Signature) -> Formula:
    """A small formula mentioning two edges, used when the caller gives none."""
    props = sig.all_props()
    if not props:
        return Box(sig.graph.edge_ids[0], FALSUM)
    return Implies(props[0], Box(props[-1].edge, props[-1]))


def derive_lemma_fixtures(phi_for=None) -> list[ProofScript]:
    """The seven shipped derivations, each on the topology it needs.

    ``phi_for`` maps a signature to the fixture formula used inside the
    scripts; by default ``default_fixture_formula``.
    """
    from .catalog import two_stage_signature, line_signature

    pick = phi_for or default_fixture_formula
    line3, line5, fig3 = line_signature("abc"), line_signature("abcde"), two_stage_signature()
    theta = pick(fig3)
    m_side, far_side = {"m", "k"}, {"k'", "c'"}
    return [
        example1_script(line3, pick(line3)),
        example2_script(line5, pick(line5)),
        example3_script(fig3, theta),
        vee_script(fig3, "m", "m'", m_side, far_side, Box("k", theta), Box("c'", theta)),
        second_vee_script(fig3, "m'", m_side, far_side, Box("m'", theta), Box("k", theta), Box("c'", theta)),
        pre_xyz_script(fig3, "k", Box("k", theta)),
        xyz_script(fig3, "k", theta),
    ]
