"""Backward proof search with per-calculus termination discipline.

Three regimes:

* strongly terminating tables (LK, G3K, G3D): plain memoized recursion,
  every expansion shrinks the goal;
* loop-checked tables (LJ, G3T, G3K4, G3S4, G3GL, GS5): recursion with a
  branch history; an instance is blocked when its premise has the same
  formula support as an ancestor goal.  Weakening and contraction are
  depth-preserving admissible here, so provability only depends on the
  support and a repeat can never be part of a minimal proof;
* labelled sequents: saturation with blocking sets.  Every rule is
  invertible, so the first stuck branch refutes the goal and doubles as a
  countermodel candidate.

GS5 adds iterative deepening over the number of analytic cuts allowed on a
branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .calculi import (
    LG3,
    CalculusId,
    RuleInstance,
    calculus_table,
    is_labelled_calculus,
    rule_instances,
)
from .sequents import (
    LabelledProofTree,
    LabelledSequent,
    ProofTree,
    Sequent,
    lseq,
    render_labelled,
    render_sequent,
)
from .syntax import render_formula

PROVED = "proved"
NOT_PROVABLE = "not_provable"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 200
    max_nodes: int = 200000
    max_labels: int = 24

    def __post_init__(self) -> None:
        if self.max_depth <= 0 or self.max_nodes <= 0 or self.max_labels <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class SearchOutcome:
    status: str
    proof: object = None
    certificate: Optional[dict] = None
    nodes: int = 0
    detail: str = ""

    @property
    def proved(self) -> bool:
        return self.status == PROVED


class _BudgetHit(Exception):
    def __init__(self, detail: str):
        self.detail = detail


class _Refuted(Exception):
    """A saturated labelled branch with nothing left to apply."""

    def __init__(self, state: LabelledSequent):
        self.state = state


_TERMINATING = frozenset({"LK", "G3K", "G3D"})

_COMMIT_ONE_LJ = ("andL", "impR")
_COMMIT_ONE = ("andL", "orR", "impR")
_COMMIT_BRANCH_LJ = ("orL", "andR")
_COMMIT_BRANCH = ("orL", "andR", "impL")
_T_STYLE = {"G3T": ("T",), "G3S4": ("T",), "GS5": ("T",)}
_CHOICE = {
    "LK": (), "LJ": ("orR", "impL"),
    "G3K": ("K",), "G3T": ("K",), "G3D": ("K", "D"),
    "G3K4": ("4",), "G3S4": ("S4",), "G3GL": ("GL",),
    "GS5": ("5r",),
}


def _support(s: Sequent) -> tuple[frozenset, frozenset]:
    k = s.key
    return (frozenset(k[0]), frozenset(k[1]))


class _Prover:
    def __init__(self, calculus: str, budget: SearchBudget):
        self.calculus = calculus
        self.budget = budget
        self.nodes = 0
        self.terminating = calculus in _TERMINATING
        self.memo_pos: dict = {}
        self.memo_neg: set = set()
        self.cut_gated = False
        self.deepening_capped = False

    def _tick(self, depth: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetHit(f"node limit {self.budget.max_nodes} reached")
        if depth > self.budget.max_depth:
            raise _BudgetHit(f"depth limit {self.budget.max_depth} reached")

    def prove(self, goal: Sequent, depth: int, ancestors: frozenset,
              cut_left: int) -> tuple[Optional[ProofTree], bool]:
        """Returns (proof or None, loop_hit).

        loop_hit marks a failure that involved ancestor blocking somewhere in
        the explored subtree.  Such failures are relative to the current
        branch history: they must not trigger commit semantics, must not be
        cached, and must propagate so callers backtrack instead of giving up.
        """
        self._tick(depth)
        key = goal.key
        cached = self.memo_pos.get(key)
        if cached is not None:
            return cached, False
        if key in self.memo_neg:
            return None, False

        def done(tree: ProofTree) -> tuple[ProofTree, bool]:
            self.memo_pos[key] = tree
            return tree, False

        axioms = rule_instances(self.calculus, goal, rules=("id", "botL", "topR"))
        if axioms:
            a = axioms[0]
            return done(ProofTree(goal, a.rule, a.principal))

        here = _support(goal)
        blocked = ancestors if self.terminating else (ancestors | {here})

        def attempt(inst: RuleInstance, cuts: int) -> tuple[Optional[ProofTree], bool]:
            if self.calculus == "G3K":
                for p in inst.premises:
                    assert p.weight_total() < goal.weight_total(), \
                        f"G3K expansion must shrink: {render_sequent(goal)}"
            subs = []
            for p in inst.premises:
                if not self.terminating and _support(p) in blocked:
                    return None, True
                sub, hit = self.prove(p, depth + 1, blocked, cuts)
                if sub is None:
                    return None, hit
                subs.append(sub)
            return ProofTree(goal, inst.rule, inst.principal, tuple(subs)), False

        loop_hit = False
        commit_one = _COMMIT_ONE_LJ if self.calculus == "LJ" else _COMMIT_ONE
        commit_branch = _COMMIT_BRANCH_LJ if self.calculus == "LJ" else _COMMIT_BRANCH
        for phase in (commit_one, _T_STYLE.get(self.calculus, ()), commit_branch):
            if not phase:
                continue
            for inst in rule_instances(self.calculus, goal, rules=tuple(phase)):
                tree, hit = attempt(inst, cut_left)
                if tree is not None:
                    return done(tree)
                if not hit:
                    # invertible rule, history-free failure: goal unprovable
                    self.memo_neg.add(key)
                    return None, False
                loop_hit = True
            # every instance of this phase was blocked; fall through

        for inst in rule_instances(self.calculus, goal,
                                   rules=_CHOICE.get(self.calculus, ())):
            tree, hit = attempt(inst, cut_left)
            if tree is not None:
                return done(tree)
            loop_hit = loop_hit or hit

        if self.calculus == "GS5":
            cut_insts = rule_instances("GS5", goal, rules=("cutA",))
            if cut_insts and cut_left <= 0:
                self.cut_gated = True
            elif cut_insts:
                for inst in cut_insts:
                    tree, hit = attempt(inst, cut_left - 1)
                    if tree is not None:
                        return done(tree)
                    loop_hit = loop_hit or hit

        if not loop_hit and self.calculus != "GS5":
            self.memo_neg.add(key)
        return None, loop_hit

    def prove_gs5(self, goal: Sequent) -> Optional[ProofTree]:
        for allowed in range(0, 5):
            self.cut_gated = False
            tree, _ = self.prove(goal, 0, frozenset(), allowed)
            if tree is not None:
                return tree
            if not self.cut_gated:
                return None
        self.deepening_capped = True
        return None


_CERT_FRAMES = {
    "G3K": frozenset(),
    "G3T": frozenset({"refl"}),
    "G3D": frozenset({"serial"}),
    "G3K4": frozenset({"trans"}),
    "G3S4": frozenset({"refl", "trans"}),
    "G3GL": frozenset({"trans", "irrefl"}),
    "GS5": frozenset({"refl", "eucl"}),
}


def _negative_outcome(calculus: str, goal: Sequent, engine: _Prover) -> SearchOutcome:
    from . import kripke

    certificate = None
    if calculus in ("LK", "LJ"):
        certificate = kripke.cpc_countermodel(goal)
    else:
        certificate = kripke.bounded_countermodel(goal, _CERT_FRAMES[calculus])
    if calculus in ("LK", "G3K", "G3D"):
        return SearchOutcome(NOT_PROVABLE, certificate=certificate,
                             nodes=engine.nodes)
    if calculus == "LJ":
        # classical countermodels refute intuitionistically too; without one
        # the exhausted loop-checked space is still definitive
        return SearchOutcome(NOT_PROVABLE, certificate=certificate,
                             nodes=engine.nodes)
    if certificate is not None:
        return SearchOutcome(NOT_PROVABLE, certificate=certificate,
                             nodes=engine.nodes)
    detail = "backward search space exhausted; no bounded countermodel found"
    if engine.deepening_capped:
        detail = "analytic cut deepening capped; no bounded countermodel found"
    return SearchOutcome(BUDGET_EXCEEDED, nodes=engine.nodes, detail=detail)


def prove(c: CalculusId, goal, budget: SearchBudget = DEFAULT_BUDGET) -> SearchOutcome:
    """Backward search for a proof of the goal in calculus c."""
    if is_labelled_calculus(c):
        if isinstance(goal, Sequent):
            goal = lseq([], [(1, f) for f in goal.ant], [(1, f) for f in goal.suc])
        return prove_labelled(c.frame, goal, budget)
    if not isinstance(goal, Sequent):
        raise TypeError("unlabelled calculi take plain sequents")
    calculus_table(c)
    engine = _Prover(c, budget)
    try:
        if c == "GS5":
            proof = engine.prove_gs5(goal)
        else:
            proof, _ = engine.prove(goal, 0, frozenset(), 0)
    except _BudgetHit as hit:
        return SearchOutcome(BUDGET_EXCEEDED, nodes=engine.nodes, detail=hit.detail)
    if proof is not None:
        return SearchOutcome(PROVED, proof, nodes=engine.nodes)
    return _negative_outcome(c, goal, engine)


# ---------------------------------------------------------------------------
# Labelled search

_LAB_AXIOMS = ("Lid", "LbotL", "LtopR")
_LAB_ONE = ("LandL", "LorR", "LimpR")
_LAB_HORN = ("Lrefl", "Ltrans", "Lsymm", "Leucl")
_LAB_BRANCH = ("LorL", "LandR", "LimpL")


class _LabProver:
    def __init__(self, frame: frozenset, budget: SearchBudget):
        self.calculus = LG3(frozenset(frame))
        self.budget = budget
        self.nodes = 0

    def _tick(self, depth: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetHit(f"node limit {self.budget.max_nodes} reached")
        if depth > self.budget.max_depth:
            raise _BudgetHit(f"depth limit {self.budget.max_depth} reached")

    def prove(self, goal: LabelledSequent, boxr: frozenset, boxl: frozenset,
              depth: int) -> LabelledProofTree:
        self._tick(depth)
        c = self.calculus

        axioms = rule_instances(c, goal, rules=_LAB_AXIOMS)
        if axioms:
            a = axioms[0]
            return LabelledProofTree(goal, a.rule, a.principal)

        insts = rule_instances(c, goal, rules=_LAB_ONE)
        if insts:
            i = insts[0]
            sub = self.prove(i.premises[0], boxr, boxl, depth + 1)
            return LabelledProofTree(goal, i.rule, i.principal, (sub,))

        insts = rule_instances(c, goal, rules=_LAB_HORN)
        if insts:
            i = insts[0]
            sub = self.prove(i.premises[0], boxr, boxl, depth + 1)
            return LabelledProofTree(goal, i.rule, i.principal, (sub,))

        # once per edge and box along a branch: re-copying a formula that a
        # later rule consumed only repeats work already represented by the
        # residues of that rule's premises
        for i in rule_instances(c, goal, rules=("LboxL",)):
            _, _, (ei, ej) = goal.at(i.principal[0])
            _, _, (_, f) = goal.at(i.principal[1])
            key = (ei, ej, render_formula(f))
            if key in boxl:
                continue
            sub = self.prove(i.premises[0], boxr, boxl | {key}, depth + 1)
            return LabelledProofTree(goal, i.rule, i.principal, (sub,))

        insts = rule_instances(c, goal, rules=_LAB_BRANCH)
        if insts:
            i = insts[0]
            subs = tuple(self.prove(p, boxr, boxl, depth + 1) for p in i.premises)
            return LabelledProofTree(goal, i.rule, i.principal, subs)

        for i in rule_instances(c, goal, rules=("LboxR",)):
            kind, pos, (lab, f) = goal.at(i.principal[0])
            key = (lab, render_formula(f))
            if key in boxr:
                continue
            if len(goal.labels()) + 1 > self.budget.max_labels:
                raise _BudgetHit(f"label limit {self.budget.max_labels} reached")
            sub = self.prove(i.premises[0], boxr | {key}, boxl, depth + 1)
            return LabelledProofTree(goal, i.rule, i.principal, (sub,), i.fresh)

        active = {lab for lab, _ in goal.ant} | {lab for lab, _ in goal.suc}
        for i in rule_instances(c, goal, rules=("Lser",)):
            if i.fresh is None or i.fresh[0] not in active:
                continue
            if len(goal.labels()) + 1 > self.budget.max_labels:
                raise _BudgetHit(f"label limit {self.budget.max_labels} reached")
            sub = self.prove(i.premises[0], boxr, boxl, depth + 1)
            return LabelledProofTree(goal, i.rule, i.principal, (sub,), i.fresh)

        raise _Refuted(goal)


def prove_labelled(frame: frozenset, goal: LabelledSequent,
                   budget: SearchBudget = DEFAULT_BUDGET) -> SearchOutcome:
    """Backward search in the labelled calculus for the given frame conditions."""
    engine = _LabProver(frame, budget)
    try:
        proof = engine.prove(goal, frozenset(), frozenset(), 0)
    except _Refuted as r:
        from . import kripke
        certificate = kripke.labelled_countermodel(r.state, frozenset(frame))
        if certificate is not None:
            return SearchOutcome(NOT_PROVABLE, certificate=certificate,
                                 nodes=engine.nodes)
        return SearchOutcome(
            BUDGET_EXCEEDED, nodes=engine.nodes,
            detail=f"stuck branch failed the certificate check: "
                   f"{render_labelled(r.state)}")
    except _BudgetHit as hit:
        return SearchOutcome(BUDGET_EXCEEDED, nodes=engine.nodes, detail=hit.detail)
    return SearchOutcome(PROVED, proof, nodes=engine.nodes)
