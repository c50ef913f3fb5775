"""Uniform interpolation for K by recursion over proof search.

The construction never needs a finished proof: it runs the invertible rules
of the box calculus bottom-up and, where only the modal rule or nothing at
all applies, reads off a disjunction of literals and boxed recursions.  The
recursion terminates because every step strictly reduces sequent weight.
"""

from dataclasses import dataclass
from typing import Optional, Union

from .syntax import (And, Atom, Bot, Box, Formula, Implies, Or, Top, bot,
                     diamond, neg, render_formula, top)
from .sequents import Sequent, render_sequent, seq


@dataclass(frozen=True)
class UniformTask:
    formula: Formula
    variable: str
    direction: str = "forall"

    def __post_init__(self) -> None:
        if self.direction not in ("forall", "exists"):
            raise ValueError(f"unknown direction {self.direction!r}")


def _fold_or(parts: list) -> Formula:
    if not parts:
        return bot
    out = parts[0]
    for f in parts[1:]:
        out = Or(out, f)
    return out


def _positions(count: int, tie_break: str):
    order = range(count)
    return reversed(order) if tie_break == "rightmost" else order


def forall_p(goal: Sequent, p: Union[str, Atom],
             trace: Optional[list] = None,
             tie_break: str = "leftmost") -> Formula:
    """The pre-interpolant of the goal with respect to p: p-free, implies
    the goal, and lies above every p-free implier."""
    if isinstance(p, Atom):
        p = p.name
    if tie_break not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown tie break {tie_break!r}")
    memo: dict = {}

    def note(s: Sequent, row: str, value: Formula) -> Formula:
        if trace is not None:
            trace.append({"sequent": render_sequent(s), "row": row,
                          "value": render_formula(value)})
        return value

    def rec(s: Sequent) -> Formula:
        got = memo.get(s.key)
        if got is not None:
            return got
        out = compute(s)
        memo[s.key] = out
        return out

    def compute(s: Sequent) -> Formula:
        ant, suc = s.ant, s.suc

        suc_atoms = {f.name for f in suc if isinstance(f, Atom)}
        if any(isinstance(f, Atom) and f.name in suc_atoms for f in ant):
            return note(s, "id", top)
        if any(isinstance(f, Top) for f in suc):
            return note(s, "topR", top)
        if any(isinstance(f, Bot) for f in ant):
            return note(s, "botL", top)

        for i in _positions(len(ant), tie_break):
            f = ant[i]
            if isinstance(f, And):
                rest = ant[:i] + (f.left, f.right) + ant[i + 1:]
                return note(s, "andL", rec(Sequent(rest, suc)))
        for i in _positions(len(ant), tie_break):
            f = ant[i]
            if isinstance(f, Or):
                one = rec(Sequent(ant[:i] + (f.left,) + ant[i + 1:], suc))
                two = rec(Sequent(ant[:i] + (f.right,) + ant[i + 1:], suc))
                return note(s, "orL", And(one, two))
        for i in _positions(len(ant), tie_break):
            f = ant[i]
            if isinstance(f, Implies):
                dropped = ant[:i] + ant[i + 1:]
                one = rec(Sequent(dropped, suc + (f.left,)))
                two = rec(Sequent(ant[:i] + (f.right,) + ant[i + 1:], suc))
                return note(s, "impL", And(one, two))
        for j in _positions(len(suc), tie_break):
            f = suc[j]
            if isinstance(f, And):
                one = rec(Sequent(ant, suc[:j] + (f.left,) + suc[j + 1:]))
                two = rec(Sequent(ant, suc[:j] + (f.right,) + suc[j + 1:]))
                return note(s, "andR", And(one, two))
        for j in _positions(len(suc), tie_break):
            f = suc[j]
            if isinstance(f, Or):
                rest = suc[:j] + (f.left, f.right) + suc[j + 1:]
                return note(s, "orR", rec(Sequent(ant, rest)))
        for j in _positions(len(suc), tie_break):
            f = suc[j]
            if isinstance(f, Implies):
                rest = suc[:j] + (f.right,) + suc[j + 1:]
                return note(s, "impR", rec(Sequent(ant + (f.left,), rest)))

        # terminal shape: boxes and literals only; inert constants dropped
        boxed_ant = [f.child for f in ant if isinstance(f, Box)]
        boxed_suc = [f.child for f in suc if isinstance(f, Box)]
        for f in ant:
            if not isinstance(f, (Box, Atom, Top)):
                raise AssertionError(f"unreduced antecedent member {f!r}")
        for f in suc:
            if not isinstance(f, (Box, Atom, Bot)):
                raise AssertionError(f"unreduced succedent member {f!r}")
        parts: list = []
        if boxed_ant:
            parts.append(diamond(rec(seq(boxed_ant, ()))))
        parts.extend(neg(Atom(f.name)) for f in ant
                     if isinstance(f, Atom) and f.name != p)
        parts.extend(Atom(f.name) for f in suc
                     if isinstance(f, Atom) and f.name != p)
        parts.extend(Box(rec(seq(boxed_ant, (psi,)))) for psi in boxed_suc)
        return note(s, "terminal", _fold_or(parts))

    return rec(goal)


def uniform_interpolant(task: UniformTask, trace: Optional[list] = None,
                        tie_break: str = "leftmost") -> Formula:
    if task.direction == "forall":
        return forall_p(seq((), (task.formula,)), task.variable, trace,
                        tie_break)
    inner = forall_p(seq((), (neg(task.formula),)), task.variable, trace,
                     tie_break)
    return neg(inner)
