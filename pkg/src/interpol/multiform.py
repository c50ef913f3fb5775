"""Multiformulas and interpolant extraction over labelled split proofs.

A multiformula is a binary tree of labelled formulas combined with the
multi-conjunction and multi-disjunction connectives.  Extraction walks a
side-tagged labelled proof bottom-up; the modal step rewrites the premise
multiformula into a separated normal form for the discharged fresh label and
then replaces that label with a boxed or diamonded formula at its parent.
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .syntax import (And, Atom, Box, Formula, Or, bot, diamond, neg,
                     parse_formula, render_formula, top)
from .sequents import L, R, LabelledProofTree, LabelledSplitProof, lseq
from .calculi import LG3, match_rule
from .search import DEFAULT_BUDGET, PROVED, SearchBudget, prove_labelled


@dataclass(frozen=True)
class Lab:
    label: int
    formula: Formula


@dataclass(frozen=True)
class MConj:
    left: "Multiformula"
    right: "Multiformula"


@dataclass(frozen=True)
class MDisj:
    left: "Multiformula"
    right: "Multiformula"


Multiformula = Union[Lab, MConj, MDisj]


def mf_form(m: Multiformula) -> Formula:
    """Collapse to a plain formula: drop labels, map the multi-connectives
    to their propositional counterparts.  No simplification."""
    if isinstance(m, Lab):
        return m.formula
    op = And if isinstance(m, MConj) else Or
    return op(mf_form(m.left), mf_form(m.right))


def labels(m: Multiformula) -> frozenset:
    if isinstance(m, Lab):
        return frozenset({m.label})
    return labels(m.left) | labels(m.right)


def render_multiformula(m: Multiformula) -> str:
    def go(x: Multiformula, parent: Optional[type]) -> str:
        if isinstance(x, Lab):
            return f"{x.label}:{render_formula(x.formula)}"
        sym = "⩕" if isinstance(x, MConj) else "⩖"
        inner = f"{go(x.left, type(x))} {sym} {go(x.right, type(x))}"
        if parent is not None and parent is not type(x):
            return f"({inner})"
        return inner
    return go(m, None)


def multiformula_to_json(m: Multiformula) -> dict:
    if isinstance(m, Lab):
        return {"lab": [m.label, render_formula(m.formula)]}
    key = "and" if isinstance(m, MConj) else "or"
    return {key: [multiformula_to_json(m.left), multiformula_to_json(m.right)]}


def multiformula_from_json(d: dict) -> Multiformula:
    if "lab" in d:
        i, text = d["lab"]
        return Lab(int(i), parse_formula(text))
    if "and" in d:
        a, b = d["and"]
        return MConj(multiformula_from_json(a), multiformula_from_json(b))
    if "or" in d:
        a, b = d["or"]
        return MDisj(multiformula_from_json(a), multiformula_from_json(b))
    raise ValueError(f"not a multiformula object: {d!r}")


# ---------------------------------------------------------------------------
# Separation

def _fold(cls, items):
    out = items[0]
    for x in items[1:]:
        out = cls(out, x)
    return out


def _clauses(m: Multiformula, outer) -> list[list[Lab]]:
    """Distribute into outer-of-inner form; outer=MConj gives conjunctions
    of disjunction clauses, outer=MDisj the dual."""
    if isinstance(m, Lab):
        return [[m]]
    if isinstance(m, outer):
        return _clauses(m.left, outer) + _clauses(m.right, outer)
    return [a + b for a in _clauses(m.left, outer)
            for b in _clauses(m.right, outer)]


def separate(m: Multiformula, j: int, mode: str,
             spare: Optional[int] = None) -> Multiformula:
    """Rewrite m into an equivalent form where label j is separated.

    conj_disj: a conjunction of clauses (j:B ⩖ rest) with j outside rest;
    disj_conj is the dual.  A clause without a j-part gets the inert filler
    j:bot (under ⩖) or j:top (under ⩕).  A clause that is pure j
    keeps no rest unless a spare label is supplied for an inert rest part.
    """
    if mode not in ("conj_disj", "disj_conj"):
        raise ValueError(f"unknown separation mode {mode!r}")
    cd = mode == "conj_disj"
    outer, inner = (MConj, MDisj) if cd else (MDisj, MConj)
    unit = bot if cd else top

    pairs = []
    for clause in _clauses(m, outer):
        j_parts = [x.formula for x in clause if x.label == j]
        rest_items = [x for x in clause if x.label != j]
        if j_parts:
            b = j_parts[0]
            for f in j_parts[1:]:
                b = Or(b, f) if cd else And(b, f)
        else:
            b = unit
        head = Lab(j, b)
        if rest_items:
            pairs.append(inner(head, _fold(inner, rest_items)))
        elif spare is not None:
            pairs.append(inner(head, Lab(spare, unit)))
        else:
            pairs.append(head)
    return _fold(outer, pairs)


def is_separated(m: Multiformula, j: int, mode: str) -> bool:
    """Check the shape separate() produces: each outer clause carries at
    most one j-part, at its head, with j absent from the rest."""
    cd = mode == "conj_disj"
    outer, inner = (MConj, MDisj) if cd else (MDisj, MConj)

    def conjuncts(x):
        if isinstance(x, outer):
            return conjuncts(x.left) + conjuncts(x.right)
        return [x]

    for clause in conjuncts(m):
        if isinstance(clause, Lab):
            continue
        if not isinstance(clause, inner):
            return False
        head, rest = clause.left, clause.right
        if isinstance(head, Lab) and head.label == j and j not in labels(rest):
            continue
        if j not in labels(clause):
            continue
        return False
    return True


def replace_label_modal(m: Multiformula, j: int, i: int,
                        modality: str) -> Multiformula:
    """Turn each j:B into i:[]B (box) or i:<>B (diamond).  m must already be
    separated for j in the matching mode."""
    if modality not in ("box", "diamond"):
        raise ValueError(f"unknown modality {modality!r}")
    need = "conj_disj" if modality == "box" else "disj_conj"
    if not is_separated(m, j, need):
        raise ValueError(
            f"label {j} is not {need}-separated in {render_multiformula(m)}")
    wrap = Box if modality == "box" else diamond

    def go(x: Multiformula) -> Multiformula:
        if isinstance(x, Lab):
            if x.label == j:
                return Lab(i, wrap(x.formula))
            return x
        return type(x)(go(x.left), go(x.right))

    return go(m)


# ---------------------------------------------------------------------------
# Step classification

@dataclass(frozen=True)
class StepKind:
    kind: str
    i: Optional[int] = None
    j: Optional[int] = None


_LOCAL = frozenset({"LandL", "LorR", "LimpR", "LboxL"})
_HORN = frozenset({"Lrefl", "Ltrans", "Lsymm", "Leucl"})
_BRANCHING = frozenset({"LorL", "LandR", "LimpL"})
_AXIOMS = frozenset({"Lid", "LbotL", "LtopR"})


def classify_split_step(rule, side: Optional[str] = None) -> StepKind:
    """Map a labelled rule occurrence to its interpolant transformation.

    rule may be the rule name or any object with .rule (and .fresh for the
    fresh-label rules); side is the split tag of the principal formula,
    None for rules without one.
    """
    fresh = getattr(rule, "fresh", None)
    name = getattr(rule, "rule", rule)
    if name in _AXIOMS:
        raise ValueError("axiom leaves are read off their tags directly")
    if name in _LOCAL:
        return StepKind("local")
    if name in _HORN:
        return StepKind("horn_local")
    if name in _BRANCHING:
        if side == L:
            return StepKind("disjunctive")
        if side == R:
            return StepKind("conjunctive")
        raise ValueError(f"{name} needs the principal's side tag")
    if name == "LboxR":
        i, j = fresh if fresh else (None, None)
        if side == L:
            return StepKind("diamond_like", i, j)
        if side == R:
            return StepKind("box_like", i, j)
        raise ValueError("LboxR needs the principal's side tag")
    if name == "Lser":
        i, j = fresh if fresh else (None, None)
        # sound as either under seriality; diamond-like by default
        return StepKind("diamond_like", i, j)
    raise ValueError(f"unknown rule {name!r}")


# ---------------------------------------------------------------------------
# Split propagation over labelled proofs

class ExtractionError(Exception):
    pass


def labelled_split_proof(t: LabelledProofTree, calculus: LG3,
                         ant_tags: tuple, suc_tags: tuple) -> LabelledSplitProof:
    """Tag every formula occurrence; relational atoms stay untagged."""

    def walk(node: LabelledProofTree, atags: tuple, stags: tuple) -> LabelledSplitProof:
        concl = node.conclusion
        info = match_rule(calculus, node.rule, concl,
                          tuple(p.conclusion for p in node.premises),
                          tuple(node.principal))
        if not info.ok:
            raise ExtractionError(
                f"split propagation lost the rule match: {info.reason}")
        nR, nA = len(concl.rel), len(concl.ant)

        prin_tag = None
        for flat in node.principal:
            if flat < nR:
                continue
            prin_tag = (atags[flat - nR] if flat < nR + nA
                        else stags[flat - nR - nA])
            break

        kids = []
        for prem_tree, (ant_src, suc_src) in zip(node.premises, info.sources):
            def resolve(src) -> str:
                if src == ("act",):
                    return prin_tag
                kind = src[0]
                if kind == "ctx":
                    _, side, pos = src
                    return atags[pos] if side == "ant" else stags[pos]
                raise ExtractionError(f"unknown occurrence source {src!r}")
            p_ant = tuple(resolve(s_) for s_ in ant_src)
            p_suc = tuple(resolve(s_) for s_ in suc_src)
            kids.append(walk(prem_tree, p_ant, p_suc))

        fresh = node.fresh if node.fresh is not None else info.fresh
        return LabelledSplitProof(concl, atags, stags, node.rule,
                                  tuple(node.principal), tuple(kids), fresh)

    concl = t.conclusion
    if len(ant_tags) != len(concl.ant) or len(suc_tags) != len(concl.suc):
        raise ExtractionError("root tags must cover every formula occurrence")
    return walk(t, tuple(ant_tags), tuple(suc_tags))


# ---------------------------------------------------------------------------
# Extraction

def _node_interpolant(sp: LabelledSplitProof, mode: str, lser_box_like: bool,
                      out: Optional[list]) -> Multiformula:
    rule = sp.rule
    concl = sp.conclusion
    nR, nA = len(concl.rel), len(concl.ant)

    def occ(flat: int):
        kind, pos, item = concl.at(flat)
        if kind == "rel":
            return None, None
        tag = sp.ant_tags[pos] if kind == "ant" else sp.suc_tags[pos]
        return item, tag

    def done(m: Multiformula) -> Multiformula:
        if out is not None:
            out.append((sp, m))
        return m

    if rule == "Lid":
        (i, phi), ta = occ(sp.principal[0])
        _, ts = occ(sp.principal[1])
        if mode == "lyndon" and not isinstance(phi, Atom):
            raise ExtractionError(
                "lyndon mode needs atomic axiom leaves; got "
                f"{render_formula(phi)!r}")
        if ta == L and ts == R:
            return done(Lab(i, phi))
        if ta == R and ts == R:
            return done(Lab(i, top))
        if ta == L and ts == L:
            return done(Lab(i, bot))
        return done(Lab(i, neg(phi)))

    if rule in ("LbotL", "LtopR"):
        (i, _), tag = occ(sp.principal[0])
        return done(Lab(i, bot if tag == L else top))

    subs = [_node_interpolant(p, mode, lser_box_like, out) for p in sp.premises]

    if rule in _LOCAL or rule in _HORN:
        return done(subs[0])

    if rule in _BRANCHING:
        _, tag = occ(sp.principal[0])
        if subs[0] == subs[1]:
            # both branches contributed the same part; gluing two copies
            # only bloats the result, and idempotence keeps this sound
            return done(subs[0])
        op = MDisj if tag == L else MConj
        return done(op(subs[0], subs[1]))

    if rule == "LboxR":
        _, tag = occ(sp.principal[0])
        kind = classify_split_step(sp, tag)
        i, j = kind.i, kind.j
        u = subs[0]
        if kind.kind == "box_like":
            return done(replace_label_modal(
                separate(u, j, "conj_disj", spare=i), j, i, "box"))
        return done(replace_label_modal(
            separate(u, j, "disj_conj", spare=i), j, i, "diamond"))

    if rule == "Lser":
        i, j = sp.fresh
        u = subs[0]
        if j not in labels(u):
            # the discharged world never made it into the interpolant;
            # sound to keep it unchanged, but only under seriality
            return done(u)
        if lser_box_like:
            return done(replace_label_modal(
                separate(u, j, "conj_disj", spare=i), j, i, "box"))
        return done(replace_label_modal(
            separate(u, j, "disj_conj", spare=i), j, i, "diamond"))

    raise ExtractionError(f"no interpolant transformation for rule {rule!r}")


def extract_labelled_interpolant(sp: LabelledSplitProof, mode: str = "craig",
                                 lser_box_like: bool = False) -> Multiformula:
    if mode not in ("craig", "lyndon"):
        raise ExtractionError(f"unknown mode {mode!r}")
    return _node_interpolant(sp, mode, lser_box_like, None)


def extract_with_nodes(sp: LabelledSplitProof, mode: str = "craig",
                       lser_box_like: bool = False):
    """Like extract_labelled_interpolant, also returning every node's
    interpolant in leaf-to-root order (root last)."""
    trace: list = []
    root = _node_interpolant(sp, mode, lser_box_like, trace)
    return root, trace


# ---------------------------------------------------------------------------
# End-to-end query

_FRAME_NAMES = {
    frozenset(): "K", frozenset({"refl"}): "T", frozenset({"serial"}): "D",
    frozenset({"trans"}): "K4", frozenset({"refl", "trans"}): "S4",
    frozenset({"refl", "eucl"}): "S5",
}


def frame_logic_name(frame: frozenset) -> str:
    name = _FRAME_NAMES.get(frozenset(frame))
    if name is not None:
        return name
    return ",".join(sorted(frame))


def interpolate_labelled(frame, phi: Formula, psi: Formula,
                         mode: str = "craig",
                         budget: SearchBudget = DEFAULT_BUDGET,
                         logic: Optional[str] = None,
                         verify: bool = True,
                         lser_box_like: bool = False):
    """Prove (1:phi => 1:psi) over the frame's labelled calculus, split it
    as (1:phi; => ;1:psi), extract a multiformula, collapse, verify."""
    from .maehara import InterpolationResult
    frame = frozenset(frame)
    calculus = LG3(frame)
    if logic is None:
        logic = frame_logic_name(frame)

    goal = lseq([], [(1, phi)], [(1, psi)])
    outcome = prove_labelled(frame, goal, budget)
    if outcome.status != PROVED:
        return InterpolationResult(outcome.status, mode, logic,
                                   str(calculus), search=outcome)

    sp = labelled_split_proof(outcome.proof, calculus, (L,), (R,))
    u = extract_labelled_interpolant(sp, mode, lser_box_like)
    theta = mf_form(u)

    verification = None
    if verify:
        from . import kripke
        verification = kripke.verify_craig(logic, phi, theta, psi, mode)
    return InterpolationResult("interpolated", mode, logic, str(calculus),
                               theta, sp, multiformula=u,
                               verification=verification, search=outcome)
