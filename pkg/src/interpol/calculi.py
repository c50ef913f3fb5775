"""Rule tables, backward instance enumeration, and proof validation.

A rule instance records, for every premise occurrence, where that occurrence
comes from in the conclusion: a context copy, an active (principal-derived)
formula, a cut formula, or the unboxing of a boxed context formula.  The
interpolant extractors lean on these sources to push side tags from a
conclusion into its premises without re-deriving rule shapes.

Rule identifiers double for the spelled-out sequent rules and their
context-sharing variants: validation accepts both the bare shapes and the
shapes with side formulas carried along, while backward search only ever
produces the context-sharing forms.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .syntax import (
    Atom,
    Box,
    And,
    Formula,
    Implies,
    Or,
    bot,
    render_formula,
    subformulas,
    top,
)
from .sequents import (
    LabelledProofTree,
    LabelledSequent,
    LabelledSplitProof,
    LabFormula,
    ProofTree,
    Sequent,
    SplitProofTree,
    lseq,
    render_labelled,
    render_sequent,
    seq,
)

# ---------------------------------------------------------------------------
# Calculi

_PROP_RULES = frozenset({
    "id", "botL", "topR", "andL", "andR", "orL", "orR", "impL", "impR",
})
_STRUCT_RULES = frozenset({"wkL", "wkR", "ctrL", "ctrR"})
_LK_RULES = _PROP_RULES | _STRUCT_RULES | {"cut"}
_LJ_RULES = (_LK_RULES - {"ctrR"})

TABLES: dict[str, frozenset[str]] = {
    "LK": _LK_RULES,
    "LJ": _LJ_RULES,
    "G3K": _LK_RULES | {"K"},
    "G3T": _LK_RULES | {"K", "T"},
    "G3D": _LK_RULES | {"K", "D"},
    "G3K4": _LK_RULES | {"4"},
    "G3S4": _LK_RULES | {"S4", "T"},
    "G3GL": _LK_RULES | {"GL"},
    "GS5": (_LK_RULES - {"cut"}) | {"cutA", "T", "5r"},
}

FRAME_CONDITIONS = ("refl", "trans", "symm", "eucl", "serial")

_FRAME_RULES = {
    "refl": "Lrefl",
    "trans": "Ltrans",
    "symm": "Lsymm",
    "eucl": "Leucl",
    "serial": "Lser",
}

_LABELLED_BASE = frozenset({
    "Lid", "LbotL", "LtopR", "LandL", "LandR", "LorL", "LorR",
    "LimpL", "LimpR", "LboxL", "LboxR",
})


@dataclass(frozen=True)
class LG3:
    """Labelled calculus for the basic modal logic plus a set of frame conditions."""
    frame: frozenset[str]

    def __post_init__(self) -> None:
        bad = self.frame - set(FRAME_CONDITIONS)
        if bad:
            raise ValueError(f"unknown frame conditions: {sorted(bad)}")

    def __str__(self) -> str:
        return "LG3{" + ",".join(sorted(self.frame)) + "}"


CalculusId = Union[str, LG3]


def lg3(*conditions: str) -> LG3:
    return LG3(frozenset(conditions))


def calculus_name(c: CalculusId) -> str:
    return str(c)


def parse_calculus(name: str) -> CalculusId:
    if name in TABLES:
        return name
    if name.startswith("LG3{") and name.endswith("}"):
        inner = name[4:-1]
        names = [n for n in inner.split(",") if n]
        return LG3(frozenset(_canon_frame(n) for n in names))
    raise ValueError(f"unknown calculus {name!r}")


def calculus_table(c: CalculusId) -> frozenset[str]:
    if isinstance(c, LG3):
        return _LABELLED_BASE | {_FRAME_RULES[f] for f in c.frame}
    try:
        return TABLES[c]
    except KeyError:
        raise ValueError(f"unknown calculus {c!r}") from None


def is_labelled_calculus(c: CalculusId) -> bool:
    return isinstance(c, LG3)


_FRAME_ALIASES = {
    "refl": "refl", "reflexive": "refl",
    "trans": "trans", "transitive": "trans",
    "symm": "symm", "sym": "symm", "symmetric": "symm",
    "eucl": "eucl", "euclidean": "eucl",
    "ser": "serial", "serial": "serial",
}


def _canon_frame(name: str) -> str:
    try:
        return _FRAME_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown frame condition {name!r}") from None


_NAMED_LOGICS = {
    "CPC": "LK", "IPC": "LJ",
    "K": "G3K", "T": "G3T", "D": "G3D", "K4": "G3K4",
    "S4": "G3S4", "GL": "G3GL",
}

_NAMED_FRAMES: dict[str, Optional[frozenset[str]]] = {
    "CPC": None, "IPC": None, "GL": None,
    "K": frozenset(), "T": frozenset({"refl"}), "D": frozenset({"serial"}),
    "K4": frozenset({"trans"}), "S4": frozenset({"refl", "trans"}),
    "S5": frozenset({"refl", "eucl"}),
}


def calculus_for_logic(logic: str) -> CalculusId:
    """Default calculus for a logic name or a frame-condition set.

    Frame sets are written as comma or plus separated condition names,
    optionally braced: "refl,trans", "serial+symm", "{}".
    """
    name = logic.strip()
    key = name.upper()
    if key in _NAMED_LOGICS:
        return _NAMED_LOGICS[key]
    if key == "S5":
        return LG3(frozenset({"refl", "eucl"}))
    try:
        return LG3(logic_frame_set(name))
    except ValueError as err:
        raise ValueError(f"unknown logic {logic!r} ({err})") from None


def logic_frame(logic: str) -> Optional[frozenset[str]]:
    """First-order frame conditions characterising a logic, if any."""
    key = logic.strip().upper()
    if key in _NAMED_FRAMES:
        return _NAMED_FRAMES[key]
    return logic_frame_set(logic)


def logic_frame_set(name: str) -> frozenset[str]:
    inner = name.strip()
    if inner.startswith("{") and inner.endswith("}"):
        inner = inner[1:-1]
    if not inner:
        return frozenset()
    parts = inner.replace("+", ",").split(",")
    return frozenset(_canon_frame(p) for p in parts if p.strip())


# ---------------------------------------------------------------------------
# Rule instances

# Occurrence sources, per premise occurrence:
#   ("ctx", side, pos)  copy of the conclusion occurrence at pos on side
#   ("act",)            active formula introduced by the rule
#   ("cut",)            cut formula
#   ("unbox", pos)      unboxing of the conclusion antecedent occurrence at pos
Source = tuple
ACT: Source = ("act",)
CUT: Source = ("cut",)

PremiseSources = tuple[tuple[Source, ...], tuple[Source, ...]]


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    conclusion: Union[Sequent, LabelledSequent]
    premises: tuple
    principal: tuple[int, ...]
    sources: tuple[PremiseSources, ...]
    fresh: Optional[tuple[int, int]] = None
    cut_formula: Optional[Formula] = None


@dataclass(frozen=True)
class MatchInfo:
    ok: bool
    reason: Optional[str] = None
    sources: tuple[PremiseSources, ...] = ()
    principal: tuple[int, ...] = ()
    fresh: Optional[tuple[int, int]] = None
    cut_formula: Optional[Formula] = None


def _no(reason: str) -> MatchInfo:
    return MatchInfo(False, reason)


def _side_ctx(side: str, items: tuple, skips: frozenset[int] = frozenset(),
              extras: tuple = ()) -> tuple[tuple, tuple[Source, ...]]:
    """Context copies minus skipped positions, plus (item, source) extras."""
    fs = []
    srcs: list[Source] = []
    for p, f in enumerate(items):
        if p in skips:
            continue
        fs.append(f)
        srcs.append(("ctx", side, p))
    for f, src in extras:
        fs.append(f)
        srcs.append(src)
    return tuple(fs), tuple(srcs)


def _boxed_ant(s: Sequent) -> list[tuple[int, Formula]]:
    return [(p, f.child) for p, f in enumerate(s.ant) if isinstance(f, Box)]


def _boxed_suc(s: Sequent, skip: int = -1) -> list[tuple[int, Formula]]:
    return [(p, f) for p, f in enumerate(s.suc)
            if p != skip and isinstance(f, Box)]


def _gen_unlabelled(calculus: CalculusId, rule: str, s: Sequent,
                    search: bool) -> Iterator[RuleInstance]:
    """Enumerate instances of one rule with the given conclusion.

    With search=True only the context-sharing backward shapes come out; with
    search=False the spelled-out variants (projection/injection forms, the
    structural rules) are included as well.
    """
    A, S = s.ant, s.suc
    nA = len(A)
    lj = calculus == "LJ"

    def inst(premises_with_sources, principal, fresh=None, cut_formula=None):
        prems = tuple(p for p, _ in premises_with_sources)
        srcs = tuple(ps for _, ps in premises_with_sources)
        return RuleInstance(rule, s, prems, tuple(principal), srcs, fresh, cut_formula)

    if rule == "id":
        for i, fa in enumerate(A):
            if not isinstance(fa, Atom):
                continue
            for j, fb in enumerate(S):
                if fa == fb:
                    yield inst([], [i, nA + j])
        return

    if rule == "botL":
        for i, fa in enumerate(A):
            if fa == bot:
                yield inst([], [i])
        return

    if rule == "topR":
        for j, fb in enumerate(S):
            if fb == top:
                yield inst([], [nA + j])
        return

    if rule == "andL":
        for i, fa in enumerate(A):
            if not isinstance(fa, And):
                continue
            skips = frozenset({i})
            both = _side_ctx("ant", A, skips, ((fa.left, ACT), (fa.right, ACT)))
            sucs = _side_ctx("suc", S)
            yield inst([(Sequent(both[0], sucs[0]), (both[1], sucs[1]))], [i])
            if not search:
                for piece in (fa.left, fa.right):
                    one = _side_ctx("ant", A, skips, ((piece, ACT),))
                    yield inst([(Sequent(one[0], sucs[0]), (one[1], sucs[1]))], [i])
        return

    if rule == "orR":
        for j, fb in enumerate(S):
            if not isinstance(fb, Or):
                continue
            skips = frozenset({j})
            ants = _side_ctx("ant", A)
            if not lj:
                both = _side_ctx("suc", S, skips, ((fb.left, ACT), (fb.right, ACT)))
                yield inst([(Sequent(ants[0], both[0]), (ants[1], both[1]))], [nA + j])
            if lj or not search:
                for piece in (fb.left, fb.right):
                    one = _side_ctx("suc", S, skips, ((piece, ACT),))
                    yield inst([(Sequent(ants[0], one[0]), (ants[1], one[1]))], [nA + j])
        return

    if rule == "orL":
        for i, fa in enumerate(A):
            if not isinstance(fa, Or):
                continue
            skips = frozenset({i})
            sucs = _side_ctx("suc", S)
            la = _side_ctx("ant", A, skips, ((fa.left, ACT),))
            ra = _side_ctx("ant", A, skips, ((fa.right, ACT),))
            yield inst([(Sequent(la[0], sucs[0]), (la[1], sucs[1])),
                        (Sequent(ra[0], sucs[0]), (ra[1], sucs[1]))], [i])
        return

    if rule == "andR":
        for j, fb in enumerate(S):
            if not isinstance(fb, And):
                continue
            skips = frozenset({j})
            ants = _side_ctx("ant", A)
            ls = _side_ctx("suc", S, skips, ((fb.left, ACT),))
            rs = _side_ctx("suc", S, skips, ((fb.right, ACT),))
            yield inst([(Sequent(ants[0], ls[0]), (ants[1], ls[1])),
                        (Sequent(ants[0], rs[0]), (ants[1], rs[1]))], [nA + j])
        return

    if rule == "impL":
        for i, fa in enumerate(A):
            if not isinstance(fa, Implies):
                continue
            skips = frozenset({i})
            right_ant = _side_ctx("ant", A, skips, ((fa.right, ACT),))
            right_suc = _side_ctx("suc", S)
            p2 = (Sequent(right_ant[0], right_suc[0]), (right_ant[1], right_suc[1]))
            if lj:
                # the first premise keeps the implication and forgets the
                # succedent; the bare variant without retention also validates
                keeps = [_side_ctx("ant", A)]
                if not search:
                    keeps.append(_side_ctx("ant", A, skips))
                for left_ant in keeps:
                    p1 = (Sequent(left_ant[0], (fa.left,)), (left_ant[1], (ACT,)))
                    yield inst([p1, p2], [i])
            else:
                left_ant = _side_ctx("ant", A, skips)
                left_suc = _side_ctx("suc", S, frozenset(), ((fa.left, ACT),))
                p1 = (Sequent(left_ant[0], left_suc[0]), (left_ant[1], left_suc[1]))
                yield inst([p1, p2], [i])
        return

    if rule == "impR":
        for j, fb in enumerate(S):
            if not isinstance(fb, Implies):
                continue
            ants = _side_ctx("ant", A, frozenset(), ((fb.left, ACT),))
            sucs = _side_ctx("suc", S, frozenset({j}), ((fb.right, ACT),))
            yield inst([(Sequent(ants[0], sucs[0]), (ants[1], sucs[1]))], [nA + j])
        return

    if rule in ("wkL", "wkR", "ctrL", "ctrR"):
        if search:
            return
        if rule == "wkL":
            for i in range(nA):
                ants = _side_ctx("ant", A, frozenset({i}))
                sucs = _side_ctx("suc", S)
                yield inst([(Sequent(ants[0], sucs[0]), (ants[1], sucs[1]))], [i])
        elif rule == "wkR":
            for j in range(len(S)):
                ants = _side_ctx("ant", A)
                sucs = _side_ctx("suc", S, frozenset({j}))
                yield inst([(Sequent(ants[0], sucs[0]), (ants[1], sucs[1]))], [nA + j])
        elif rule == "ctrL":
            for i in range(nA):
                ants = _side_ctx("ant", A, frozenset(), ((A[i], ("ctx", "ant", i)),))
                sucs = _side_ctx("suc", S)
                yield inst([(Sequent(ants[0], sucs[0]), (ants[1], sucs[1]))], [i])
        else:
            for j in range(len(S)):
                ants = _side_ctx("ant", A)
                sucs = _side_ctx("suc", S, frozenset(), ((S[j], ("ctx", "suc", j)),))
                yield inst([(Sequent(ants[0], sucs[0]), (ants[1], sucs[1]))], [nA + j])
        return

    if rule == "T":
        ant_counter = Counter(A)
        for i, fa in enumerate(A):
            if not isinstance(fa, Box):
                continue
            if search and ant_counter[fa.child] > 0:
                continue
            ants = _side_ctx("ant", A, frozenset(), ((fa.child, ACT),))
            sucs = _side_ctx("suc", S)
            yield inst([(Sequent(ants[0], sucs[0]), (ants[1], sucs[1]))], [i])
        return

    if rule == "K":
        boxed = _boxed_ant(s)
        for j, fb in enumerate(S):
            if not isinstance(fb, Box):
                continue
            prem = Sequent(tuple(g for _, g in boxed), (fb.child,))
            srcs = (tuple(("unbox", p) for p, _ in boxed), (ACT,))
            yield inst([(prem, srcs)], [nA + j])
        return

    if rule == "D":
        boxed = _boxed_ant(s)
        if not boxed:
            return
        prem = Sequent(tuple(g for _, g in boxed), ())
        srcs = (tuple(("unbox", p) for p, _ in boxed), ())
        yield inst([(prem, srcs)], [])
        return

    if rule == "4":
        boxed = _boxed_ant(s)
        for j, fb in enumerate(S):
            if not isinstance(fb, Box):
                continue
            ant = tuple(A[p] for p, _ in boxed) + tuple(g for _, g in boxed)
            srcs_ant = tuple(("ctx", "ant", p) for p, _ in boxed) + \
                tuple(("unbox", p) for p, _ in boxed)
            yield inst([(Sequent(ant, (fb.child,)), (srcs_ant, (ACT,)))], [nA + j])
        return

    if rule == "S4":
        boxed = _boxed_ant(s)
        for j, fb in enumerate(S):
            if not isinstance(fb, Box):
                continue
            ant = tuple(A[p] for p, _ in boxed)
            srcs_ant = tuple(("ctx", "ant", p) for p, _ in boxed)
            yield inst([(Sequent(ant, (fb.child,)), (srcs_ant, (ACT,)))], [nA + j])
        return

    if rule == "GL":
        boxed = _boxed_ant(s)
        for j, fb in enumerate(S):
            if not isinstance(fb, Box):
                continue
            ant = tuple(A[p] for p, _ in boxed) + tuple(g for _, g in boxed) + (fb,)
            srcs_ant = tuple(("ctx", "ant", p) for p, _ in boxed) + \
                tuple(("unbox", p) for p, _ in boxed) + (ACT,)
            yield inst([(Sequent(ant, (fb.child,)), (srcs_ant, (ACT,)))], [nA + j])
        return

    if rule == "5r":
        boxed = _boxed_ant(s)
        for j, fb in enumerate(S):
            if not isinstance(fb, Box):
                continue
            others = _boxed_suc(s, skip=j)
            ant = tuple(A[p] for p, _ in boxed)
            srcs_ant = tuple(("ctx", "ant", p) for p, _ in boxed)
            suc = (fb.child,) + tuple(g for _, g in others)
            srcs_suc = (ACT,) + tuple(("ctx", "suc", p) for p, _ in others)
            yield inst([(Sequent(ant, suc), (srcs_ant, srcs_suc))], [nA + j])
        return

    if rule == "cutA":
        if not search:
            return
        seen: set[str] = set()
        pool: list[Formula] = []
        for f in A + S:
            for g in subformulas(f):
                k = render_formula(g)
                if k not in seen:
                    seen.add(k)
                    pool.append(g)
        ants = _side_ctx("ant", A)
        sucs = _side_ctx("suc", S)
        for g in pool:
            p1 = (Sequent(ants[0], sucs[0] + (g,)), (ants[1], sucs[1] + (CUT,)))
            p2 = (Sequent(ants[0] + (g,), sucs[0]), (ants[1] + (CUT,), sucs[1]))
            yield inst([p1, p2], [], cut_formula=g)
        return

    if rule == "cut":
        # validated directly from the premises; never enumerated backwards
        return

    raise ValueError(f"unknown rule {rule!r}")


# ---------------------------------------------------------------------------
# Labelled instances

def _lab_side_ctx(side: str, items: tuple[LabFormula, ...],
                  skips: frozenset[int] = frozenset(),
                  extras: tuple = ()) -> tuple[tuple, tuple[Source, ...]]:
    fs = []
    srcs: list[Source] = []
    for p, lf in enumerate(items):
        if p in skips:
            continue
        fs.append(lf)
        srcs.append(("ctx", side, p))
    for lf, src in extras:
        fs.append(lf)
        srcs.append(src)
    return tuple(fs), tuple(srcs)


def _fresh_label(s: LabelledSequent) -> int:
    labels = s.labels()
    return (max(labels) + 1) if labels else 1


def _gen_labelled(calculus: LG3, rule: str, s: LabelledSequent,
                  search: bool) -> Iterator[RuleInstance]:
    rel, A, S = s.rel, s.ant, s.suc
    nR, nA = len(rel), len(A)

    def inst(premises_with_sources, principal, fresh=None):
        prems = tuple(p for p, _ in premises_with_sources)
        srcs = tuple(ps for _, ps in premises_with_sources)
        return RuleInstance(rule, s, prems, tuple(principal), srcs, fresh)

    if rule == "Lid":
        for k, (i, fa) in enumerate(A):
            if search and not isinstance(fa, Atom):
                continue
            for m, (i2, fb) in enumerate(S):
                if i == i2 and fa == fb:
                    yield inst([], [nR + k, nR + nA + m])
        return

    if rule == "LbotL":
        for k, (_, fa) in enumerate(A):
            if fa == bot:
                yield inst([], [nR + k])
        return

    if rule == "LtopR":
        for m, (_, fb) in enumerate(S):
            if fb == top:
                yield inst([], [nR + nA + m])
        return

    if rule == "LandL":
        for k, (i, fa) in enumerate(A):
            if not isinstance(fa, And):
                continue
            ants = _lab_side_ctx("ant", A, frozenset({k}),
                                 (((i, fa.left), ACT), ((i, fa.right), ACT)))
            sucs = _lab_side_ctx("suc", S)
            yield inst([(lseq(rel, ants[0], sucs[0]), (ants[1], sucs[1]))], [nR + k])
        return

    if rule == "LorR":
        for m, (i, fb) in enumerate(S):
            if not isinstance(fb, Or):
                continue
            ants = _lab_side_ctx("ant", A)
            sucs = _lab_side_ctx("suc", S, frozenset({m}),
                                 (((i, fb.left), ACT), ((i, fb.right), ACT)))
            yield inst([(lseq(rel, ants[0], sucs[0]), (ants[1], sucs[1]))], [nR + nA + m])
        return

    if rule == "LorL":
        for k, (i, fa) in enumerate(A):
            if not isinstance(fa, Or):
                continue
            sucs = _lab_side_ctx("suc", S)
            la = _lab_side_ctx("ant", A, frozenset({k}), (((i, fa.left), ACT),))
            ra = _lab_side_ctx("ant", A, frozenset({k}), (((i, fa.right), ACT),))
            yield inst([(lseq(rel, la[0], sucs[0]), (la[1], sucs[1])),
                        (lseq(rel, ra[0], sucs[0]), (ra[1], sucs[1]))], [nR + k])
        return

    if rule == "LandR":
        for m, (i, fb) in enumerate(S):
            if not isinstance(fb, And):
                continue
            ants = _lab_side_ctx("ant", A)
            ls = _lab_side_ctx("suc", S, frozenset({m}), (((i, fb.left), ACT),))
            rs = _lab_side_ctx("suc", S, frozenset({m}), (((i, fb.right), ACT),))
            yield inst([(lseq(rel, ants[0], ls[0]), (ants[1], ls[1])),
                        (lseq(rel, ants[0], rs[0]), (ants[1], rs[1]))], [nR + nA + m])
        return

    if rule == "LimpL":
        for k, (i, fa) in enumerate(A):
            if not isinstance(fa, Implies):
                continue
            la = _lab_side_ctx("ant", A, frozenset({k}))
            ls = _lab_side_ctx("suc", S, frozenset(), (((i, fa.left), ACT),))
            ra = _lab_side_ctx("ant", A, frozenset({k}), (((i, fa.right), ACT),))
            rs = _lab_side_ctx("suc", S)
            yield inst([(lseq(rel, la[0], ls[0]), (la[1], ls[1])),
                        (lseq(rel, ra[0], rs[0]), (ra[1], rs[1]))], [nR + k])
        return

    if rule == "LimpR":
        for m, (i, fb) in enumerate(S):
            if not isinstance(fb, Implies):
                continue
            ants = _lab_side_ctx("ant", A, frozenset(), (((i, fb.left), ACT),))
            sucs = _lab_side_ctx("suc", S, frozenset({m}), (((i, fb.right), ACT),))
            yield inst([(lseq(rel, ants[0], sucs[0]), (ants[1], sucs[1]))], [nR + nA + m])
        return

    if rule == "LboxL":
        have = set(A)
        for r, (i, j) in enumerate(rel):
            for k, (i2, fa) in enumerate(A):
                if i2 != i or not isinstance(fa, Box):
                    continue
                if search and (j, fa.child) in have:
                    continue
                ants = _lab_side_ctx("ant", A, frozenset(), (((j, fa.child), ACT),))
                sucs = _lab_side_ctx("suc", S)
                yield inst([(lseq(rel, ants[0], sucs[0]), (ants[1], sucs[1]))],
                           [r, nR + k])
        return

    if rule == "LboxR":
        for m, (i, fb) in enumerate(S):
            if not isinstance(fb, Box):
                continue
            j = _fresh_label(s)
            ants = _lab_side_ctx("ant", A)
            sucs = _lab_side_ctx("suc", S, frozenset({m}), (((j, fb.child), ACT),))
            yield inst([(lseq(rel + ((i, j),), ants[0], sucs[0]), (ants[1], sucs[1]))],
                       [nR + nA + m], fresh=(i, j))
        return

    if rule in ("Lrefl", "Ltrans", "Lsymm", "Leucl", "Lser"):
        have = set(rel)
        ants = _lab_side_ctx("ant", A)
        sucs = _lab_side_ctx("suc", S)

        def horn(new_atom, fresh=None):
            prem = lseq(rel + (new_atom,), ants[0], sucs[0])
            return inst([(prem, (ants[1], sucs[1]))], [], fresh=fresh)

        if rule == "Lrefl":
            for i in sorted(s.labels()):
                if (i, i) not in have:
                    yield horn((i, i))
        elif rule == "Ltrans":
            for (i, j) in rel:
                for (j2, k) in rel:
                    if j == j2 and (i, k) not in have:
                        have.add((i, k))
                        yield horn((i, k))
        elif rule == "Lsymm":
            for (i, j) in rel:
                if (j, i) not in have:
                    have.add((j, i))
                    yield horn((j, i))
        elif rule == "Leucl":
            for (i, j) in rel:
                for (i2, k) in rel:
                    if i == i2 and (j, k) not in have:
                        have.add((j, k))
                        yield horn((j, k))
        else:  # Lser
            successors = {i for i, _ in rel}
            for i in sorted(s.labels()):
                if search and i in successors:
                    continue
                j = _fresh_label(s)
                yield horn((i, j), fresh=(i, j))
        return

    raise ValueError(f"unknown labelled rule {rule!r}")


# ---------------------------------------------------------------------------
# Matching a claimed instance

def _item_key(item) -> object:
    if isinstance(item, Formula):
        return render_formula(item)
    i, f = item
    return (i, render_formula(f))


def _align_sources(gen_items: tuple, gen_sources: tuple[Source, ...],
                   given_items: tuple) -> Optional[tuple[Source, ...]]:
    """Map generated per-occurrence sources onto the given occurrence order.

    Equal formulas are interchangeable for side-tag purposes, so a greedy
    assignment is enough.
    """
    if len(gen_items) != len(given_items):
        return None
    used = [False] * len(gen_items)
    out: list[Source] = []
    for g in given_items:
        gk = _item_key(g)
        for idx, item in enumerate(gen_items):
            if not used[idx] and _item_key(item) == gk:
                used[idx] = True
                out.append(gen_sources[idx])
                break
        else:
            return None
    return tuple(out)


def _match_by_enumeration(calculus: CalculusId, rule: str,
                          conclusion, premises: tuple,
                          principal: tuple[int, ...]) -> MatchInfo:
    labelled = isinstance(conclusion, LabelledSequent)
    gen = (_gen_labelled(calculus, rule, conclusion, search=False) if labelled
           else _gen_unlabelled(calculus, rule, conclusion, search=False))
    near_miss = None
    for cand in gen:
        if principal and cand.principal and tuple(principal) != cand.principal:
            continue
        if len(cand.premises) != len(premises):
            near_miss = f"{rule} expects {len(cand.premises)} premises"
            continue
        if any(cp != gp for cp, gp in zip(cand.premises, premises)):
            near_miss = f"premises do not match any {rule} instance"
            continue
        aligned: list[PremiseSources] = []
        okay = True
        for cp, gp, (ant_src, suc_src) in zip(cand.premises, premises, cand.sources):
            a = _align_sources(cp.ant, ant_src, gp.ant)
            b = _align_sources(cp.suc, suc_src, gp.suc)
            if a is None or b is None:
                okay = False
                break
            aligned.append((a, b))
        if not okay:
            continue
        return MatchInfo(True, None, tuple(aligned), cand.principal,
                         cand.fresh, cand.cut_formula)
    return _no(near_miss or f"no {rule} instance has this conclusion")


def _ctx_lookup(side: str, items: tuple, f: Formula) -> Optional[Source]:
    for p, g in enumerate(items):
        if g == f:
            return ("ctx", side, p)
    return None


def _match_cut(rule: str, s: Sequent, premises: tuple,
               analytic: bool) -> MatchInfo:
    if len(premises) != 2:
        return _no(f"{rule} expects 2 premises")
    p1, p2 = premises
    sub_pool = None
    if analytic:
        sub_pool = set()
        for f in s.ant + s.suc:
            sub_pool |= {render_formula(g) for g in subformulas(f)}
    candidates = []
    seen = set()
    c2 = Counter(p2.ant)
    for f in p1.suc:
        k = render_formula(f)
        if k in seen or c2[f] == 0:
            continue
        seen.add(k)
        candidates.append(f)
    for phi in candidates:
        if analytic and render_formula(phi) not in sub_pool:
            continue
        srcs: list[PremiseSources] = []
        ok = True
        for prem, cut_side in ((p1, "suc"), (p2, "ant")):
            ant_src: list[Source] = []
            suc_src: list[Source] = []
            cut_used = False
            for g in prem.ant:
                if cut_side == "ant" and not cut_used and g == phi:
                    cut_used = True
                    ant_src.append(CUT)
                    continue
                src = _ctx_lookup("ant", s.ant, g)
                if src is None:
                    ok = False
                    break
                ant_src.append(src)
            if not ok:
                break
            for g in prem.suc:
                if cut_side == "suc" and not cut_used and g == phi:
                    cut_used = True
                    suc_src.append(CUT)
                    continue
                src = _ctx_lookup("suc", s.suc, g)
                if src is None:
                    ok = False
                    break
                suc_src.append(src)
            if not ok or not cut_used:
                ok = False
                break
            srcs.append((tuple(ant_src), tuple(suc_src)))
        if ok:
            return MatchInfo(True, None, tuple(srcs), (), None, phi)
    if analytic and candidates and all(
            render_formula(c) not in sub_pool for c in candidates):
        return _no("cut formula is not a subformula of the conclusion")
    return _no(f"premises do not fit the {rule} shape over this conclusion")


def _match_k_or_d(rule: str, s: Sequent, premises: tuple,
                  principal: tuple[int, ...]) -> MatchInfo:
    if len(premises) != 1:
        return _no(f"{rule} expects 1 premise")
    p = premises[0]
    if rule == "K":
        if not principal:
            cands = [j for j, f in enumerate(s.suc) if isinstance(f, Box)]
        else:
            cands = [principal[0] - len(s.ant)]
        want = None
        for j in cands:
            if 0 <= j < len(s.suc) and isinstance(s.suc[j], Box):
                if p.suc == (s.suc[j].child,):
                    want = j
                    break
        if want is None:
            return _no("K premise succedent must be the unboxed principal")
        suc_src: tuple[Source, ...] = (ACT,)
        prin = (len(s.ant) + want,)
    else:
        if p.suc != ():
            return _no("D premise must have an empty succedent")
        suc_src = ()
        prin = ()
    used = [False] * len(s.ant)
    ant_src: list[Source] = []
    for g in p.ant:
        found = None
        for pos, f in enumerate(s.ant):
            if not used[pos] and isinstance(f, Box) and f.child == g:
                found = pos
                break
        if found is None:
            return _no(f"{rule} premise formula {render_formula(g)!r} "
                       "does not unbox a boxed antecedent formula")
        used[found] = True
        ant_src.append(("unbox", found))
    if rule == "D" and not ant_src:
        return _no("D needs at least one boxed antecedent formula")
    return MatchInfo(True, None, ((tuple(ant_src), suc_src),), prin)


def _match_fresh_labelled(calculus: LG3, rule: str, s: LabelledSequent,
                          premises: tuple,
                          principal: tuple[int, ...]) -> MatchInfo:
    """LboxR and Lser: accept any fresh label, not only the canonical one."""
    if len(premises) != 1:
        return _no(f"{rule} expects 1 premise")
    p = premises[0]
    new_labels = p.labels() - s.labels()
    if len(new_labels) != 1:
        return _no(f"{rule} must introduce exactly one fresh label")
    j = next(iter(new_labels))
    new_rel = list((Counter(p.rel) - Counter(s.rel)).elements())
    if len(new_rel) != 1 or Counter(s.rel) - Counter(p.rel):
        return _no(f"{rule} must add exactly one relational atom")
    (i, j2) = new_rel[0]
    if j2 != j or i == j:
        return _no(f"{rule} must relate an existing label to the fresh one")
    ant_src = _align_sources(s.ant, tuple(("ctx", "ant", p_) for p_ in range(len(s.ant))),
                             p.ant)
    if rule == "Lser":
        if ant_src is None or _align_sources(
                s.suc, tuple(("ctx", "suc", p_) for p_ in range(len(s.suc))),
                p.suc) is None:
            return _no("Lser must keep both sides unchanged")
        suc_src = _align_sources(
            s.suc, tuple(("ctx", "suc", p_) for p_ in range(len(s.suc))), p.suc)
        return MatchInfo(True, None, ((ant_src, suc_src),), (), (i, j))
    # LboxR: succedent swaps i:[]phi for j:phi
    if ant_src is None:
        return _no("LboxR must keep the antecedent unchanged")
    cands = []
    if principal:
        cands = [principal[0] - len(s.rel) - len(s.ant)]
    else:
        cands = [m for m, (i2, f) in enumerate(s.suc)
                 if i2 == i and isinstance(f, Box)]
    for m in cands:
        if not (0 <= m < len(s.suc)):
            continue
        (i2, f) = s.suc[m]
        if i2 != i or not isinstance(f, Box):
            continue
        want = tuple(lf for mm, lf in enumerate(s.suc) if mm != m) + ((j, f.child),)
        want_src = tuple(("ctx", "suc", mm) for mm in range(len(s.suc)) if mm != m) + (ACT,)
        suc_src = _align_sources(want, want_src, p.suc)
        if suc_src is not None and lseq(p.rel, p.ant, want) == p:
            return MatchInfo(True, None, ((ant_src, suc_src),),
                             (len(s.rel) + len(s.ant) + m,), (i, j))
    return _no("LboxR premise succedent must swap the boxed principal "
               "for its unboxing at the fresh label")


def _match_horn(calculus: LG3, rule: str, s: LabelledSequent,
                premises: tuple) -> MatchInfo:
    if len(premises) != 1:
        return _no(f"{rule} expects 1 premise")
    p = premises[0]
    ident = tuple(("ctx", "ant", k) for k in range(len(s.ant)))
    ant_src = _align_sources(s.ant, ident, p.ant)
    sident = tuple(("ctx", "suc", k) for k in range(len(s.suc)))
    suc_src = _align_sources(s.suc, sident, p.suc)
    if ant_src is None or suc_src is None:
        return _no(f"{rule} must keep both sides unchanged")
    added = list((Counter(p.rel) - Counter(s.rel)).elements())
    if Counter(s.rel) - Counter(p.rel) or len(added) != 1:
        return _no(f"{rule} must add exactly one relational atom")
    (a, b) = added[0]
    have = set(s.rel)
    labels = s.labels()
    ok = False
    if rule == "Lrefl":
        ok = a == b and a in labels
    elif rule == "Ltrans":
        ok = any((a, m) in have and (m, b) in have for m in labels)
    elif rule == "Lsymm":
        ok = (b, a) in have
    elif rule == "Leucl":
        ok = any((m, a) in have and (m, b) in have for m in labels)
    if not ok:
        return _no(f"added relational atom {a}R{b} is not justified by {rule}")
    return MatchInfo(True, None, ((ant_src, suc_src),), ())


def match_rule(calculus: CalculusId, rule: str, conclusion,
               premises: tuple, principal: tuple[int, ...] = ()) -> MatchInfo:
    """Check one proof node against the rule's legal shapes.

    Returns per-premise occurrence sources on success, for use by the
    split-sequent machinery.
    """
    table = calculus_table(calculus)
    if rule not in table:
        return _no(f"rule {rule} is not part of {calculus_name(calculus)}")
    labelled = isinstance(conclusion, LabelledSequent)
    if labelled != is_labelled_calculus(calculus):
        return _no("sequent kind does not match the calculus")
    if labelled:
        if rule in ("LboxR", "Lser"):
            return _match_fresh_labelled(calculus, rule, conclusion, premises, principal)
        if rule in ("Lrefl", "Ltrans", "Lsymm", "Leucl"):
            return _match_horn(calculus, rule, conclusion, premises)
        return _match_by_enumeration(calculus, rule, conclusion, premises, principal)
    if rule in ("cut", "cutA"):
        return _match_cut(rule, conclusion, premises, analytic=rule == "cutA")
    if rule in ("K", "D"):
        return _match_k_or_d(rule, conclusion, premises, principal)
    return _match_by_enumeration(calculus, rule, conclusion, premises, principal)


# ---------------------------------------------------------------------------
# Proof validation

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    error: Optional[str] = None
    path: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.ok


def _render_node(concl) -> str:
    if isinstance(concl, LabelledSequent):
        return render_labelled(concl)
    return render_sequent(concl)


def validate_proof(tree, calculus: CalculusId) -> ValidationReport:
    """Check every node of a proof tree bottom-up; split trees are checked
    through their erasure (tag bookkeeping is the extractor's business)."""
    if isinstance(tree, (SplitProofTree, LabelledSplitProof)):
        tree = tree.erase()
    lj = calculus == "LJ"

    def walk(node, path) -> Optional[ValidationReport]:
        concl = node.conclusion
        if lj and len(concl.suc) > 1:
            return ValidationReport(
                False, f"more than one succedent formula in {_render_node(concl)}", path)
        info = match_rule(calculus, node.rule, concl,
                          tuple(p.conclusion for p in node.premises),
                          tuple(node.principal))
        if not info.ok:
            return ValidationReport(
                False, f"{node.rule} at {_render_node(concl)}: {info.reason}", path)
        if isinstance(node, LabelledProofTree) and node.fresh is not None \
                and info.fresh is not None and node.fresh != info.fresh:
            return ValidationReport(
                False, f"{node.rule} fresh label mismatch at {_render_node(concl)}", path)
        for idx, prem in enumerate(node.premises):
            bad = walk(prem, path + (idx,))
            if bad is not None:
                return bad
        return None

    bad = walk(tree, ())
    return bad if bad is not None else ValidationReport(True)


# ---------------------------------------------------------------------------
# Backward enumeration for search

_SEARCH_ORDER = (
    "id", "botL", "topR",
    "andL", "orR", "impR",
    "T",
    "orL", "andR", "impL",
    "K", "4", "S4", "GL", "5r", "D",
    "cutA",
)

_SEARCH_ORDER_LABELLED = (
    "Lid", "LbotL", "LtopR",
    "Lrefl", "Ltrans", "Lsymm", "Leucl",
    "LandL", "LorR", "LimpR", "LboxL",
    "LorL", "LandR", "LimpL",
    "LboxR", "Lser",
)


def rule_instances(calculus: CalculusId, goal,
                   rules: Optional[tuple[str, ...]] = None) -> list[RuleInstance]:
    """All backward rule instances for a goal, in search priority order."""
    table = calculus_table(calculus)
    out: list[RuleInstance] = []
    if is_labelled_calculus(calculus):
        order = rules or _SEARCH_ORDER_LABELLED
        for rule in order:
            if rule in table:
                out.extend(_gen_labelled(calculus, rule, goal, search=True))
        return out
    order = rules or _SEARCH_ORDER
    for rule in order:
        if rule in table:
            out.extend(_gen_unlabelled(calculus, rule, goal, search=True))
    return out
