"""Multiset sequents, split sequents, labelled sequents, and proof trees.

Occurrence discipline: antecedent and succedent are stored as tuples, and a
position in the stored order is the occurrence's stable index.  Equality and
hashing ignore order (multiset semantics) but keep multiplicity.  Flat
occurrence indices used by proof nodes count the antecedent first, then the
succedent; labelled sequents count relational atoms first, then antecedent,
then succedent.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .syntax import (
    And,
    Formula,
    Implies,
    Or,
    SignedVocabulary,
    bot,
    parse_formula,
    render_formula,
    signed_vocabulary,
    top,
    weight,
)


def _fkey(f: Formula) -> str:
    return render_formula(f)


def _mkey(fs: Iterable[Formula]) -> tuple[str, ...]:
    return tuple(sorted(_fkey(f) for f in fs))


@dataclass(frozen=True, eq=False)
class Sequent:
    ant: tuple[Formula, ...]
    suc: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_key", (_mkey(self.ant), _mkey(self.suc)))

    @property
    def key(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return self._key  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Sequent) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Sequent({render_sequent(self)!r})"

    def occurrences(self) -> list[tuple[str, int, Formula]]:
        out = [("ant", i, f) for i, f in enumerate(self.ant)]
        out += [("suc", i, f) for i, f in enumerate(self.suc)]
        return out

    def at(self, flat_index: int) -> tuple[str, int, Formula]:
        """Resolve a flat occurrence index (antecedent first)."""
        if 0 <= flat_index < len(self.ant):
            return ("ant", flat_index, self.ant[flat_index])
        j = flat_index - len(self.ant)
        if 0 <= j < len(self.suc):
            return ("suc", j, self.suc[j])
        raise IndexError(f"occurrence {flat_index} out of range")

    def weight_total(self) -> int:
        return sum(weight(f) for f in self.ant) + sum(weight(f) for f in self.suc)

    def counts(self) -> tuple[Counter, Counter]:
        return Counter(self.ant), Counter(self.suc)

    def subsumes(self, other: "Sequent") -> bool:
        """Multiset inclusion of self in other, both sides."""
        sa, ss = self.counts()
        oa, os_ = other.counts()
        return not (sa - oa) and not (ss - os_)


def seq(ant: Iterable[Formula] = (), suc: Iterable[Formula] = ()) -> Sequent:
    return Sequent(tuple(ant), tuple(suc))


def render_sequent(s: Sequent) -> str:
    left = ", ".join(render_formula(f) for f in s.ant)
    right = ", ".join(render_formula(f) for f in s.suc)
    return f"{left} => {right}".strip()


def formula_interpretation(s: Sequent) -> Formula:
    """Conjunction of the antecedent implies disjunction of the succedent.

    Empty conjunction is top, empty disjunction is bot.
    """
    a: Formula = top
    if s.ant:
        a = s.ant[0]
        for f in s.ant[1:]:
            a = And(a, f)
    d: Formula = bot
    if s.suc:
        d = s.suc[0]
        for f in s.suc[1:]:
            d = Or(d, f)
    return Implies(a, d)


def sequent_signed_vocabulary(s: Sequent) -> SignedVocabulary:
    """Voc+ of a sequent is Voc- of the antecedent joined with Voc+ of the succedent."""
    pos: set[str] = set()
    neg: set[str] = set()
    for f in s.ant:
        v = signed_vocabulary(f)
        pos |= v.negative
        neg |= v.positive
    for f in s.suc:
        v = signed_vocabulary(f)
        pos |= v.positive
        neg |= v.negative
    return SignedVocabulary(frozenset(pos), frozenset(neg))


def sequent_vocabulary(s: Sequent) -> frozenset[str]:
    return sequent_signed_vocabulary(s).all


# ---------------------------------------------------------------------------
# Split sequents

L = "L"
R = "R"


@dataclass(frozen=True)
class SplitSequent:
    left_ant: tuple[Formula, ...]
    right_ant: tuple[Formula, ...]
    left_suc: tuple[Formula, ...]
    right_suc: tuple[Formula, ...]

    def merge(self) -> Sequent:
        return Sequent(self.left_ant + self.right_ant, self.left_suc + self.right_suc)

    def __repr__(self) -> str:
        la = ", ".join(render_formula(f) for f in self.left_ant)
        ra = ", ".join(render_formula(f) for f in self.right_ant)
        ls = ", ".join(render_formula(f) for f in self.left_suc)
        rs = ", ".join(render_formula(f) for f in self.right_suc)
        return f"SplitSequent({la} ; {ra} => {ls} ; {rs})"


def split(s: Sequent, ant_tags: Sequence[str], suc_tags: Sequence[str]) -> SplitSequent:
    """Partition each side by per-occurrence L/R tags; merge(split(s)) == s
    up to reordering within a side."""
    if len(ant_tags) != len(s.ant) or len(suc_tags) != len(s.suc):
        raise ValueError(
            f"tag lists must cover every occurrence: "
            f"got {len(ant_tags)}/{len(s.ant)} ant, {len(suc_tags)}/{len(s.suc)} suc")
    for t in list(ant_tags) + list(suc_tags):
        if t not in (L, R):
            raise ValueError(f"bad side tag {t!r}")
    la = tuple(f for f, t in zip(s.ant, ant_tags) if t == L)
    ra = tuple(f for f, t in zip(s.ant, ant_tags) if t == R)
    ls = tuple(f for f, t in zip(s.suc, suc_tags) if t == L)
    rs = tuple(f for f, t in zip(s.suc, suc_tags) if t == R)
    return SplitSequent(la, ra, ls, rs)


# ---------------------------------------------------------------------------
# Labelled sequents

RelAtom = tuple[int, int]
LabFormula = tuple[int, Formula]


def _lkey(fs: Iterable[LabFormula]) -> tuple[tuple[int, str], ...]:
    return tuple(sorted((i, _fkey(f)) for i, f in fs))


@dataclass(frozen=True, eq=False)
class LabelledSequent:
    rel: tuple[RelAtom, ...]
    ant: tuple[LabFormula, ...]
    suc: tuple[LabFormula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_key",
            (tuple(sorted(self.rel)), _lkey(self.ant), _lkey(self.suc)))

    @property
    def key(self):
        return self._key  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelledSequent) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def labels(self) -> frozenset[int]:
        out = set()
        for i, j in self.rel:
            out.add(i)
            out.add(j)
        for i, _ in self.ant:
            out.add(i)
        for i, _ in self.suc:
            out.add(i)
        return frozenset(out)

    def at(self, flat_index: int) -> tuple[str, int, object]:
        """Flat indices: relational atoms, then antecedent, then succedent."""
        if 0 <= flat_index < len(self.rel):
            return ("rel", flat_index, self.rel[flat_index])
        k = flat_index - len(self.rel)
        if 0 <= k < len(self.ant):
            return ("ant", k, self.ant[k])
        k -= len(self.ant)
        if 0 <= k < len(self.suc):
            return ("suc", k, self.suc[k])
        raise IndexError(f"occurrence {flat_index} out of range")

    def __repr__(self) -> str:
        return f"LabelledSequent({render_labelled(self)!r})"


def lseq(rel: Iterable[RelAtom] = (), ant: Iterable[LabFormula] = (),
         suc: Iterable[LabFormula] = ()) -> LabelledSequent:
    return LabelledSequent(tuple(rel), tuple(ant), tuple(suc))


def render_labelled(s: LabelledSequent) -> str:
    parts = [f"{i}R{j}" for i, j in s.rel]
    parts += [f"{i}:{render_formula(f)}" for i, f in s.ant]
    left = ", ".join(parts)
    right = ", ".join(f"{i}:{render_formula(f)}" for i, f in s.suc)
    return f"{left} => {right}".strip()


# ---------------------------------------------------------------------------
# Proof trees

@dataclass(frozen=True)
class ProofTree:
    conclusion: Sequent
    rule: str
    principal: tuple[int, ...]
    premises: tuple["ProofTree", ...] = ()

    def nodes(self) -> list["ProofTree"]:
        out = [self]
        for p in self.premises:
            out.extend(p.nodes())
        return out


@dataclass(frozen=True)
class SplitProofTree:
    conclusion: SplitSequent
    # per-occurrence side tags aligned with the merged sequent is implicit in
    # the SplitSequent itself; ant_tags/suc_tags keep the original occurrence
    # order of the underlying plain sequent so erasure is exact.
    ant_tags: tuple[str, ...]
    suc_tags: tuple[str, ...]
    plain: Sequent
    rule: str
    principal: tuple[int, ...]
    premises: tuple["SplitProofTree", ...] = ()

    def nodes(self) -> list["SplitProofTree"]:
        out = [self]
        for p in self.premises:
            out.extend(p.nodes())
        return out

    def erase(self) -> ProofTree:
        return ProofTree(self.plain, self.rule, self.principal,
                         tuple(p.erase() for p in self.premises))


@dataclass(frozen=True)
class LabelledProofTree:
    conclusion: LabelledSequent
    rule: str
    principal: tuple[int, ...]
    premises: tuple["LabelledProofTree", ...] = ()
    fresh: tuple[int, int] | None = None   # (i, j) for fresh-label steps

    def nodes(self) -> list["LabelledProofTree"]:
        out = [self]
        for p in self.premises:
            out.extend(p.nodes())
        return out


@dataclass(frozen=True)
class LabelledSplitProof:
    conclusion: LabelledSequent
    ant_tags: tuple[str, ...]
    suc_tags: tuple[str, ...]
    rule: str
    principal: tuple[int, ...]
    premises: tuple["LabelledSplitProof", ...] = ()
    fresh: tuple[int, int] | None = None

    def nodes(self) -> list["LabelledSplitProof"]:
        out = [self]
        for p in self.premises:
            out.extend(p.nodes())
        return out

    def erase(self) -> LabelledProofTree:
        return LabelledProofTree(self.conclusion, self.rule, self.principal,
                                 tuple(p.erase() for p in self.premises),
                                 self.fresh)


# ---------------------------------------------------------------------------
# Fixture JSON

def sequent_to_json(s: Sequent) -> dict:
    return {"ant": [render_formula(f) for f in s.ant],
            "suc": [render_formula(f) for f in s.suc]}


def sequent_from_json(d: dict) -> Sequent:
    return seq([parse_formula(t) for t in d["ant"]],
               [parse_formula(t) for t in d["suc"]])


def labelled_to_json(s: LabelledSequent) -> dict:
    return {"rel": [[i, j] for i, j in s.rel],
            "ant": [[i, render_formula(f)] for i, f in s.ant],
            "suc": [[i, render_formula(f)] for i, f in s.suc]}


def labelled_from_json(d: dict) -> LabelledSequent:
    return lseq([(int(i), int(j)) for i, j in d.get("rel", [])],
                [(int(i), parse_formula(t)) for i, t in d["ant"]],
                [(int(i), parse_formula(t)) for i, t in d["suc"]])


def _is_labelled_node(d: dict) -> bool:
    if "rel" in d.get("conclusion", {}):
        return True
    ant = d.get("conclusion", {}).get("ant", [])
    return bool(ant) and isinstance(ant[0], list)


def proof_to_json(t: ProofTree | SplitProofTree | LabelledProofTree | LabelledSplitProof,
                  calculus: str | None = None) -> dict:
    node: dict = {}
    if calculus is not None:
        node["calculus"] = calculus
    if isinstance(t, (ProofTree,)):
        node["conclusion"] = sequent_to_json(t.conclusion)
    elif isinstance(t, SplitProofTree):
        node["conclusion"] = sequent_to_json(t.plain)
        node["split"] = {"ant": list(t.ant_tags), "suc": list(t.suc_tags)}
    elif isinstance(t, (LabelledProofTree, LabelledSplitProof)):
        node["conclusion"] = labelled_to_json(t.conclusion)
        if isinstance(t, LabelledSplitProof):
            node["split"] = {"ant": list(t.ant_tags), "suc": list(t.suc_tags)}
    node["rule"] = t.rule
    node["principal"] = list(t.principal)
    node["premises"] = [proof_to_json(p) for p in t.premises]
    return node


class FixtureError(ValueError):
    pass


def _fresh_from_diff(concl: LabelledSequent, prem: LabelledSequent) -> tuple[int, int] | None:
    new = prem.labels() - concl.labels()
    if not new:
        return None
    if len(new) > 1:
        raise FixtureError(f"more than one fresh label introduced: {sorted(new)}")
    j = next(iter(new))
    for (a, b) in prem.rel:
        if b == j and a != j:
            return (a, j)
        if a == j and b != j:
            return (b, j)
    raise FixtureError(f"fresh label {j} has no relational atom")


def proof_from_json(d: dict):
    """Load a proof node (plain, split, labelled, or labelled split)."""
    try:
        labelled = _is_labelled_node(d)
        rule = d["rule"]
        principal = tuple(int(i) for i in d.get("principal", []))
        prem_dicts = d.get("premises", [])
        if labelled:
            concl = labelled_from_json(d["conclusion"])
            premises = tuple(proof_from_json(p) for p in prem_dicts)
            fresh = None
            if premises and isinstance(premises[0], (LabelledProofTree, LabelledSplitProof)):
                fresh = _fresh_from_diff(concl, premises[0].conclusion)
            if "split" in d:
                tags = d["split"]
                return LabelledSplitProof(concl, tuple(tags["ant"]), tuple(tags["suc"]),
                                          rule, principal, premises, fresh)
            return LabelledProofTree(concl, rule, principal, premises, fresh)
        concl = sequent_from_json(d["conclusion"])
        premises = tuple(proof_from_json(p) for p in prem_dicts)
        if "split" in d:
            tags = d["split"]
            ss = split(concl, tags["ant"], tags["suc"])
            return SplitProofTree(ss, tuple(tags["ant"]), tuple(tags["suc"]),
                                  concl, rule, principal, premises)
        return ProofTree(concl, rule, principal, premises)
    except (KeyError, TypeError, IndexError) as e:
        raise FixtureError(f"malformed proof fixture node: {e}") from e


def load_fixture(path: str) -> tuple[str, object]:
    """Read a proof fixture file; returns (calculus, proof tree)."""
    with open(path, "r", encoding="utf-8") as fh:
        d = json.load(fh)
    if "calculus" not in d:
        raise FixtureError("fixture missing calculus field")
    return d["calculus"], proof_from_json(d)
