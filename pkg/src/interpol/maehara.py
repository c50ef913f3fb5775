"""Craig and Lyndon interpolation by split-sequent proof decoration.

Every occurrence of a proved sequent is tagged L or R.  Tags ride the rule
sources upward from the root split (active formulas join their principal's
side), and the interpolant is read off the decorated tree bottom-up: axioms
produce literals or constants depending on which sides the principal
occurrences landed, branching rules join the premise interpolants with a
connective keyed to the principal's side, and modal rules wrap the premise
interpolant in a box or diamond.
"""

from dataclasses import dataclass
from typing import Optional

from .syntax import (Atom, Box, Formula, Implies, bot, diamond, neg,
                     render_formula, top, vocabulary)
from .sequents import (L, R, ProofTree, SplitProofTree, SplitSequent,
                       proof_to_json, seq, split)
from .calculi import (CalculusId, TABLES, calculus_for_logic, calculus_name,
                      is_labelled_calculus, match_rule, validate_proof)
from .search import (DEFAULT_BUDGET, PROVED, SearchBudget, SearchOutcome,
                     prove)


class InterpolationError(Exception):
    pass


@dataclass(frozen=True)
class InterpolationResult:
    """Outcome of an interpolation query.

    status is "interpolated", "not_provable", or "budget_exceeded"; the
    formula fields are populated only in the first case.  verification is
    the oracle's per-check report, None when verification was skipped.
    """
    status: str
    mode: str
    logic: Optional[str] = None
    calculus: Optional[str] = None
    interpolant: Optional[Formula] = None
    split_proof: Optional[SplitProofTree] = None
    multiformula: object = None          # labelled route only
    verification: Optional[dict] = None
    search: Optional[SearchOutcome] = None

    @property
    def verified(self) -> bool:
        return bool(self.verification) and self.verification.get("ok", False)

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "logic": self.logic,
            "calculus": self.calculus,
            "mode": self.mode,
            "interpolant": (None if self.interpolant is None
                            else render_formula(self.interpolant)),
            "verified": self.verified,
            "checks": (self.verification or {}).get("checks", []),
        }
        if self.split_proof is not None:
            out["proof"] = proof_to_json(self.split_proof, self.calculus)
        if self.multiformula is not None:
            from .multiform import multiformula_to_json
            out["multiformula"] = multiformula_to_json(self.multiformula)
        if self.search is not None and self.search.certificate is not None:
            out["countermodel"] = self.search.certificate
        return out


def fold_or(a: Formula, b: Formula) -> Formula:
    """Disjunction with unit and annihilator folding; used only when two
    premise interpolants are combined, never on modal wraps."""
    if a == bot:
        return b
    if b == bot:
        return a
    if a == top or b == top:
        return top
    from .syntax import Or
    return Or(a, b)


def fold_and(a: Formula, b: Formula) -> Formula:
    if a == top:
        return b
    if b == top:
        return a
    if a == bot or b == bot:
        return bot
    from .syntax import And
    return And(a, b)


_CALCULUS_LOGIC = {
    "LK": "CPC", "LJ": "IPC", "G3K": "K", "G3T": "T", "G3D": "D",
    "G3K4": "K4", "G3S4": "S4", "G3GL": "GL", "GS5": "S5",
}


def _infer_calculus(t: ProofTree) -> str:
    used = {n.rule for n in t.nodes()}
    for name in ("LK", "LJ", "G3K", "G3T", "G3D", "G3K4", "G3S4", "G3GL", "GS5"):
        if used <= TABLES[name]:
            return name
    raise InterpolationError(f"no unlabelled calculus covers rules {sorted(used)}")


def _left_vocabulary(s: SplitSequent) -> frozenset:
    voc: set = set()
    for f in s.left_ant + s.left_suc:
        voc |= vocabulary(f)
    return frozenset(voc)


def split_proof(t: ProofTree, root_split: SplitSequent,
                calculus: Optional[str] = None) -> SplitProofTree:
    """Propagate the root split upward through a proof.

    Context occurrences keep their side, active occurrences take the side of
    their principal, unboxed occurrences keep the side of the box they came
    from, and cut occurrences take the side whose vocabulary covers the cut
    formula.  LJ's left-side implication rule swaps the antecedent parts in
    its first premise and stores the active succedent formula on the right.
    """
    if calculus is None:
        calculus = _infer_calculus(t)
    report = validate_proof(t, calculus)
    if not report:
        raise InterpolationError(f"invalid proof: {report.error}")
    if root_split.merge() != t.conclusion:
        raise InterpolationError("root split does not merge to the proved sequent")

    def walk(node: ProofTree, ant_tags: tuple, suc_tags: tuple) -> SplitProofTree:
        concl = node.conclusion
        info = match_rule(calculus, node.rule, concl,
                          tuple(p.conclusion for p in node.premises),
                          tuple(node.principal))
        if not info.ok:
            raise InterpolationError(
                f"split propagation lost the rule match: {info.reason}")
        nA = len(concl.ant)

        def tag_at(flat: int) -> str:
            return ant_tags[flat] if flat < nA else suc_tags[flat - nA]

        prin_tag = tag_at(node.principal[0]) if node.principal else None
        cut_tag = None
        if info.cut_formula is not None:
            here = split(concl, ant_tags, suc_tags)
            left_voc = _left_vocabulary(here)
            cut_tag = L if vocabulary(info.cut_formula) <= left_voc else R

        kids = []
        for pi, (prem_tree, (ant_src, suc_src)) in enumerate(
                zip(node.premises, info.sources)):
            swap = (calculus == "LJ" and node.rule == "impL"
                    and prin_tag == L and pi == 0)

            def resolve(src) -> str:
                if src == ("act",):
                    if swap:
                        return R
                    return prin_tag
                if src == ("cut",):
                    return cut_tag
                kind = src[0]
                if kind == "ctx":
                    _, side, pos = src
                    base = ant_tags[pos] if side == "ant" else suc_tags[pos]
                    if swap and side == "ant":
                        return R if base == L else L
                    return base
                if kind == "unbox":
                    return ant_tags[src[1]]
                raise InterpolationError(f"unknown occurrence source {src!r}")

            p_ant = tuple(resolve(s_) for s_ in ant_src)
            p_suc = tuple(resolve(s_) for s_ in suc_src)
            kids.append(walk(prem_tree, p_ant, p_suc))

        return SplitProofTree(split(concl, ant_tags, suc_tags),
                              ant_tags, suc_tags, concl,
                              node.rule, tuple(node.principal), tuple(kids))

    def assign(items: tuple, lefts: tuple) -> tuple:
        # merge equality is multiset equality, so tags are matched by
        # formula, preferring the left part while copies remain
        remaining = list(lefts)
        tags = []
        for f in items:
            if f in remaining:
                remaining.remove(f)
                tags.append(L)
            else:
                tags.append(R)
        return tuple(tags)

    return walk(t,
                assign(t.conclusion.ant, root_split.left_ant),
                assign(t.conclusion.suc, root_split.left_suc))


_PRESERVE = frozenset({"andL", "orR", "impR", "wkL", "wkR", "ctrL", "ctrR", "T"})
_BRANCHING = frozenset({"orL", "andR", "impL"})
_BOX_DIAMOND = frozenset({"K", "4", "S4", "GL", "5r"})


def _extract(sp: SplitProofTree, mode: str, calculus: str) -> Formula:
    rule = sp.rule
    nA = len(sp.plain.ant)

    def tag_at(flat: int) -> str:
        return sp.ant_tags[flat] if flat < nA else sp.suc_tags[flat - nA]

    if rule == "id":
        a, s = sp.principal
        phi = sp.plain.ant[a]
        if mode == "lyndon" and not isinstance(phi, Atom):
            raise InterpolationError(
                "lyndon mode needs atomic identity leaves; expand "
                f"{render_formula(phi)!r} first")
        ta, ts = tag_at(a), tag_at(s)
        if ta == L and ts == R:
            return phi
        if ta == R and ts == R:
            return top
        if ta == L and ts == L:
            return bot
        return neg(phi)

    if rule in ("botL", "topR"):
        return bot if tag_at(sp.principal[0]) == L else top

    subs = [_extract(p, mode, calculus) for p in sp.premises]

    if rule in _PRESERVE:
        return subs[0]

    if rule == "D":
        return Box(subs[0])

    if rule in _BOX_DIAMOND:
        side = tag_at(sp.principal[0])
        return Box(subs[0]) if side == R else diamond(subs[0])

    if rule in _BRANCHING:
        side = tag_at(sp.principal[0])
        if calculus == "LJ" and rule == "impL" and side == L:
            return Implies(subs[0], subs[1])
        if side == L:
            return fold_or(subs[0], subs[1])
        return fold_and(subs[0], subs[1])

    if rule in ("cut", "cutA"):
        info = match_rule(calculus, rule, sp.plain,
                          tuple(p.plain for p in sp.premises),
                          tuple(sp.principal))
        side = (L if vocabulary(info.cut_formula) <= _left_vocabulary(sp.conclusion)
                else R)
        if side == L:
            return fold_or(subs[0], subs[1])
        return fold_and(subs[0], subs[1])

    raise InterpolationError(f"no interpolant transformation for rule {rule!r}")


def extract_interpolant(sp: SplitProofTree, mode: str = "craig",
                        calculus: Optional[str] = None) -> Formula:
    """Read the interpolant off a decorated proof bottom-up."""
    if mode not in ("craig", "lyndon"):
        raise InterpolationError(f"unknown mode {mode!r}")
    if calculus is None:
        calculus = _infer_calculus(sp.erase())
    if mode == "lyndon" and calculus in ("G3GL", "GS5"):
        raise InterpolationError(
            f"{calculus} supports craig extraction only")
    return _extract(sp, mode, calculus)


def interpolate(logic: str, phi: Formula, psi: Formula, mode: str = "craig",
                budget: SearchBudget = DEFAULT_BUDGET,
                calculus: Optional[CalculusId] = None,
                verify: bool = True) -> InterpolationResult:
    """Prove phi => psi, split it as (phi; => ;psi), extract, verify."""
    if calculus is None:
        calculus = calculus_for_logic(logic)
    if is_labelled_calculus(calculus):
        from .multiform import interpolate_labelled
        return interpolate_labelled(calculus.frame, phi, psi, mode,
                                    budget=budget, logic=logic, verify=verify)
    cname = calculus_name(calculus)
    if mode == "lyndon" and cname in ("G3GL", "GS5"):
        raise InterpolationError(f"{cname} supports craig extraction only")
    logic = logic or _CALCULUS_LOGIC.get(cname)

    outcome = prove(cname, seq([phi], [psi]), budget)
    if outcome.status != PROVED:
        return InterpolationResult(outcome.status, mode, logic, cname,
                                   search=outcome)

    root = SplitSequent((phi,), (), (), (psi,))
    sp = split_proof(outcome.proof, root, cname)
    theta = extract_interpolant(sp, mode, cname)

    verification = None
    if verify:
        from . import kripke
        verification = kripke.verify_craig(logic, phi, theta, psi, mode)
        has_5r = any(n.rule == "5r" for n in sp.nodes())
        if has_5r and not verification.get("ok", False):
            raise InterpolationError(
                "extraction over a 5r step failed oracle verification: "
                + "; ".join(c.get("note", c.get("name", "?"))
                            for c in verification.get("checks", [])
                            if not c.get("ok", True)))
    return InterpolationResult("interpolated", mode, logic, cname, theta, sp,
                               verification=verification, search=outcome)
