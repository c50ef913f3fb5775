"""Rule-schema DSL and the semi-analytic classifier.

Rules are written as schemas over multiset context variables and formula
metavariables.  The classifier decides, purely at schema level, whether each
rule fits the semi-analytic shape and each axiom one of the focused forms,
then aggregates calculus-level verdicts.  It reports what the shape implies;
it never claims an interpolation property fails for the underlying logic.
"""

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Union


class RuleSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# Meta-terms

@dataclass(frozen=True)
class Ctx:
    name: str


@dataclass(frozen=True)
class BoxCtx:
    name: str


@dataclass(frozen=True)
class MVar:
    name: str


@dataclass(frozen=True)
class MAtom:
    name: str


@dataclass(frozen=True)
class MConst:
    name: str  # "top" | "bot"


@dataclass(frozen=True)
class MBox:
    child: "MTerm"


@dataclass(frozen=True)
class MNeg:
    child: "MTerm"


@dataclass(frozen=True)
class MBin:
    op: str  # "&" | "|" | "->"
    left: "MTerm"
    right: "MTerm"


MTerm = Union[MVar, MAtom, MConst, MBox, MNeg, MBin]
Item = Union[Ctx, BoxCtx, MVar, MAtom, MConst, MBox, MNeg, MBin]

_CTX_RE = re.compile(r"[GDPS][0-9]*\Z")


def _is_context_name(name: str) -> bool:
    return bool(_CTX_RE.match(name))


def render_item(t: Item) -> str:
    if isinstance(t, (Ctx, MVar, MAtom, MConst)):
        return t.name
    if isinstance(t, BoxCtx):
        return f"[]{t.name}"
    if isinstance(t, MBox):
        c = render_item(t.child)
        return f"[]{c}" if isinstance(t.child, (MVar, MAtom, MConst, MBox, MNeg)) \
            else f"[]({c})"
    if isinstance(t, MNeg):
        c = render_item(t.child)
        return f"~{c}" if isinstance(t.child, (MVar, MAtom, MConst, MBox, MNeg)) \
            else f"~({c})"
    return f"({render_item(t.left)} {t.op} {render_item(t.right)})"


def term_voc(t: Item) -> frozenset:
    """Metavariables and concrete atoms occurring in a formula term."""
    if isinstance(t, (MVar, MAtom)):
        return frozenset({t.name})
    if isinstance(t, (MConst, Ctx, BoxCtx)):
        return frozenset()
    if isinstance(t, (MBox, MNeg)):
        return term_voc(t.child)
    return term_voc(t.left) | term_voc(t.right)


@dataclass(frozen=True)
class MetaSequent:
    ant: tuple
    suc: tuple


@dataclass(frozen=True)
class RuleSchema:
    name: str
    premises: tuple
    conclusion: MetaSequent
    principal: Optional[MTerm] = None
    mode: str = "multi"
    voc_constraints: tuple = ()   # pairs (var, target-vars frozenset)
    restricted: frozenset = frozenset()


# ---------------------------------------------------------------------------
# DSL parsing

_TOKEN_RE = re.compile(
    r"\s*(=>|->|\[\]|<>|[&|,~()]|[A-Za-z][A-Za-z0-9_]*)")


def _tokenize_items(text: str, line: int) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise RuleSyntaxError(f"bad token at {text[pos:]!r}", line)
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _ItemParser:
    def __init__(self, tokens: list, line: int):
        self.toks = tokens
        self.pos = 0
        self.line = line

    def peek(self) -> Optional[str]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self) -> str:
        t = self.peek()
        if t is None:
            raise RuleSyntaxError("unexpected end of items", self.line)
        self.pos += 1
        return t

    def expect(self, t: str) -> None:
        got = self.take()
        if got != t:
            raise RuleSyntaxError(f"expected {t!r}, got {got!r}", self.line)

    def items(self) -> tuple:
        if self.peek() is None:
            return ()
        out = [self.item()]
        while self.peek() == ",":
            self.take()
            out.append(self.item())
        if self.peek() is not None:
            raise RuleSyntaxError(f"trailing input at {self.peek()!r}", self.line)
        return tuple(out)

    def item(self) -> Item:
        # a bare context name or []name stays a context; anything else is a
        # formula term
        t = self.peek()
        if t == "[]" and self.pos + 1 < len(self.toks):
            nxt = self.toks[self.pos + 1]
            after = self.toks[self.pos + 2] if self.pos + 2 < len(self.toks) else None
            if nxt[0].isupper() and _is_context_name(nxt) and \
                    after in (None, ","):
                self.take()
                self.take()
                return BoxCtx(nxt)
        if t is not None and t[0].isalpha() and t[0].isupper() and \
                _is_context_name(t):
            after = self.toks[self.pos + 1] if self.pos + 1 < len(self.toks) else None
            if after in (None, ","):
                self.take()
                return Ctx(t)
        return self.formula()

    def formula(self) -> MTerm:
        return self.imp()

    def imp(self) -> MTerm:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return MBin("->", left, self.imp())
        return left

    def disj(self) -> MTerm:
        out = self.conj()
        while self.peek() == "|":
            self.take()
            out = MBin("|", out, self.conj())
        return out

    def conj(self) -> MTerm:
        out = self.unary()
        while self.peek() == "&":
            self.take()
            out = MBin("&", out, self.unary())
        return out

    def unary(self) -> MTerm:
        t = self.take()
        if t == "~":
            return MNeg(self.unary())
        if t == "[]":
            return MBox(self.unary())
        if t == "<>":
            return MNeg(MBox(MNeg(self.unary())))
        if t == "(":
            out = self.formula()
            self.expect(")")
            return out
        if t in ("top", "bot"):
            return MConst(t)
        if t[0].isalpha():
            if t[0].isupper():
                if _is_context_name(t):
                    raise RuleSyntaxError(
                        f"multiset variable {t} used as a formula", self.line)
                return MVar(t)
            return MAtom(t)
        raise RuleSyntaxError(f"unexpected token {t!r}", self.line)


def _parse_items(text: str, line: int) -> tuple:
    return _ItemParser(_tokenize_items(text, line), line).items()


def _parse_meta_sequent(text: str, line: int) -> MetaSequent:
    halves = text.split("=>")
    if len(halves) != 2:
        raise RuleSyntaxError("a sequent needs exactly one =>", line)
    return MetaSequent(_parse_items(halves[0].strip(), line),
                       _parse_items(halves[1].strip(), line))


_VOC_RE = re.compile(
    r"voc\(\s*([A-Za-z][A-Za-z0-9_]*)\s*\)\s*<=\s*voc\(\s*([^)]*)\)\Z")


def parse_rules(text: str) -> list:
    """Parse DSL blocks into rule schemas.  Blocks are separated by blank
    lines; lines are `rule:`, `premise:`, `conclusion:`, `principal:`,
    `mode:`, and `constraint:`."""
    rules = []
    block: dict = {}
    block_line = 0

    def flush() -> None:
        if not block:
            return
        if "name" not in block:
            raise RuleSyntaxError("block without a rule: line", block_line)
        if "conclusion" not in block:
            raise RuleSyntaxError(
                f"rule {block['name']} has no conclusion", block_line)
        rules.append(RuleSchema(
            block["name"], tuple(block.get("premises", ())),
            block["conclusion"], block.get("principal"),
            block.get("mode", "multi"),
            tuple(block.get("voc", ())),
            frozenset(block.get("restricted", ()))))
        block.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            flush()
            continue
        if ":" not in line:
            raise RuleSyntaxError(f"expected key: value, got {line!r}", lineno)
        key, value = (part.strip() for part in line.split(":", 1))
        if key == "rule":
            flush()
            block["name"] = value
            block_line = lineno
        elif key == "premise":
            block.setdefault("premises", []).append(
                _parse_meta_sequent(value, lineno))
        elif key == "conclusion":
            block["conclusion"] = _parse_meta_sequent(value, lineno)
        elif key == "principal":
            items = _parse_items(value, lineno)
            if len(items) != 1 or isinstance(items[0], (Ctx, BoxCtx)):
                raise RuleSyntaxError("principal must be one formula term",
                                      lineno)
            block["principal"] = items[0]
        elif key == "mode":
            if value not in ("single", "multi"):
                raise RuleSyntaxError(f"unknown mode {value!r}", lineno)
            block["mode"] = value
        elif key == "constraint":
            m = _VOC_RE.match(value)
            if m:
                targets = frozenset(
                    v.strip() for v in m.group(2).split(",") if v.strip())
                block.setdefault("voc", []).append((m.group(1), targets))
            elif value.startswith("restricted"):
                name = value[len("restricted"):].strip()
                if not _is_context_name(name):
                    raise RuleSyntaxError(
                        f"restricted needs a multiset variable, got {name!r}",
                        lineno)
                block.setdefault("restricted", set()).add(name)
            else:
                raise RuleSyntaxError(f"unknown constraint {value!r}", lineno)
        else:
            raise RuleSyntaxError(f"unknown key {key!r}", lineno)
    flush()
    return rules


# ---------------------------------------------------------------------------
# Classification

@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: str = ""

    @property
    def passes(self) -> bool:
        return self.kind in ("left_sc", "right_sc", "multi_conclusion",
                             "focused_axiom")


def _contexts(items: tuple) -> list:
    return [t for t in items if isinstance(t, (Ctx, BoxCtx))]


def _formulas(items: tuple) -> list:
    return [t for t in items if not isinstance(t, (Ctx, BoxCtx))]


def _classify_axiom(r: RuleSchema) -> Verdict:
    ca, cs = r.conclusion.ant, r.conclusion.suc
    ctx_a, ctx_s = _contexts(ca), _contexts(cs)
    f_a, f_s = _formulas(ca), _formulas(cs)

    def voc_equal(fs: list) -> bool:
        vocs = [term_voc(f) for f in fs]
        return all(v == vocs[0] for v in vocs)

    if not ctx_a and not ctx_s:
        if len(f_a) == 1 and len(f_s) == 1 and f_a[0] == f_s[0]:
            return Verdict("focused_axiom")
        if not f_a and f_s and voc_equal(f_s):
            return Verdict("focused_axiom")
        if not f_s and f_a and voc_equal(f_a):
            return Verdict("focused_axiom")
    if len(ctx_a) <= 1 and len(ctx_s) <= 1 and (ctx_a or ctx_s):
        if f_a and not f_s and voc_equal(f_a):
            return Verdict("focused_axiom")
        if f_s and not f_a and voc_equal(f_s):
            return Verdict("focused_axiom")
    return Verdict("not_semi_analytic", "axiom_not_focused")


def classify_rule(r: RuleSchema) -> Verdict:
    """The rule's fit against the semi-analytic shape: context families
    intact premise to conclusion, one conclusion copy each, and all active
    vocabulary bounded by the principal formula."""
    if r.restricted:
        return Verdict("not_semi_analytic", "context_not_free")
    if not r.premises:
        return _classify_axiom(r)

    c = r.conclusion
    conc_f_ant = _formulas(c.ant)
    conc_f_suc = _formulas(c.suc)

    if r.principal is None:
        conc_vars = {v for t in conc_f_ant + conc_f_suc for v in term_voc(t)}
        prem_vars = set()
        for p in r.premises:
            for t in _formulas(p.ant) + _formulas(p.suc):
                prem_vars |= term_voc(t)
        floating = {v for v in prem_vars - conc_vars if not v.islower()}
        declared = {v for v, _ in r.voc_constraints}
        if floating and floating <= declared:
            return Verdict("restricted_cut")
        return Verdict("not_semi_analytic", "variable_condition")

    on_left = r.principal in conc_f_ant
    on_right = r.principal in conc_f_suc
    if not (on_left or on_right):
        return Verdict("not_semi_analytic", "shape")
    extras = [t for t in conc_f_ant + conc_f_suc if t != r.principal]
    if extras or (conc_f_ant + conc_f_suc).count(r.principal) != 1:
        return Verdict("not_semi_analytic", "shape")
    conc_ctx_ant = _contexts(c.ant)
    conc_ctx_suc = _contexts(c.suc)
    if len(set(conc_ctx_ant)) != len(conc_ctx_ant) or \
            len(set(conc_ctx_suc)) != len(conc_ctx_suc):
        return Verdict("not_semi_analytic", "shape")

    # context discipline: every premise context must recur verbatim on the
    # same side of the conclusion
    for p in r.premises:
        hit = set()
        missing = []
        for side, conc_side in ((p.ant, conc_ctx_ant), (p.suc, conc_ctx_suc)):
            for t in _contexts(side):
                if t in conc_side:
                    hit.add(t)
                else:
                    missing.append((t, conc_side))
        for t, conc_side in missing:
            base = t.name
            unmatched_same_base = any(
                u.name == base and u not in hit
                for u in conc_ctx_ant + conc_ctx_suc)
            if unmatched_same_base:
                return Verdict("not_semi_analytic", "context_not_intact")
            return Verdict("not_semi_analytic", "context_disappears")

    # schema-level variable condition
    allowed = set(term_voc(r.principal))
    principal_voc = frozenset(allowed)
    for v, targets in r.voc_constraints:
        if targets <= principal_voc:
            allowed.add(v)
    for p in r.premises:
        for t in _formulas(p.ant) + _formulas(p.suc):
            if not term_voc(t) <= allowed:
                return Verdict("not_semi_analytic", "variable_condition")

    if r.mode == "single":
        if len(c.suc) > 1 or any(len(p.suc) > 1 for p in r.premises):
            return Verdict("not_semi_analytic", "shape")
        return Verdict("left_sc" if on_left else "right_sc")
    return Verdict("multi_conclusion")


# ---------------------------------------------------------------------------
# Known modal rule shapes

def _rename_map(r: RuleSchema) -> Optional[dict]:
    """Canonical renaming: contexts to g0, g1, ... and metavars to a0, a1,
    ... in order of first occurrence across conclusion then premises."""
    mapping: dict = {}

    def walk(t: Item) -> None:
        if isinstance(t, (Ctx, BoxCtx)):
            mapping.setdefault(("ctx", t.name), f"g{sum(1 for k in mapping if k[0] == 'ctx')}")
        elif isinstance(t, MVar):
            mapping.setdefault(("var", t.name), f"a{sum(1 for k in mapping if k[0] == 'var')}")
        elif isinstance(t, (MBox, MNeg)):
            walk(t.child)
        elif isinstance(t, MBin):
            walk(t.left)
            walk(t.right)

    for s in (r.conclusion,) + r.premises:
        for t in s.ant + s.suc:
            walk(t)
    return mapping


def _canon(r: RuleSchema) -> tuple:
    mapping = _rename_map(r)

    def go(t: Item):
        if isinstance(t, Ctx):
            return ("ctx", mapping[("ctx", t.name)])
        if isinstance(t, BoxCtx):
            return ("boxctx", mapping[("ctx", t.name)])
        if isinstance(t, MVar):
            return ("var", mapping[("var", t.name)])
        if isinstance(t, MAtom):
            return ("atom", t.name)
        if isinstance(t, MConst):
            return ("const", t.name)
        if isinstance(t, MBox):
            return ("box", go(t.child))
        if isinstance(t, MNeg):
            return ("neg", go(t.child))
        return ("bin", t.op, go(t.left), go(t.right))

    def side(items: tuple) -> tuple:
        return tuple(sorted(go(t) for t in items))

    return (tuple(sorted((side(p.ant), side(p.suc)) for p in r.premises)),
            (side(r.conclusion.ant), side(r.conclusion.suc)))


_KNOWN_MODAL_TEXT = """
rule: K
premise: G => A
conclusion: []G => []A
principal: []A

rule: T
premise: []A, A, G => D
conclusion: []A, G => D
principal: []A

rule: D
premise: G, A =>
conclusion: []G, []A =>
principal: []A

rule: 4
premise: []G, G => A
conclusion: []G => []A
principal: []A
"""

_KNOWN_MODAL: dict = {}


def _known_modal() -> dict:
    if not _KNOWN_MODAL:
        for schema in parse_rules(_KNOWN_MODAL_TEXT):
            _KNOWN_MODAL[_canon(schema)] = schema.name
    return _KNOWN_MODAL


def match_known_modal(r: RuleSchema) -> Optional[str]:
    return _known_modal().get(_canon(r))


_ALLOWED_MODAL_SETS = (frozenset(), frozenset({"K"}), frozenset({"4"}),
                       frozenset({"K", "D"}), frozenset({"K", "T"}))


# ---------------------------------------------------------------------------
# Termination by weight

def _poly_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def _term_weight(t: Item) -> dict:
    """Weight as a linear form over 1, metavar weights w(A) >= 1, context
    cardinalities n(G) >= 0, and context excess weights e(G) >= 0 with
    total context weight n(G) + e(G)."""
    if isinstance(t, (MAtom, MConst)):
        return {"1": 1}
    if isinstance(t, MVar):
        return {("w", t.name): 1}
    if isinstance(t, Ctx):
        return {("n", t.name): 1, ("e", t.name): 1}
    if isinstance(t, BoxCtx):
        return {("n", t.name): 2, ("e", t.name): 1}
    if isinstance(t, MBox):
        return _poly_add({"1": 1}, _term_weight(t.child))
    if isinstance(t, MNeg):
        # sugar for -> bot: one connective plus the constant
        return _poly_add({"1": 2}, _term_weight(t.child))
    return _poly_add({"1": 1},
                     _poly_add(_term_weight(t.left), _term_weight(t.right)))


def _sequent_weight(s: MetaSequent) -> dict:
    out: dict = {}
    for t in s.ant + s.suc:
        out = _poly_add(out, _term_weight(t))
    return out


def _min_value(poly: dict) -> float:
    """Minimum over admissible instantiations; -inf when unbounded below."""
    total = poly.get("1", 0)
    for key, coeff in poly.items():
        if key == "1":
            continue
        kind = key[0]
        if coeff < 0:
            return float("-inf")
        if kind == "w":
            total += coeff  # w >= 1
    return total


def rule_weight_decreasing(r: RuleSchema) -> bool:
    conc = _sequent_weight(r.conclusion)
    for p in r.premises:
        diff = _poly_add(conc, _sequent_weight(p), sign=-1)
        if _min_value(diff) < 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Calculus assessment

_CAVEAT = (
    "conditional verdicts: a semi-analytic calculus with focused axioms "
    "yields Craig interpolation for the logic it axiomatizes when that logic "
    "extends K (modal language) or lies between IPC and CPC (propositional); "
    "full termination upgrades this to uniform interpolation. A negative "
    "shape verdict speaks only about this presentation, never about the "
    "logic.")


def assess_calculus(rules: list) -> dict:
    """Aggregate per-rule verdicts into calculus-level claims."""
    per_rule = []
    modal = set()
    all_pass = True
    for r in rules:
        v = classify_rule(r)
        known = match_known_modal(r)
        if known is not None:
            modal.add(known)
        per_rule.append({"rule": r.name, "verdict": v.kind,
                         "reason": v.reason,
                         "known_modal": known or ""})
    allowed = frozenset(modal) in _ALLOWED_MODAL_SETS
    for row, r in zip(per_rule, rules):
        ok = row["verdict"] in ("left_sc", "right_sc", "multi_conclusion",
                                "focused_axiom")
        if not ok and row["known_modal"] and allowed:
            # the meta-theorem admits these context-rewriting modal rules
            # as long as the table's modal fragment is one of the covered
            # combinations
            ok = True
            row["exempt"] = "allowed modal rule"
        if not ok:
            all_pass = False
    terminating = all(rule_weight_decreasing(r) for r in rules)
    report = {
        "rules": per_rule,
        "semi_analytic": all_pass,
        "modal_rules": sorted(modal),
        "allowed_modal_set": allowed,
        "fully_terminating_sufficient": terminating,
        "implied": {"cip": all_pass, "uip": all_pass and terminating},
        "caveat": _CAVEAT,
    }
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Stock rule tables in DSL form

_PROPOSITIONAL_CORE = """
rule: id
conclusion: A => A

rule: botL
conclusion: bot, G1 => D1

rule: topR
conclusion: G1 => top, D1

rule: wkL
premise: G1 => D1
conclusion: A, G1 => D1
principal: A

rule: wkR
premise: G1 => D1
conclusion: G1 => A, D1
principal: A

rule: ctrL
premise: A, A, G1 => D1
conclusion: A, G1 => D1
principal: A

rule: ctrR
premise: G1 => A, A, D1
conclusion: G1 => A, D1
principal: A

rule: andL
premise: A, B, G1 => D1
conclusion: A & B, G1 => D1
principal: A & B

rule: andR
premise: G1 => A, D1
premise: G2 => B, D2
conclusion: G1, G2 => A & B, D1, D2
principal: A & B

rule: orL
premise: A, G1 => D1
premise: B, G2 => D2
conclusion: A | B, G1, G2 => D1, D2
principal: A | B

rule: orR
premise: G1 => A, B, D1
conclusion: G1 => A | B, D1
principal: A | B

rule: impL
premise: G1 => A, D1
premise: B, G2 => D2
conclusion: A -> B, G1, G2 => D1, D2
principal: A -> B

rule: impR
premise: A, G1 => B, D1
conclusion: G1 => A -> B, D1
principal: A -> B
"""

_CUT = """
rule: cut
premise: G1 => A, D1
premise: A, G2 => D2
conclusion: G1, G2 => D1, D2
"""

_LJ_TABLE = """
rule: id
conclusion: A => A

rule: botL
conclusion: bot, G1 =>

rule: topR
conclusion: G1 => top

rule: wkL
mode: single
premise: G1 => D1
conclusion: A, G1 => D1
principal: A

rule: ctrL
mode: single
premise: A, A, G1 => D1
conclusion: A, G1 => D1
principal: A

rule: andL
mode: single
premise: A, B, G1 => D1
conclusion: A & B, G1 => D1
principal: A & B

rule: andR
mode: single
premise: G1 => A
premise: G1 => B
conclusion: G1 => A & B
principal: A & B

rule: orL
mode: single
premise: A, G1 => D1
premise: B, G1 => D1
conclusion: A | B, G1 => D1
principal: A | B

rule: orR1
mode: single
premise: G1 => A
conclusion: G1 => A | B
principal: A | B

rule: orR2
mode: single
premise: G1 => B
conclusion: G1 => A | B
principal: A | B

rule: impL
mode: single
premise: G1 => A
premise: B, G1 => D1
conclusion: A -> B, G1 => D1
principal: A -> B

rule: impR
mode: single
premise: A, G1 => B
conclusion: G1 => A -> B
principal: A -> B
"""

_MODAL_BLOCKS = {
    "K": """
rule: K
premise: G1 => A
conclusion: []G1 => []A
principal: []A
""",
    "D": """
rule: D
premise: G1, A =>
conclusion: []G1, []A =>
principal: []A
""",
    "T": """
rule: T
premise: []A, A, G1 => D1
conclusion: []A, G1 => D1
principal: []A
""",
    "4": """
rule: 4
premise: []G1, G1 => A
conclusion: []G1 => []A
principal: []A
""",
    "S4": """
rule: S4
premise: []G1 => A
conclusion: []G1 => []A
principal: []A
""",
    "GL": """
rule: GL
premise: []G1, G1, []A => A
conclusion: []G1 => []A
principal: []A
""",
}

STANDARD_TABLES = {
    "LK": _PROPOSITIONAL_CORE,
    "LK+cut": _PROPOSITIONAL_CORE + _CUT,
    "LJ": _LJ_TABLE,
    "K": _PROPOSITIONAL_CORE + _MODAL_BLOCKS["K"],
    "KD": _PROPOSITIONAL_CORE + _MODAL_BLOCKS["K"] + _MODAL_BLOCKS["D"],
    "KT": _PROPOSITIONAL_CORE + _MODAL_BLOCKS["K"] + _MODAL_BLOCKS["T"],
    "K4": _PROPOSITIONAL_CORE + _MODAL_BLOCKS["4"],
    "S4": _PROPOSITIONAL_CORE + _MODAL_BLOCKS["T"] + _MODAL_BLOCKS["S4"],
    "GL": _PROPOSITIONAL_CORE + _MODAL_BLOCKS["GL"],
}


def report_table(report: dict) -> str:
    lines = []
    width = max([len("rule")] + [len(r["rule"]) for r in report["rules"]])
    lines.append(f"{'rule':<{width}}  verdict")
    lines.append(f"{'-' * width}  {'-' * 7}")
    for r in report["rules"]:
        verdict = r["verdict"]
        if r["reason"]:
            verdict += f" ({r['reason']})"
        if r.get("exempt"):
            verdict += f" [{r['exempt']}]"
        lines.append(f"{r['rule']:<{width}}  {verdict}")
    lines.append("")
    lines.append(f"semi-analytic calculus:        "
                 f"{'yes' if report['semi_analytic'] else 'no'}")
    lines.append(f"modal rules:                   "
                 f"{', '.join(report['modal_rules']) or 'none'}"
                 f"{' (allowed set)' if report['allowed_modal_set'] and report['modal_rules'] else ''}")
    lines.append(f"fully terminating (weight):    "
                 f"{'yes' if report['fully_terminating_sufficient'] else 'not established'}")
    lines.append(f"implied Craig interpolation:   "
                 f"{'yes' if report['implied']['cip'] else 'not established'}")
    lines.append(f"implied uniform interpolation: "
                 f"{'yes' if report['implied']['uip'] else 'not established'}")
    lines.append("")
    lines.append(report["caveat"])
    return "\n".join(lines) + "\n"
