"""Kripke models and the semantic side of the workbench.

Everything here is deliberately independent of proof search internals: truth
is computed by direct recursion on formulas, countermodels come from bounded
model enumeration, and the verification entry points re-derive every claim
they certify.  Proof search is only consumed through its public prove().
"""

import random
import zlib
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping, Optional, Union

from .syntax import (And, Atom, Bot, Box, Formula, Implies, Or, Top,
                     render_formula, signed_vocabulary, subformulas,
                     vocabulary, bot, top)
from .sequents import (LabelledSequent, Sequent, formula_interpretation, seq,
                       sequent_vocabulary)
from .multiform import Lab, MConj, MDisj, Multiformula
from .calculi import calculus_for_logic
from . import search


class InterpretationError(ValueError):
    """An evaluation request whose interpretation is malformed: a label with
    no image, or a relational atom its images violate.  Distinct from the
    evaluated object merely being false."""


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    relation: frozenset
    valuation: tuple

    def __post_init__(self) -> None:
        if self.worlds < 1:
            raise ValueError("a model needs at least one world")
        if len(self.valuation) != self.worlds:
            raise ValueError("valuation must cover every world")
        for i, j in self.relation:
            if not (0 <= i < self.worlds and 0 <= j < self.worlds):
                raise ValueError(f"relation pair ({i},{j}) out of range")

    def successors(self, w: int) -> tuple:
        return tuple(j for i, j in sorted(self.relation) if i == w)


def model(worlds: int, relation: Iterable, valuation) -> KripkeModel:
    """Convenience constructor; valuation may be a mapping world -> atoms or
    a sequence indexed by world."""
    if isinstance(valuation, Mapping):
        val = tuple(frozenset(valuation.get(w, ())) for w in range(worlds))
    else:
        val = tuple(frozenset(v) for v in valuation)
    return KripkeModel(worlds, frozenset((int(i), int(j)) for i, j in relation), val)


def model_to_json(m: KripkeModel, refuted_at: int) -> dict:
    return {
        "worlds": m.worlds,
        "relation": [[i, j] for i, j in sorted(m.relation)],
        "valuation": {str(w): sorted(m.valuation[w]) for w in range(m.worlds)},
        "refuted_at": refuted_at,
    }


def model_from_json(d: dict) -> tuple[KripkeModel, int]:
    n = int(d["worlds"])
    val = {int(w): set(atoms) for w, atoms in d.get("valuation", {}).items()}
    m = model(n, d.get("relation", ()), val)
    return m, int(d.get("refuted_at", 0))


# ---------------------------------------------------------------------------
# Frame-condition predicates

def is_reflexive(m: KripkeModel) -> bool:
    return all((w, w) in m.relation for w in range(m.worlds))


def is_irreflexive(m: KripkeModel) -> bool:
    return all((w, w) not in m.relation for w in range(m.worlds))


def is_transitive(m: KripkeModel) -> bool:
    r = m.relation
    return all((i, l) in r for i, j in r for k, l in r if j == k)


def is_symmetric(m: KripkeModel) -> bool:
    return all((j, i) in m.relation for i, j in m.relation)


def is_euclidean(m: KripkeModel) -> bool:
    r = m.relation
    return all((j, l) in r for i, j in r for k, l in r if i == k)


def is_serial(m: KripkeModel) -> bool:
    have = {i for i, _ in m.relation}
    return all(w in have for w in range(m.worlds))


def is_total(m: KripkeModel) -> bool:
    return all((i, j) in m.relation or (j, i) in m.relation
               for i in range(m.worlds) for j in range(m.worlds))


def is_conversely_well_founded(m: KripkeModel) -> bool:
    """No infinite ascending R-chain; on a finite model, no R-cycle."""
    color = {}

    def dfs(w: int) -> bool:
        color[w] = 1
        for i, j in m.relation:
            if i != w:
                continue
            c = color.get(j, 0)
            if c == 1 or (c == 0 and dfs(j)):
                return True
        color[w] = 2
        return False

    return not any(color.get(w, 0) == 0 and dfs(w) for w in range(m.worlds))


_FRAME_CHECKS = {
    "refl": is_reflexive,
    "trans": is_transitive,
    "symm": is_symmetric,
    "eucl": is_euclidean,
    "serial": is_serial,
    "irrefl": is_irreflexive,
    "total": is_total,
}


def frame_holds(frame: Iterable[str], m: KripkeModel) -> bool:
    for cond in frame:
        check = _FRAME_CHECKS.get(cond)
        if check is None:
            raise ValueError(f"unknown frame condition {cond!r}")
        if not check(m):
            return False
    return True


# ---------------------------------------------------------------------------
# Satisfaction

def eval_formula(m: KripkeModel, w: int, f: Formula) -> bool:
    if not (0 <= w < m.worlds):
        raise ValueError(f"world {w} not in the model")
    if isinstance(f, Atom):
        return f.name in m.valuation[w]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, And):
        return eval_formula(m, w, f.left) and eval_formula(m, w, f.right)
    if isinstance(f, Or):
        return eval_formula(m, w, f.left) or eval_formula(m, w, f.right)
    if isinstance(f, Implies):
        return (not eval_formula(m, w, f.left)) or eval_formula(m, w, f.right)
    if isinstance(f, Box):
        return all(eval_formula(m, v, f.child)
                   for i, v in m.relation if i == w)
    raise TypeError(f"not a formula: {f!r}")


def eval_multiformula(m: KripkeModel, ival: Mapping[int, int],
                      u: Multiformula) -> bool:
    if isinstance(u, Lab):
        if u.label not in ival:
            raise InterpretationError(f"label {u.label} is uninterpreted")
        return eval_formula(m, ival[u.label], u.formula)
    if isinstance(u, MConj):
        return eval_multiformula(m, ival, u.left) and \
            eval_multiformula(m, ival, u.right)
    if isinstance(u, MDisj):
        return eval_multiformula(m, ival, u.left) or \
            eval_multiformula(m, ival, u.right)
    raise TypeError(f"not a multiformula: {u!r}")


def eval_labelled(m: KripkeModel, ival: Mapping[int, int],
                  s: Union[LabelledSequent, Multiformula]) -> bool:
    """Truth of a labelled sequent (some antecedent member false or some
    succedent member true under the interpretation) or of a multiformula."""
    if isinstance(s, (Lab, MConj, MDisj)):
        return eval_multiformula(m, ival, s)
    for lbl in s.labels():
        if lbl not in ival:
            raise InterpretationError(f"label {lbl} is uninterpreted")
        if not (0 <= ival[lbl] < m.worlds):
            raise InterpretationError(f"label {lbl} maps outside the model")
    for i, j in s.rel:
        if (ival[i], ival[j]) not in m.relation:
            raise InterpretationError(
                f"relational atom {i}R{j} is violated by the interpretation")
    if any(not eval_formula(m, ival[i], f) for i, f in s.ant):
        return True
    return any(eval_formula(m, ival[i], f) for i, f in s.suc)


# ---------------------------------------------------------------------------
# Classical truth tables

def _assert_modality_free(f: Formula) -> None:
    if any(isinstance(g, Box) for g in subformulas(f)):
        raise ValueError(f"modal formula: {render_formula(f)}")


def _prop_eval(f: Formula, true_atoms: frozenset) -> bool:
    if isinstance(f, Atom):
        return f.name in true_atoms
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, And):
        return _prop_eval(f.left, true_atoms) and _prop_eval(f.right, true_atoms)
    if isinstance(f, Or):
        return _prop_eval(f.left, true_atoms) or _prop_eval(f.right, true_atoms)
    if isinstance(f, Implies):
        return (not _prop_eval(f.left, true_atoms)) or \
            _prop_eval(f.right, true_atoms)
    raise TypeError(f"not a propositional formula: {f!r}")


def cpc_valid(f: Formula) -> bool:
    _assert_modality_free(f)
    atoms = sorted(vocabulary(f))
    for bits in range(1 << len(atoms)):
        true_atoms = frozenset(a for k, a in enumerate(atoms) if bits >> k & 1)
        if not _prop_eval(f, true_atoms):
            return False
    return True


def cpc_countermodel(s: Sequent) -> Optional[dict]:
    """A single-world model making every antecedent member true and every
    succedent member false, or None.  Propositional certificates only: modal
    input yields None."""
    members = list(s.ant) + list(s.suc)
    if any(isinstance(g, Box) for f in members for g in subformulas(f)):
        return None
    atoms = sorted(sequent_vocabulary(s))
    if len(atoms) > 20:
        return None
    for bits in range(1 << len(atoms)):
        true_atoms = frozenset(a for k, a in enumerate(atoms) if bits >> k & 1)
        if all(_prop_eval(f, true_atoms) for f in s.ant) and \
                not any(_prop_eval(f, true_atoms) for f in s.suc):
            m = model(1, (), {0: true_atoms})
            return model_to_json(m, 0)
    return None


# ---------------------------------------------------------------------------
# Bounded countermodel search

_REL_CACHE: dict = {}

# exhaustive relation enumeration above this world count is out of desk
# range (2^25 candidates at five worlds); sampling takes over there
_EXHAUSTIVE_WORLDS = 4

SAMPLE_SEED = 0xC0FFEE


def set_sample_seed(seed: int) -> None:
    """Reseed the relation sampler used beyond the exhaustive world bound.

    Only sampled relation sets depend on it; exhaustive enumerations are
    seed-free.  Clears the relation cache so stale samples cannot leak."""
    global SAMPLE_SEED
    SAMPLE_SEED = seed
    _REL_CACHE.clear()
_SAMPLES = 4000


def _pairs(n: int) -> list:
    return [(i, j) for i in range(n) for j in range(n)]


def _frame_ok(frame: frozenset, rel: frozenset, n: int) -> bool:
    if "refl" in frame and any((w, w) not in rel for w in range(n)):
        return False
    if "irrefl" in frame and any((w, w) in rel for w in range(n)):
        return False
    if "symm" in frame and any((j, i) not in rel for i, j in rel):
        return False
    if "trans" in frame:
        for i, j in rel:
            for k, l in rel:
                if j == k and (i, l) not in rel:
                    return False
    if "eucl" in frame:
        for i, j in rel:
            for k, l in rel:
                if i == k and (j, l) not in rel:
                    return False
    if "serial" in frame:
        have = {i for i, _ in rel}
        if any(w not in have for w in range(n)):
            return False
    if "total" in frame:
        for i in range(n):
            for j in range(n):
                if (i, j) not in rel and (j, i) not in rel:
                    return False
    return True


def _canonical(rel: frozenset, n: int) -> tuple:
    """Least image under permutations fixing world 0 (the refutation point)."""
    if n <= 2:
        return tuple(sorted(rel))
    best = None
    for perm in permutations(range(1, n)):
        full = (0,) + perm
        mapped = tuple(sorted((full[i], full[j]) for i, j in rel))
        if best is None or mapped < best:
            best = mapped
    return best


def _closure(frame: frozenset, rel: set, worlds: Iterable[int]) -> Optional[set]:
    """Close rel under the frame's horn conditions; complete seriality with
    self-loops on dead ends.  None when irreflexivity cannot survive."""
    ws = list(worlds)
    rel = set(rel)
    if "refl" in frame:
        rel.update((w, w) for w in ws)
    while True:
        changed = False
        snapshot = list(rel)
        if "symm" in frame:
            for i, j in snapshot:
                if (j, i) not in rel:
                    rel.add((j, i))
                    changed = True
        if "trans" in frame:
            for i, j in snapshot:
                for k, l in snapshot:
                    if j == k and (i, l) not in rel:
                        rel.add((i, l))
                        changed = True
        if "eucl" in frame:
            for i, j in snapshot:
                for k, l in snapshot:
                    if i == k and (j, l) not in rel:
                        rel.add((j, l))
                        changed = True
        if "serial" in frame:
            have = {i for i, _ in rel}
            for w in ws:
                if w not in have:
                    rel.add((w, w))
                    changed = True
        if not changed:
            break
    if "irrefl" in frame and any(i == j for i, j in rel):
        return None
    return rel


def _relations(frame: frozenset, n: int) -> tuple:
    key = (frame, n)
    cached = _REL_CACHE.get(key)
    if cached is not None:
        return cached
    out = []
    pairs = _pairs(n)
    if n <= _EXHAUSTIVE_WORLDS:
        seen = set()
        for bits in range(1 << len(pairs)):
            rel = frozenset(p for k, p in enumerate(pairs) if bits >> k & 1)
            if not _frame_ok(frame, rel, n):
                continue
            canon = _canonical(rel, n)
            if canon in seen:
                continue
            seen.add(canon)
            out.append(rel)
    else:
        salt = zlib.crc32(",".join(sorted(frame)).encode())
        rng = random.Random(SAMPLE_SEED ^ n ^ salt)
        seen = set()
        for _ in range(_SAMPLES):
            raw = {p for p in pairs if rng.random() < 0.35}
            closed = _closure(frame - {"serial"}, raw, range(n))
            if closed is None:
                continue
            if "serial" in frame:
                closed = _closure(frame, closed, range(n))
                if closed is None:
                    continue
            rel = frozenset(closed)
            if not _frame_ok(frame, rel, n):
                continue
            canon = _canonical(rel, n)
            if canon in seen:
                continue
            seen.add(canon)
            out.append(rel)
        out.sort(key=lambda r: tuple(sorted(r)))
    result = tuple(out)
    _REL_CACHE[key] = result
    return result


def _atom_patterns(k: int, n: int) -> tuple:
    """Bit b of pattern (w, a) says whether assignment index b makes atom a
    true at world w.  Assignment bit layout: w*k + a."""
    total_bits = n * k
    v = 1 << total_bits
    ones = (1 << v) - 1
    pats = {}
    for pos in range(total_bits):
        block = 1 << pos
        # repeating run of 2^pos zeros then 2^pos ones, tiled across all
        # assignments with one bigint multiply
        run = ((1 << block) - 1) << block
        period = block << 1
        comb = ones // ((1 << period) - 1)
        pats[pos] = run * comb
    return pats, ones


def _truth_masks(goal: Formula, atoms: list, n: int, rel: frozenset,
                 pats: dict, full: int) -> dict:
    """truth[(f, w)] = bitmask over assignments where f holds at w."""
    k = len(atoms)
    index = {a: i for i, a in enumerate(atoms)}
    succ = {w: [j for i, j in rel if i == w] for w in range(n)}
    memo: dict = {}

    def go(f: Formula, w: int) -> int:
        got = memo.get((f, w))
        if got is not None:
            return got
        if isinstance(f, Atom):
            out = pats[w * k + index[f.name]]
        elif isinstance(f, Top):
            out = full
        elif isinstance(f, Bot):
            out = 0
        elif isinstance(f, And):
            out = go(f.left, w) & go(f.right, w)
        elif isinstance(f, Or):
            out = go(f.left, w) | go(f.right, w)
        elif isinstance(f, Implies):
            out = (full ^ go(f.left, w)) | go(f.right, w)
        elif isinstance(f, Box):
            out = full
            for v in succ[w]:
                out &= go(f.child, v)
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[(f, w)] = out
        return out

    go(goal, 0)
    return memo


@dataclass(frozen=True)
class CountermodelSearch:
    countermodel: Optional[dict]
    confidence: str
    note: str = ""

    @property
    def found(self) -> bool:
        return self.countermodel is not None


# frames whose filtration argument keeps the conditions, so the exponential
# small-model bound applies and exhausting it decides validity
_FILTRATION_OK = (
    frozenset(), frozenset({"refl"}), frozenset({"serial"}),
    frozenset({"trans"}), frozenset({"refl", "trans"}),
    frozenset({"refl", "eucl"}), frozenset({"trans", "irrefl"}),
)

_MAX_ASSIGNMENT_BITS = 22


def find_countermodel(frame, goal: Formula, max_worlds: int = 4) -> CountermodelSearch:
    """Enumerate pointed models (refutation point fixed at world 0) of
    increasing size on the frame class and return the first refuting one.

    Exhaustive up to four worlds with permutation-canonical relations;
    sampled beyond that.  A miss is a validity verdict only when the
    confidence tag says the bound was decisive.
    """
    frame = frozenset(frame)
    if max_worlds < 1 or max_worlds > 6:
        raise ValueError("max_worlds must be between 1 and 6")
    atoms = sorted(vocabulary(goal))
    k = len(atoms)
    notes = []
    sampled = False
    for n in range(1, max_worlds + 1):
        if n * k > _MAX_ASSIGNMENT_BITS:
            notes.append(f"skipped {n}-world models: {n * k} assignment bits")
            continue
        if n > _EXHAUSTIVE_WORLDS:
            sampled = True
        pats, full = _atom_patterns(k, n)
        for rel in _relations(frame, n):
            masks = _truth_masks(goal, atoms, n, rel, pats, full)
            refuting = full ^ masks[(goal, 0)]
            if not refuting:
                continue
            b = (refuting & -refuting).bit_length() - 1
            val = {w: frozenset(a for i, a in enumerate(atoms)
                                if b >> (w * k + i) & 1)
                   for w in range(n)}
            m = model(n, rel, val)
            return CountermodelSearch(model_to_json(m, 0), "refuted",
                                      "; ".join(notes))

    modality_free = not any(isinstance(g, Box) for g in subformulas(goal))
    decisive = False
    if modality_free and max_worlds >= 1 and k <= _MAX_ASSIGNMENT_BITS:
        decisive = True
    elif frame in _FILTRATION_OK and not sampled and not notes:
        if 2 ** len(subformulas(goal)) <= max_worlds:
            decisive = True
        if frame == frozenset({"refl", "eucl"}):
            boxes = sum(1 for g in subformulas(goal) if isinstance(g, Box))
            if boxes + 1 <= max_worlds:
                decisive = True
    return CountermodelSearch(
        None, "complete_at_bound" if decisive else "bounded_only",
        "; ".join(notes))


def bounded_countermodel(goal: Sequent, frame) -> Optional[dict]:
    """Countermodel certificate for a failed sequent, or None."""
    f = formula_interpretation(goal)
    return find_countermodel(frozenset(frame), f).countermodel


def labelled_countermodel(state: LabelledSequent, frame) -> Optional[dict]:
    """Read a model off a saturated labelled branch and verify it refutes
    the branch before handing it out."""
    frame = frozenset(frame)
    labels = sorted(state.labels())
    if not labels:
        return None
    idx = {lbl: w for w, lbl in enumerate(labels)}
    rel = {(idx[i], idx[j]) for i, j in state.rel}
    closed = _closure(frame, rel, range(len(labels)))
    if closed is None:
        return None
    val = {w: set() for w in range(len(labels))}
    for i, f in state.ant:
        if isinstance(f, Atom):
            val[idx[i]].add(f.name)
    m = model(len(labels), closed, val)
    if not frame_holds(frame, m):
        return None
    if any(not eval_formula(m, idx[i], f) for i, f in state.ant):
        return None
    if any(eval_formula(m, idx[i], f) for i, f in state.suc):
        return None
    return model_to_json(m, idx.get(1, 0))


# ---------------------------------------------------------------------------
# Verification reports

def _check(name: str, ok: bool, note: str = "") -> dict:
    out = {"name": name, "ok": ok}
    if note:
        out["note"] = note
    return out


def _provable(calculus, antecedent: Formula, consequent: Formula,
              budget=search.DEFAULT_BUDGET) -> tuple[Optional[bool], str]:
    outcome = search.prove(calculus, seq([antecedent], [consequent]), budget)
    if outcome.status == search.PROVED:
        return True, ""
    if outcome.status == search.NOT_PROVABLE:
        return False, "not provable"
    return None, f"inconclusive: {outcome.detail or 'budget exceeded'}"


def verify_craig(logic: str, phi: Formula, theta: Formula, psi: Formula,
                 mode: str = "craig",
                 budget=search.DEFAULT_BUDGET) -> dict:
    """Re-derive every condition of the interpolation claim from scratch."""
    calculus = calculus_for_logic(logic)
    checks = []

    shared = vocabulary(phi) & vocabulary(psi)
    if mode == "lyndon":
        sp, st, ss = (signed_vocabulary(f) for f in (phi, theta, psi))
        pos_ok = st.positive <= sp.positive & ss.positive
        neg_ok = st.negative <= sp.negative & ss.negative
        checks.append(_check(
            "vocabulary_positive", pos_ok,
            "" if pos_ok else
            f"extra: {sorted(st.positive - (sp.positive & ss.positive))}"))
        checks.append(_check(
            "vocabulary_negative", neg_ok,
            "" if neg_ok else
            f"extra: {sorted(st.negative - (sp.negative & ss.negative))}"))
    else:
        extra = vocabulary(theta) - shared
        checks.append(_check("vocabulary", not extra,
                             "" if not extra else f"extra: {sorted(extra)}"))

    for name, a, b in (("implication_left", phi, theta),
                       ("implication_right", theta, psi)):
        ok, note = _provable(calculus, a, b, budget)
        checks.append(_check(name, bool(ok), note))

    if str(calculus) in ("LK", "LJ"):
        for name, a, b in (("truth_table_left", phi, theta),
                           ("truth_table_right", theta, psi)):
            try:
                checks.append(_check(name, cpc_valid(Implies(a, b))))
            except ValueError as err:
                checks.append(_check(name, False, str(err)))

    return {"ok": all(c["ok"] for c in checks), "logic": logic,
            "mode": mode, "checks": checks}


# ---------------------------------------------------------------------------
# Uniform interpolant verification

_SIGNATURE_FRAMES3 = (
    frozenset({(0, 1), (1, 2)}),
    frozenset({(0, 1), (0, 2)}),
    frozenset({(0, 1), (1, 2), (2, 2)}),
    frozenset({(0, 1), (1, 0), (0, 2)}),
)


def _signature_models(atoms: tuple) -> list:
    """A fixed family of pointed K models used to fingerprint formulas."""
    out = []
    k = len(atoms)

    def vals(n: int):
        for bits in range(1 << (n * k)):
            yield {w: frozenset(a for i, a in enumerate(atoms)
                                if bits >> (w * k + i) & 1)
                   for w in range(n)}

    for rel_bits in range(2):
        rel = frozenset({(0, 0)}) if rel_bits else frozenset()
        for v in vals(1):
            out.append(model(1, rel, v))
    for rel_bits in range(16):
        rel = frozenset(p for i, p in enumerate(
            ((0, 0), (0, 1), (1, 0), (1, 1))) if rel_bits >> i & 1)
        for v in vals(2):
            out.append(model(2, rel, v))
    if k <= 2:
        for rel in _SIGNATURE_FRAMES3:
            for v in vals(3):
                out.append(model(3, rel, v))
    return out


def _signature(f: Formula, models: list) -> int:
    sig = 0
    for i, m in enumerate(models):
        if eval_formula(m, 0, f):
            sig |= 1 << i
    return sig


_POOL_CACHE: dict = {}


def _pfree_pool(atoms: tuple, depth_bound: int, cap: int = 400) -> list:
    """Representatives of formulas over the given atoms up to the depth
    bound, deduplicated by truth fingerprint on a fixed model family.

    Signatures of conjunction, disjunction, and negation candidates come
    from bit operations on their parts' signatures; only boxed candidates
    need a fresh model sweep."""
    key = (atoms, depth_bound, cap)
    cached = _POOL_CACHE.get(key)
    if cached is not None:
        return cached
    models = _signature_models(atoms)
    ones = (1 << len(models)) - 1
    pool: dict = {}

    def add(f: Formula, sig: int) -> None:
        if sig not in pool and len(pool) < cap:
            pool[sig] = f

    add(top, ones)
    add(bot, 0)
    for a in atoms:
        add(Atom(a), _signature(Atom(a), models))
    for _ in range(depth_bound):
        if len(pool) >= cap:
            break
        prev = list(pool.items())
        for sig, f in prev:
            boxed = Box(f)
            add(boxed, _signature(boxed, models))
            add(Implies(f, bot), ones ^ sig)
        for sig_f, f in prev:
            for sig_g, g in prev:
                if len(pool) >= cap:
                    break
                add(And(f, g), sig_f & sig_g)
                add(Or(f, g), sig_f | sig_g)
    out = list(pool.values())
    _POOL_CACHE[key] = out
    return out


def verify_uniform(logic: str, phi: Formula, p: str, chi: Formula,
                   direction: str = "forall", depth_bound: int = 2,
                   budget=search.DEFAULT_BUDGET) -> dict:
    """Check a claimed uniform interpolant: variable condition, the defining
    implication, and quantifier-free transfer over an enumerated family of
    p-free formulas."""
    if logic != "K":
        raise ValueError("uniform verification is implemented for K only")
    if direction not in ("forall", "exists"):
        raise ValueError(f"unknown direction {direction!r}")
    checks = []

    voc_chi = vocabulary(chi)
    allowed = vocabulary(phi) - {p}
    cond1 = p not in voc_chi and voc_chi <= allowed
    checks.append(_check(
        "variable_condition", cond1,
        "" if cond1 else f"vocabulary {sorted(voc_chi)} vs {sorted(allowed)}"))

    if direction == "forall":
        ok2, note2 = _provable("G3K", chi, phi, budget)
    else:
        ok2, note2 = _provable("G3K", phi, chi, budget)
    checks.append(_check("defining_implication", bool(ok2), note2))

    pool = _pfree_pool(tuple(sorted(allowed)), depth_bound)
    violations = []
    inconclusive = 0
    for psi in pool:
        if direction == "forall":
            a, note_a = _provable("G3K", psi, phi, budget)
            b, note_b = _provable("G3K", psi, chi, budget)
        else:
            a, note_a = _provable("G3K", phi, psi, budget)
            b, note_b = _provable("G3K", chi, psi, budget)
        if a is None or b is None:
            inconclusive += 1
            continue
        if a != b:
            violations.append(render_formula(psi))
            if len(violations) >= 5:
                break
    note3 = f"{len(pool)} candidates"
    if violations:
        note3 += "; transfer fails at: " + ", ".join(violations)
    if inconclusive:
        note3 += f"; {inconclusive} inconclusive"
    checks.append(_check("transfer", not violations and not inconclusive, note3))

    return {"ok": all(c["ok"] for c in checks), "logic": logic,
            "atom": p, "direction": direction, "checks": checks}
