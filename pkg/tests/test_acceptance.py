"""Release gate.

One test per go/no-go criterion: fixture replay, the worked uniform
interpolant, bulk seeded corpora for each extraction path, the weight
decrease guarantee for K search, and the classifier regressions.  Every
test appends a single PASS/FAIL line to the terminal summary so the
verdicts survive in plain pytest output.

The bulk tests draw their corpora from fixed seeds, so a red line here
is reproducible by rerunning the one test.
"""

import json
import random
import time
from pathlib import Path

import conftest
from conftest import rand_formula

from interpol import cli
from interpol.calculi import rule_instances
from interpol.classify import (STANDARD_TABLES, assess_calculus,
                               classify_rule, parse_rules, report_to_json)
from interpol.kripke import cpc_valid, find_countermodel, verify_craig
from interpol.maehara import extract_interpolant, interpolate
from interpol.multiform import (extract_labelled_interpolant,
                                extract_with_nodes, frame_logic_name,
                                interpolate_labelled, labels, mf_form,
                                render_multiformula)
from interpol.pitts import UniformTask, uniform_interpolant
from interpol.search import BUDGET_EXCEEDED, prove
from interpol.sequents import load_fixture, seq
from interpol.syntax import (And, Atom, Bot, Box, Implies, Or, Top, neg,
                             parse_formula, render_formula, vocabulary,
                             weight)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FRAMES = [frozenset(), frozenset({"refl"}), frozenset({"serial"}),
          frozenset({"trans"}), frozenset({"refl", "trans"}),
          frozenset({"refl", "eucl"}), frozenset({"serial", "symm"})]


def _gate(num, ok, note, t0=None, limit=None):
    """Record one criterion verdict and make the test agree with it."""
    if t0 is not None:
        dt = time.perf_counter() - t0
        if limit is not None:
            ok = ok and dt < limit
            note = f"{note} [{dt:.2f}s < {limit:.0f}s]"
        else:
            note = f"{note} [{dt:.2f}s]"
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {note}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _provable(goal):
    return prove("G3K", goal).proved


# ---------------------------------------------------------------------------
# 1. fixture replay is byte exact

def test_criterion_1_fixture_replay(capsys):
    t0 = time.perf_counter()
    bad = []

    path = FIXTURES / "cpc_p_or_not_r.json"
    doc = json.loads(path.read_text())
    calc, tree = load_fixture(path)
    theta = extract_interpolant(tree, doc["mode"], calc)
    if render_formula(theta) != doc["expected"]["interpolant"]:
        bad.append(f"cpc interpolant {render_formula(theta)!r}")

    path = FIXTURES / "db_boxq.json"
    doc = json.loads(path.read_text())
    calc, tree = load_fixture(path)
    u = extract_labelled_interpolant(tree, doc["mode"])
    if render_multiformula(u) != doc["expected"]["multiformula"]:
        bad.append(f"db multiformula {render_multiformula(u)!r}")
    if render_formula(mf_form(u)) != doc["expected"]["interpolant"]:
        bad.append(f"db form {render_formula(mf_form(u))!r}")

    for name in ("cpc_p_or_not_r.json", "db_boxq.json"):
        code = cli.run(["replay", str(FIXTURES / name)])
        out = capsys.readouterr().out
        if code != 0 or "matches expectation" not in out:
            bad.append(f"replay {name} exit {code}")

    _gate(1, not bad, bad[0] if bad else "both fixtures byte-exact", t0, 1.0)


# ---------------------------------------------------------------------------
# 2. worked uniform interpolant through the command line

def test_criterion_2_uniform_worked_example(capsys):
    t0 = time.perf_counter()
    code = cli.run(["uniform", "--logic", "K", "--var", "p",
                    "--dir", "forall", "[]p | []~p", "--json"])
    doc = json.loads(capsys.readouterr().out)
    chi = parse_formula(doc["result"])
    target = parse_formula("[]bot")
    fwd = prove("G3K", seq((chi,), (target,))).proved
    bwd = prove("G3K", seq((target,), (chi,))).proved
    ok = code == 0 and doc["verified"] and fwd and bwd
    _gate(2, ok, f"result {doc['result']!r} bi-provable with []bot", t0, 5.0)


# ---------------------------------------------------------------------------
# 3. bulk classical pairs, polarity-sharp extraction

def test_criterion_3_cpc_bulk():
    t0 = time.perf_counter()
    rng = random.Random(0xC3)
    pairs = []
    draws = 0
    while len(pairs) < 500 and draws < 50000:
        draws += 1
        phi = rand_formula(rng, ("p", "q", "r", "s"), 4)
        psi = rand_formula(rng, ("p", "q", "r", "s"), 4)
        if cpc_valid(Implies(phi, psi)):
            pairs.append((phi, psi))
    bad = []
    for phi, psi in pairs:
        res = interpolate("CPC", phi, psi, mode="lyndon", verify=False)
        if res.status != "interpolated":
            bad.append(f"{render_formula(phi)} / {render_formula(psi)}: "
                       f"{res.status}")
            continue
        rep = verify_craig("CPC", phi, res.interpolant, psi, mode="lyndon")
        if not rep["ok"]:
            names = [c["name"] for c in rep["checks"] if not c["ok"]]
            bad.append(f"{render_formula(phi)} / {render_formula(psi)}: "
                       f"{names}")
    ok = len(pairs) == 500 and not bad
    note = (f"{len(pairs)} provable pairs from {draws} draws, "
            f"{len(bad)} failures") + (f"; first: {bad[0]}" if bad else "")
    _gate(3, ok, note, t0, 60.0)


# ---------------------------------------------------------------------------
# 4. bulk K pairs through the split-sequent path

def test_criterion_4_k_bulk():
    t0 = time.perf_counter()
    rng = random.Random(0xC4)
    pairs = []
    draws = 0
    while len(pairs) < 200 and draws < 20000:
        draws += 1
        phi = rand_formula(rng, ("p", "q", "r"), 4, 2)
        psi = rand_formula(rng, ("p", "q", "r"), 4, 2)
        if prove("G3K", seq((), (Implies(phi, psi),))).proved:
            pairs.append((phi, psi))
    bad = []
    for phi, psi in pairs:
        res = interpolate("K", phi, psi, verify=False)
        if res.status != "interpolated":
            bad.append(f"{render_formula(phi)} / {render_formula(psi)}: "
                       f"{res.status}")
            continue
        rep = verify_craig("K", phi, res.interpolant, psi)
        if not rep["ok"]:
            names = [c["name"] for c in rep["checks"] if not c["ok"]]
            bad.append(f"{render_formula(phi)} / {render_formula(psi)}: "
                       f"{names}")
    ok = len(pairs) == 200 and not bad
    note = (f"{len(pairs)} provable pairs from {draws} draws, "
            f"{len(bad)} failures") + (f"; first: {bad[0]}" if bad else "")
    _gate(4, ok, note, t0, 120.0)


# ---------------------------------------------------------------------------
# 5. the labelled path across the frame grid

def test_criterion_5_labelled_grid():
    t0 = time.perf_counter()
    bad = []
    total = 0
    for i, frame in enumerate(FRAMES):
        rng = random.Random(0xC500 + i)
        logic = frame_logic_name(frame)
        hits = 0
        draws = 0
        while hits < 50 and draws < 5000:
            draws += 1
            # two atoms and shallow trees keep the 4-world sweeps cheap
            phi = rand_formula(rng, ("p", "q"), 2, 2)
            psi = rand_formula(rng, ("p", "q"), 2, 2)
            res = interpolate_labelled(frame, phi, psi, verify=False)
            if res.status != "interpolated":
                continue
            hits += 1
            total += 1
            tag = f"{logic}: {render_formula(phi)} / {render_formula(psi)}"
            rep = verify_craig(logic, phi, res.interpolant, psi)
            if not rep["ok"]:
                bad.append(f"{tag}: "
                           f"{[c['name'] for c in rep['checks'] if not c['ok']]}")
                continue
            # no countermodel with at most 4 worlds may refute either half
            left = find_countermodel(frame, Implies(phi, res.interpolant), 4)
            right = find_countermodel(frame, Implies(res.interpolant, psi), 4)
            if left.found or right.found:
                bad.append(f"{tag}: bounded countermodel")
                continue
            # every node's interpolant must live on that node's labels
            _, trace = extract_with_nodes(res.split_proof)
            for node, u in trace:
                scope = ({lab for lab, _ in node.conclusion.ant}
                         | {lab for lab, _ in node.conclusion.suc}
                         | {x for e in node.conclusion.rel for x in e})
                if not labels(u) <= scope:
                    bad.append(f"{tag}: labels escape at {node.rule}")
                    break
        if hits < 50:
            bad.append(f"{logic}: only {hits} provable pairs in {draws} draws")
    ok = total == 350 and not bad
    note = (f"{total} pairs over {len(FRAMES)} frames, {len(bad)} failures"
            + (f"; first: {bad[0]}" if bad else ""))
    _gate(5, ok, note, t0, 300.0)


# ---------------------------------------------------------------------------
# 6. uniform interpolants satisfy all three defining conditions

def _modal_depth(f):
    if isinstance(f, Box):
        return 1 + _modal_depth(f.child)
    if isinstance(f, (And, Or, Implies)):
        return max(_modal_depth(f.left), _modal_depth(f.right))
    return 0


def _pfree_pool(cap=300):
    """Deterministic enumeration of p-free formulas over q: two growth
    rounds over {q, top, bot}, deduplicated on the printed form, kept to
    the `cap` lightest."""
    pool = {}
    for f in (Atom("q"), Top(), Bot()):
        pool[render_formula(f)] = f
    for _ in range(2):
        snapshot = list(pool.values())
        for f in snapshot:
            for g in (Box(f), neg(f)):
                pool.setdefault(render_formula(g), g)
        for f in snapshot:
            for g in snapshot:
                for h in (And(f, g), Or(f, g), Implies(f, g)):
                    pool.setdefault(render_formula(h), h)
    keep = [f for f in pool.values() if _modal_depth(f) <= 2]
    keep.sort(key=lambda f: (weight(f), render_formula(f)))
    return keep[:cap]


def test_criterion_6_uniform_bulk():
    t0 = time.perf_counter()
    rng = random.Random(0xC6)
    pool = _pfree_pool()
    assert 200 <= len(pool) <= 300
    bad = []
    for _ in range(100):
        phi = rand_formula(rng, ("p", "q"), 3, 2)
        chi = uniform_interpolant(UniformTask(phi, "p", "forall"))
        tag = f"Ap.{render_formula(phi)} = {render_formula(chi)}"
        if not vocabulary(chi) <= vocabulary(phi) - {"p"}:
            bad.append(f"{tag}: vocabulary")
            continue
        if not _provable(seq((chi,), (phi,))):
            bad.append(f"{tag}: defining implication")
            continue
        # transfer: any p-free consequence-giver must factor through chi.
        # The converse direction follows from the defining implication, so
        # one sweep over the pool settles it; this sweep is also what
        # adjudicates the polarity choice made at terminal rows.
        for psi in pool:
            if _provable(seq((psi,), (phi,))) \
                    and not _provable(seq((psi,), (chi,))):
                bad.append(f"{tag}: transfer fails at {render_formula(psi)}")
                break
    ok = not bad
    note = (f"100 formulas against a {len(pool)}-formula transfer pool, "
            f"{len(bad)} failures") + (f"; first: {bad[0]}" if bad else "")
    _gate(6, ok, note, t0, 180.0)


# ---------------------------------------------------------------------------
# 7. backward K expansion always shrinks weight, search always terminates

def test_criterion_7_weight_decrease():
    t0 = time.perf_counter()
    rng = random.Random(0xC7)
    violations = 0
    exhausted = 0
    expansions = 0
    for _ in range(1000):
        ant = [rand_formula(rng, ("p", "q", "r"), rng.randint(1, 3), 2)
               for _ in range(rng.randint(0, 2))]
        suc = [rand_formula(rng, ("p", "q", "r"), rng.randint(1, 3), 2)
               for _ in range(rng.randint(0, 2))]
        s = seq(ant, suc)
        w = s.weight_total()
        for inst in rule_instances("G3K", s):
            for prem in inst.premises:
                expansions += 1
                if not prem.weight_total() < w:
                    violations += 1
        if prove("G3K", s).status is BUDGET_EXCEEDED:
            exhausted += 1
    ok = violations == 0 and exhausted == 0
    _gate(7, ok, f"{expansions} expansions, {violations} weight violations, "
                 f"{exhausted} budget exhaustions in 1000 searches", t0)


# ---------------------------------------------------------------------------
# 8. classifier regressions

def test_criterion_8_classifier_regressions():
    t0 = time.perf_counter()
    bad = []

    lk = assess_calculus(parse_rules(STANDARD_TABLES["LK"]))
    if not (lk["semi_analytic"] and lk["implied"]["cip"]):
        bad.append("LK not accepted")
    if not any(r["verdict"] == "multi_conclusion" for r in lk["rules"]):
        bad.append("LK lost its multi-conclusion rules")

    expected = [("LK+cut", "cut", "variable_condition"),
                ("K", "K", "context_not_intact"),
                ("KD", "D", "context_not_intact"),
                ("K4", "4", "context_disappears"),
                ("GL", "GL", "context_disappears")]
    for table, name, reason in expected:
        rule = next(r for r in parse_rules(STANDARD_TABLES[table])
                    if r.name == name)
        v = classify_rule(rule)
        if (v.kind, v.reason) != ("not_semi_analytic", reason):
            bad.append(f"{name}: got {v.kind}/{v.reason}, wanted {reason}")

    clash = parse_rules("rule: clash\nconclusion: p, ~p, q =>\n")[0]
    v = classify_rule(clash)
    if (v.kind, v.reason) != ("not_semi_analytic", "axiom_not_focused"):
        bad.append(f"clash axiom: got {v.kind}/{v.reason}")

    kt = assess_calculus(parse_rules(STANDARD_TABLES["KT"]))
    if kt["fully_terminating_sufficient"]:
        bad.append("KT claimed terminating")

    random.seed(11)
    one = report_to_json(assess_calculus(parse_rules(STANDARD_TABLES["K"])))
    random.seed(99)
    two = report_to_json(assess_calculus(parse_rules(STANDARD_TABLES["K"])))
    if one != two:
        bad.append("report bytes drift with the global seed")

    _gate(8, not bad, bad[0] if bad else
          "verdicts, reasons, aggregates and bytes all stable", t0)


# ---------------------------------------------------------------------------
# 9. what the classifier does not claim

def test_criterion_9_scope_of_claims():
    t0 = time.perf_counter()
    rep = assess_calculus(parse_rules(STANDARD_TABLES["K"]))
    conditional = ("presentation" in rep["caveat"]
                   and set(rep["implied"]) == {"cip", "uip"}
                   and "caveat" in json.loads(report_to_json(rep)))
    _gate(9, conditional,
          "meta-theorems are not checked here; the regressions of "
          "criterion 8 stand in and every report carries the "
          "presentation caveat", t0)
