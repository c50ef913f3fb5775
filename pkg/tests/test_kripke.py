"""Model evaluation, countermodel search, and the two verification oracles."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import formula_strategy
from interpol import kripke as K
from interpol.multiform import Lab, MConj, MDisj, mf_form
from interpol.sequents import lseq, seq
from interpol.syntax import parse_formula as pf


def test_eval_formula_frozen():
    m1 = K.model(1, [(0, 0)], {0: {"p"}})
    assert K.eval_formula(m1, 0, pf("[]p")) is True
    assert K.eval_formula(m1, 0, pf("<>p")) is True
    m2 = K.model(2, [(0, 1)], {0: {"p"}, 1: set()})
    assert K.eval_formula(m2, 0, pf("[]p")) is False
    assert K.eval_formula(m2, 0, pf("p & ~q")) is True
    assert K.eval_formula(m2, 0, pf("top")) is True
    assert K.eval_formula(m2, 1, pf("[]p")) is True  # no successors


def test_model_json_round_trip():
    m = K.model(2, [(0, 1), (1, 1)], {0: {"p"}, 1: {"p", "q"}})
    assert K.model_from_json(K.model_to_json(m, 1)) == (m, 1)


def test_frame_predicates():
    db = K.model(2, [(0, 1), (1, 0)], {0: set(), 1: {"q"}})
    assert K.is_serial(db) and K.is_symmetric(db)
    assert not K.is_reflexive(db)
    assert not K.is_transitive(db)
    refl = K.model(1, [(0, 0)], {0: set()})
    assert K.is_reflexive(refl) and K.is_euclidean(refl)
    assert K.frame_holds(frozenset({"serial", "symm"}), db)
    assert not K.frame_holds(frozenset({"refl"}), db)


def test_eval_labelled_and_interpretation_errors():
    m1 = K.model(1, [(0, 0)], {0: {"p"}})
    assert K.eval_labelled(m1, {1: 0}, lseq([(1, 1)], [], [])) is False
    u = MDisj(Lab(1, pf("p")), Lab(1, pf("bot")))
    assert K.eval_labelled(m1, {1: 0}, u) is True
    db = K.model(2, [(0, 1), (1, 0)], {0: set(), 1: {"q"}})
    root = MDisj(Lab(1, pf("[]q")), Lab(1, pf("bot")))
    assert K.eval_labelled(db, {1: 0}, root) is True
    with pytest.raises(K.InterpretationError):
        K.eval_labelled(m1, {}, u)
    with pytest.raises(K.InterpretationError):
        # relational atom 1R2 is violated by the chosen worlds
        K.eval_labelled(K.model(2, [(0, 1)], {0: set(), 1: set()}),
                        {1: 0, 2: 0}, lseq([(1, 2)], [], []))


def test_cpc_valid():
    assert K.cpc_valid(pf("((p & q) | (~r & s)) -> (t | p | q | ~r)")) is True
    assert K.cpc_valid(pf("p | ~p")) is True
    assert K.cpc_valid(pf("p -> q")) is False
    with pytest.raises(ValueError):
        K.cpc_valid(pf("[]p"))


def test_cpc_countermodel():
    cert = K.cpc_countermodel(seq([pf("p")], [pf("q")]))
    assert cert is not None
    assert K.cpc_countermodel(seq([], [pf("p | ~p")])) is None


def test_find_countermodel_k():
    r = K.find_countermodel(frozenset(), pf("[]p | []~p"), 3)
    assert r.found
    cm = r.countermodel
    succ = [j for i, j in cm["relation"] if i == cm["refuted_at"]]
    vals = {w: set(cm["valuation"][str(w)]) for w in range(cm["worlds"])}
    # the refuting world needs one p-successor and one ~p-successor
    assert len({("p" in vals[j]) for j in succ}) == 2


def test_find_countermodel_respects_frames():
    r = K.find_countermodel(frozenset({"refl"}), pf("[]p -> p"), 3)
    assert not r.found
    assert r.confidence in ("complete_at_bound", "bounded_only")
    r2 = K.find_countermodel(frozenset({"serial"}), pf("[]p -> <>p"), 3)
    assert not r2.found
    r3 = K.find_countermodel(frozenset(), pf("[]p -> p"), 3)
    assert r3.found


def test_set_sample_seed_is_visible():
    old = K.SAMPLE_SEED
    try:
        K.set_sample_seed(7)
        assert K.SAMPLE_SEED == 7
    finally:
        K.set_sample_seed(old)


def test_verify_craig_cpc():
    phi = pf("(p & q) | (~r & s)")
    psi = pf("t | p | q | ~r")
    rep = K.verify_craig("CPC", phi, pf("p | ~r"), psi, "lyndon")
    assert rep["ok"], rep
    names = [c["name"] for c in rep["checks"]]
    assert "vocabulary_positive" in names
    assert "truth_table_left" in names

    rep2 = K.verify_craig("CPC", phi, pf("(p & q) | ~r"), psi, "craig")
    assert rep2["ok"], rep2

    rep3 = K.verify_craig("CPC", pf("p"), pf("q"), pf("p"))
    assert not rep3["ok"]
    assert any(c["name"] == "vocabulary" and not c["ok"] for c in rep3["checks"])


def test_verify_craig_polarity_rejection():
    # right vocabulary, wrong polarity: ~p is not a lyndon interpolant here
    rep = K.verify_craig("CPC", pf("p & q"), pf("~p"), pf("p | r"), "lyndon")
    assert not rep["ok"]
    bad = [c["name"] for c in rep["checks"] if not c["ok"]]
    assert "vocabulary_positive" in bad or "vocabulary_negative" in bad


def test_verify_craig_modal():
    rep = K.verify_craig("K", pf("[](p & q)"), pf("[]p"), pf("[]p | r"))
    assert rep["ok"], rep
    rep2 = K.verify_craig("S5", pf("<>p & q"), pf("[]<>p"), pf("[]<>p | r"))
    assert rep2["ok"], rep2
    rep3 = K.verify_craig("K", pf("[](p & q)"), pf("[]q"), pf("[]p | r"))
    assert not rep3["ok"]


def test_verify_uniform():
    ru1 = K.verify_uniform("K", pf("[]p | []~p"), "p", pf("[]bot | []bot"),
                           "forall", 2)
    assert ru1["ok"], ru1
    ru2 = K.verify_uniform("K", pf("q"), "p", pf("q"), "forall", 2)
    assert ru2["ok"], ru2
    # top is an upper bound of forall p []p but not a lower one
    ru3 = K.verify_uniform("K", pf("[]p"), "p", pf("top"), "forall", 2)
    assert not ru3["ok"]
    assert any(c["name"] == "defining_implication" and not c["ok"]
               for c in ru3["checks"])
    # q leaks vocabulary
    ru4 = K.verify_uniform("K", pf("[]p"), "p", pf("q"), "forall", 2)
    assert any(c["name"] == "variable_condition" and not c["ok"]
               for c in ru4["checks"])
    with pytest.raises(ValueError):
        K.verify_uniform("S4", pf("[]p"), "p", pf("top"), "forall", 2)
    with pytest.raises(ValueError):
        K.verify_uniform("K", pf("[]p"), "p", pf("top"), "sideways", 2)


def test_verify_uniform_transfer_catches_weak_candidates():
    # []bot & []bot is fine; bot is a lower bound but not the strongest one,
    # which only the transfer family can expose
    rep = K.verify_uniform("K", pf("[]p | []~p"), "p", pf("bot"), "forall", 2)
    assert not rep["ok"]
    assert any(c["name"] == "transfer" and not c["ok"] for c in rep["checks"])


@given(formula_strategy(atoms=("p", "q"), max_leaves=5),
       st.integers(min_value=0, max_value=15))
@settings(max_examples=80, deadline=None)
def test_eval_multiformula_constant_interpretation(f, bits):
    """With every label at the same world, a multiformula evaluates exactly
    like its label-erased formula."""
    m = K.model(2, [(0, 1)] + ([(1, 0)] if bits & 8 else []),
                {0: {"p"} if bits & 1 else set(),
                 1: ({"q"} if bits & 2 else set()) | ({"p"} if bits & 4 else set())})
    u = MConj(MDisj(Lab(1, f), Lab(2, pf("q"))), Lab(3, pf("~q")))
    ival = {1: 0, 2: 0, 3: 0}
    assert K.eval_multiformula(m, ival, u) == K.eval_formula(m, 0, mf_form(u))
