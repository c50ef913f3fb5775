"""Sequents, splits, labelled sequents, and proof serialization."""

import json
from pathlib import Path

import pytest

from interpol.calculi import validate_proof
from interpol.search import prove
from interpol.sequents import (
    FixtureError,
    LabelledSplitProof,
    SplitProofTree,
    formula_interpretation,
    labelled_from_json,
    labelled_to_json,
    load_fixture,
    lseq,
    proof_from_json,
    proof_to_json,
    render_labelled,
    render_sequent,
    seq,
    sequent_from_json,
    sequent_signed_vocabulary,
    sequent_to_json,
    sequent_vocabulary,
    split,
)
from interpol.syntax import parse_formula as pf
from interpol.syntax import render_formula as rf


def test_multiset_key_ignores_order():
    s = seq([pf("p"), pf("p"), pf("q")], [pf("r")])
    assert s.key == (("p", "p", "q"), ("r",))
    assert seq([pf("q"), pf("p"), pf("p")], [pf("r")]).key == s.key
    # occurrences keep their order even though the key does not
    assert [rf(f) for f in s.ant] == ["p", "p", "q"]


def test_subsumes_is_multiset_containment():
    s = seq([pf("p"), pf("p"), pf("q")], [pf("r")])
    t = seq([pf("p"), pf("q")], [pf("r")])
    assert t.subsumes(s)
    assert not s.subsumes(t)
    assert s.subsumes(s)


def test_render_and_interpretation_frozen():
    assert render_sequent(seq([pf("p"), pf("q")], [pf("r")])) == "p, q => r"
    assert rf(formula_interpretation(seq([pf("p"), pf("q")], [pf("r"), pf("s")]))) \
        == "p & q -> r | s"
    assert rf(formula_interpretation(seq([], [pf("r")]))) == "top -> r"
    assert rf(formula_interpretation(seq([pf("p")], []))) == "~p"
    assert rf(formula_interpretation(seq([], []))) == "~top"


def test_sequent_vocabulary_flips_antecedent():
    s = seq([pf("p -> q")], [pf("r")])
    sv = sequent_signed_vocabulary(s)
    assert sorted(sv.positive) == ["p", "r"]
    assert sorted(sv.negative) == ["q"]
    assert sequent_vocabulary(s) == frozenset({"p", "q", "r"})


def test_split_is_positional():
    s = seq([pf("p"), pf("p"), pf("q")], [pf("r")])
    sp = split(s, "LRL", "R")
    assert [rf(f) for f in sp.left_ant] == ["p", "q"]
    assert [rf(f) for f in sp.right_ant] == ["p"]
    assert sp.left_suc == ()
    assert [rf(f) for f in sp.right_suc] == ["r"]


def test_split_demands_full_tag_cover():
    s = seq([pf("p"), pf("q")], [pf("r")])
    with pytest.raises(ValueError):
        split(s, "L", "R")
    with pytest.raises(ValueError):
        split(s, "LX", "R")


def test_sequent_json_round_trip():
    s = seq([pf("p"), pf("p & q")], [pf("[]r")])
    assert sequent_from_json(sequent_to_json(s)) == s
    l = lseq([(1, 2), (2, 3)], [(1, pf("p"))], [(3, pf("q | r"))])
    assert labelled_from_json(labelled_to_json(l)) == l
    assert render_labelled(lseq([(1, 2)], [(1, pf("p"))], [(2, pf("q"))])) \
        == "1R2, 1:p => 2:q"


def test_proof_json_round_trip_plain():
    out = prove("LK", seq([], [pf("((p -> q) -> p) -> p")]))
    assert out.proved
    doc = proof_to_json(out.proof, "LK")
    assert doc["calculus"] == "LK"
    again = proof_from_json(doc)
    assert again == out.proof
    assert validate_proof(again, "LK").ok


def test_proof_json_round_trip_labelled():
    from interpol.search import prove_labelled

    out = prove_labelled(frozenset({"refl"}), lseq([], [], [(1, pf("[]p -> p"))]))
    assert out.proved
    doc = proof_to_json(out.proof, "LG3{refl}")
    again = proof_from_json(doc)
    assert again == out.proof


FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_fixture_load_and_tags():
    calc, tree = load_fixture(str(FIXTURES / "cpc_p_or_not_r.json"))
    assert calc == "LK"
    assert isinstance(tree, SplitProofTree)
    calc2, tree2 = load_fixture(str(FIXTURES / "db_boxq.json"))
    assert calc2 == "LG3{serial,symm}"
    assert isinstance(tree2, LabelledSplitProof)
    # fresh labels are recovered from the premise/conclusion label difference
    fresh = [n.fresh for n in tree2.nodes() if n.fresh]
    assert fresh


def test_fixture_errors():
    with pytest.raises(FixtureError):
        proof_from_json({"rule": "id"})
    # a missing file is an OS problem, not a malformed fixture
    with pytest.raises(FileNotFoundError):
        load_fixture("fixtures/does_not_exist.json")


def test_fixture_rejects_garbage_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"calculus": "LK", "rule": "id"}))
    with pytest.raises(FixtureError):
        load_fixture(str(bad))
