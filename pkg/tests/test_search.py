"""Backward proof search across the calculus families."""

import pytest
from hypothesis import given, settings

from conftest import formula_strategy
from interpol.calculi import validate_proof
from interpol.kripke import cpc_valid, find_countermodel
from interpol.search import (
    BUDGET_EXCEEDED,
    DEFAULT_BUDGET,
    NOT_PROVABLE,
    PROVED,
    SearchBudget,
    prove,
    prove_labelled,
)
from interpol.sequents import lseq, seq
from interpol.syntax import parse_formula as pf

POSITIVE = [
    ("LK", "((p & q) | (~r & s)) -> (t | p | q | ~r)"),
    ("LK", "((p -> q) -> p) -> p"),
    ("LJ", "~~(p | ~p)"),
    ("LJ", "(p & q) -> (q & p)"),
    ("G3K", "[](p -> q) -> ([]p -> []q)"),
    ("G3K", "([]p & []q) -> [](p & q)"),
    ("G3T", "[]p -> p"),
    ("G3D", "~[]bot"),
    ("G3K4", "[]p -> [][]p"),
    ("G3S4", "[]p -> [][]p"),
    ("G3GL", "[]([]p -> p) -> []p"),
    ("GS5", "<>p -> []<>p"),
    ("GS5", "[](p -> q) -> ([]p -> []q)"),
]

NEGATIVE = [
    ("LK", "p -> q"),
    ("LJ", "p | ~p"),
    ("LJ", "((p -> q) -> p) -> p"),
    ("G3K", "[]p | []~p"),
    ("G3K", "[]p -> p"),
    ("G3T", "[]p -> [][]p"),
    ("G3D", "[]p -> p"),
    ("G3K4", "[]p -> p"),
    ("G3S4", "p -> []p"),
    ("G3GL", "[]p -> p"),
    ("GS5", "<>p -> p"),
]


@pytest.mark.parametrize("calc,text", POSITIVE)
def test_positive_goals_prove_and_validate(calc, text):
    out = prove(calc, seq([], [pf(text)]))
    assert out.status == PROVED
    assert out.proved
    assert validate_proof(out.proof, calc).ok


@pytest.mark.parametrize("calc,text", NEGATIVE)
def test_negative_goals_are_definitive(calc, text):
    out = prove(calc, seq([], [pf(text)]))
    assert out.status == NOT_PROVABLE, (out.status, out.detail)
    assert out.proof is None


def test_classical_negatives_carry_countermodels():
    out = prove("LK", seq([pf("p")], [pf("q")]))
    assert out.status == NOT_PROVABLE
    assert out.certificate is not None
    assert "valuation" in out.certificate

    out2 = prove("G3K", seq([], [pf("[]p | []~p")]))
    assert out2.certificate is not None
    assert out2.certificate["worlds"] >= 2


def test_lj_negative_without_classical_countermodel():
    # classically valid, intuitionistically not: the exhausted search space
    # is the evidence and no countermodel can be attached
    out = prove("LJ", seq([], [pf("p | ~p")]))
    assert out.status == NOT_PROVABLE
    assert out.certificate is None


def test_s5_needs_the_cut_phase():
    out = prove("GS5", seq([], [pf("p -> []<>p")]))
    assert out.proved
    assert validate_proof(out.proof, "GS5").ok


def test_budget_exhaustion_is_reported():
    tiny = SearchBudget(max_depth=2, max_nodes=4)
    out = prove("LK", seq([], [pf("((p & q) | (~r & s)) -> (t | p | q | ~r)")]),
                tiny)
    assert out.status == BUDGET_EXCEEDED
    assert "limit" in out.detail


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(max_depth=0)
    with pytest.raises(ValueError):
        SearchBudget(max_nodes=-1)
    assert DEFAULT_BUDGET.max_labels == 24


def test_labelled_positive_and_negative():
    out = prove_labelled(frozenset({"serial", "symm"}),
                         lseq([], [], [(1, pf("[][](p & []q) -> [](q | r)"))]))
    assert out.proved
    neg = prove_labelled(frozenset({"serial", "symm"}),
                         lseq([], [(1, pf("[]q"))], [(1, pf("q"))]))
    assert neg.status == NOT_PROVABLE
    assert neg.certificate is not None


def test_labelled_label_budget():
    out = prove_labelled(frozenset({"serial"}),
                         lseq([], [], [(1, pf("<><><><>p"))]),
                         SearchBudget(max_labels=2))
    assert out.status == BUDGET_EXCEEDED


def test_plain_goal_accepted_by_labelled_calculus():
    from interpol.calculi import lg3

    out = prove(lg3("refl"), seq([], [pf("[]p -> p")]))
    assert out.proved


def test_unlabelled_calculus_rejects_labelled_goal():
    with pytest.raises(TypeError):
        prove("LK", lseq([], [], [(1, pf("p"))]))


@given(formula_strategy(modal=False, max_leaves=10))
@settings(max_examples=120, deadline=None)
def test_lk_agrees_with_truth_tables(f):
    out = prove("LK", seq([], [f]))
    assert out.proved == cpc_valid(f)
    if out.proved:
        assert validate_proof(out.proof, "LK").ok


@given(formula_strategy(atoms=("p", "q"), max_leaves=6))
@settings(max_examples=60, deadline=None)
def test_g3k_agrees_with_bounded_countermodels(f):
    out = prove("G3K", seq([], [f]))
    assert out.status != BUDGET_EXCEEDED
    search = find_countermodel(frozenset(), f, 3)
    if search.found:
        assert out.status == NOT_PROVABLE
    if out.proved:
        assert not search.found
