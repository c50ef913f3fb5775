"""Command-line behavior: exit codes, JSON output, replay round trips."""

import json
from pathlib import Path

import pytest

from interpol import cli
from interpol import kripke
from interpol.search import prove
from interpol.sequents import seq
from interpol.syntax import parse_formula as pf

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prove_exit_codes(capsys):
    code, out, _ = run(capsys, "prove", "--logic", "T", "[]p -> p")
    assert code == 0
    assert "proved" in out

    code, out, _ = run(capsys, "prove", "--logic", "K", "[]p -> p")
    assert code == 1
    assert "countermodel" in out

    code, _, err = run(capsys, "prove", "--logic", "NOPE", "p")
    assert code == 2
    assert "unknown logic" in err


def test_prove_sequent_goal(capsys):
    code, out, _ = run(capsys, "prove", "--logic", "CPC", "p, p -> q => q")
    assert code == 0


def test_prove_budget_exit(capsys):
    code, out, _ = run(capsys, "prove", "--logic", "CPC", "--budget-nodes", "1",
                       "((p & q) | (~r & s)) -> (t | p | q | ~r)")
    assert code == 3
    assert "budget" in out


def test_prove_json_payload(capsys):
    code, out, _ = run(capsys, "prove", "--json", "--logic", "K",
                       "[](p -> q) -> ([]p -> []q)")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "proved"
    assert doc["calculus"] == "G3K"


def test_interpolate_paper_pair(capsys):
    code, out, _ = run(capsys, "interpolate", "--logic", "CPC", "--mode",
                       "lyndon", "(p & q) | (~r & s)", "t | p | q | ~r")
    assert code == 0
    assert "interpolant: p | ~r" in out
    assert "verified: yes" in out


def test_interpolate_negative(capsys):
    code, out, _ = run(capsys, "interpolate", "--logic", "CPC", "p", "q")
    assert code == 1
    assert "not provable" in out


def test_interpolate_labelled_method(capsys):
    code, out, _ = run(capsys, "interpolate", "--logic", "S5", "--method",
                       "labelled", "<>p & q", "[]<>p | r")
    assert code == 0
    assert "multiformula:" in out
    # CPC has no frame presentation to hand to the labelled engine
    code, _, err = run(capsys, "interpolate", "--logic", "CPC", "--method",
                       "labelled", "p", "p | q")
    assert code == 2


def test_interpolate_json_replays_byte_identically(capsys, tmp_path):
    for argv in (
        ["interpolate", "--json", "--logic", "CPC", "--mode", "lyndon",
         "(p & q) | (~r & s)", "t | p | q | ~r"],
        ["interpolate", "--json", "--logic", "D", "[](p & q)", "<>p | r"],
        ["interpolate", "--json", "--logic", "S5", "--method", "labelled",
         "[][](p & []q)", "[](q | r)"],
    ):
        code = cli.run(argv)
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        f = tmp_path / "result.json"
        f.write_text(json.dumps(doc))
        code2 = cli.run(["replay", str(f)])
        out2 = capsys.readouterr().out
        assert code2 == 0, out2
        assert f"interpolant: {doc['interpolant']}" in out2
        assert "matches expectation" in out2


def test_uniform_command(capsys):
    code, out, _ = run(capsys, "uniform", "--logic", "K", "--var", "p",
                       "--dir", "forall", "[]p|[]~p")
    assert code == 0
    assert "[]bot | []bot" in out
    assert "verified: yes" in out


def test_uniform_trace_and_json(capsys):
    code, out, _ = run(capsys, "uniform", "--json", "--logic", "K", "--var",
                       "p", "--trace", "[]p | []~p")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "[]bot | []bot"
    assert doc["trace"][-1]["sequent"] == "=> []p | []~p"
    code2, _, err = run(capsys, "uniform", "--logic", "S4", "--var", "p", "[]p")
    assert code2 == 2


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "--logic", "CPC",
                       "--phi", "(p & q) | (~r & s)", "--theta", "p | ~r",
                       "--psi", "t | p | q | ~r", "--mode", "lyndon")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--logic", "CPC",
                       "--phi", "p", "--theta", "q", "--psi", "p")
    assert code == 1
    assert "FAIL" in out


def test_check_rules_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "check-rules", "LK")
    assert code == 0
    assert "semi-analytic" in out

    code, _, _ = run(capsys, "check-rules", "LK+cut")
    assert code == 1

    f = tmp_path / "table.rules"
    f.write_text("rule: ax\nconclusion: G1, p, ~p => D1\n")
    code, out, _ = run(capsys, "check-rules", str(f))
    assert code == 0

    code, _, err = run(capsys, "check-rules", str(tmp_path / "missing.rules"))
    assert code == 2

    bad = tmp_path / "bad.rules"
    bad.write_text("rule: x\nconclusion: p && =>\n")
    code, _, err = run(capsys, "check-rules", str(bad))
    assert code == 2


def test_check_rules_json_stable(capsys):
    code1 = cli.run(["check-rules", "--json", "K"])
    first = capsys.readouterr().out
    code2 = cli.run(["check-rules", "--json", "K"])
    second = capsys.readouterr().out
    assert code1 == code2 == 0
    assert first == second
    doc = json.loads(first)
    assert doc["semi_analytic"] is True


def test_replay_fixtures(capsys):
    code, out, _ = run(capsys, "replay", str(FIXTURES / "cpc_p_or_not_r.json"))
    assert code == 0
    assert "interpolant: p | ~r" in out
    assert "matches expectation" in out

    code, out, _ = run(capsys, "replay", str(FIXTURES / "db_boxq.json"))
    assert code == 0
    assert "multiformula: 1:[]q ⩖ 1:bot" in out


def test_replay_expectation_mismatch(capsys, tmp_path):
    doc = json.loads((FIXTURES / "cpc_p_or_not_r.json").read_text())
    doc["expected"]["interpolant"] = "q"
    f = tmp_path / "tampered.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "replay", str(f))
    assert code == 1
    assert "expected" in out


def test_replay_rejects_corrupt_proof(capsys, tmp_path):
    doc = json.loads((FIXTURES / "cpc_p_or_not_r.json").read_text())
    doc["rule"] = "andR"
    f = tmp_path / "corrupt.json"
    f.write_text(json.dumps(doc))
    code, _, err = run(capsys, "replay", str(f))
    assert code == 2
    assert "validate" in err


def test_batch_runs_in_order_with_worst_exit(capsys, tmp_path):
    f = tmp_path / "goals.txt"
    f.write_text("'[]p -> p'\n'p -> p'\n'[](p -> q) -> ([]p -> []q)'\n")
    code, out, _ = run(capsys, "prove", "--logic", "K", "--batch", str(f))
    assert code == 1
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert len(lines) == 3
    assert "not provable" in lines[0]
    assert "proved" in lines[1]
    assert "proved" in lines[2]


def test_batch_interpolate_pairs(capsys, tmp_path):
    f = tmp_path / "pairs.txt"
    f.write_text("'p & q' 'p | r'\n'[](p & q)' '[]p | r'\n")
    code, out, _ = run(capsys, "interpolate", "--logic", "K", "--batch", str(f))
    assert code == 0
    assert out.count("interpolant:") == 2


def test_seed_flag_reaches_the_sampler(capsys):
    old = kripke.SAMPLE_SEED
    try:
        code, _, _ = run(capsys, "prove", "--seed", "99", "--logic", "CPC",
                         "p -> p")
        assert code == 0
        assert kripke.SAMPLE_SEED == 99
    finally:
        kripke.set_sample_seed(old)


def test_missing_positionals(capsys):
    code, _, err = run(capsys, "interpolate", "--logic", "CPC", "p")
    assert code == 2
    assert "positional" in err


def test_parse_error_is_usage(capsys):
    code, _, err = run(capsys, "prove", "--logic", "CPC", "p &")
    assert code == 2
    assert "byte" in err
