"""Command-line front end.

Exit codes: 0 success or verified pass, 1 logical negative (not provable,
verification failed, expectation mismatch), 2 usage or input error, 3 budget
exceeded or verification inconclusive.
"""

import argparse
import json
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor

from .syntax import Formula, ParseError, parse_formula, render_formula
from .sequents import (FixtureError, LabelledSplitProof, Sequent,
                       SplitProofTree, proof_from_json, seq)
from .calculi import parse_calculus, calculus_for_logic, validate_proof
from .search import (BUDGET_EXCEEDED, DEFAULT_BUDGET, NOT_PROVABLE, PROVED,
                     SearchBudget, prove)
from . import classify as classify_mod
from . import kripke
from .maehara import InterpolationError, interpolate
from .multiform import (extract_labelled_interpolant, interpolate_labelled,
                        mf_form, multiformula_to_json, render_multiformula)
from .pitts import UniformTask, uniform_interpolant

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class UsageError(ValueError):
    pass


def _parse_goal(text: str) -> Sequent:
    """A bare formula proves as an empty-antecedent sequent; `=>` splits a
    sequent with comma-separated halves (formulas never contain commas)."""
    if "=>" in text:
        left, right = text.split("=>", 1)
        if "=>" in right:
            raise UsageError("a sequent has exactly one =>")
        ant = [parse_formula(t) for t in left.split(",") if t.strip()]
        suc = [parse_formula(t) for t in right.split(",") if t.strip()]
        return seq(ant, suc)
    return seq([], [parse_formula(text)])


def _budget(args) -> SearchBudget:
    return SearchBudget(
        max_depth=args.budget_depth if args.budget_depth else DEFAULT_BUDGET.max_depth,
        max_nodes=args.budget_nodes if args.budget_nodes else DEFAULT_BUDGET.max_nodes,
        max_labels=args.budget_labels if args.budget_labels else DEFAULT_BUDGET.max_labels)


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


# ---------------------------------------------------------------------------
# Subcommands; each returns an exit code

def _cmd_prove(args, goal_text: str) -> int:
    calculus = parse_calculus(args.calculus) if args.calculus \
        else calculus_for_logic(args.logic)
    goal = _parse_goal(goal_text)
    outcome = prove(calculus, goal, _budget(args))
    payload = {"command": "prove", "logic": args.logic,
               "calculus": str(calculus), "status": outcome.status,
               "nodes": outcome.nodes}
    if outcome.certificate is not None:
        payload["countermodel"] = outcome.certificate
    if outcome.status == PROVED:
        _emit(args, payload, f"proved ({outcome.nodes} nodes)")
        return EXIT_OK
    if outcome.status == NOT_PROVABLE:
        human = "not provable"
        if outcome.certificate is not None:
            human += f"; countermodel: {json.dumps(outcome.certificate, sort_keys=True)}"
        _emit(args, payload, human)
        return EXIT_NEGATIVE
    payload["detail"] = outcome.detail
    _emit(args, payload, f"budget exceeded: {outcome.detail or ''}".rstrip(": "))
    return EXIT_INCONCLUSIVE


def _verification_exit(verification: dict | None) -> int:
    if verification is None:
        return EXIT_OK
    if verification.get("ok"):
        return EXIT_OK
    notes = " ".join(c.get("note", "") for c in verification.get("checks", ())
                     if not c.get("ok", True))
    if "inconclusive" in notes:
        return EXIT_INCONCLUSIVE
    return EXIT_NEGATIVE


def _checks_human(verification: dict | None) -> str:
    if not verification:
        return ""
    lines = []
    for c in verification.get("checks", ()):
        mark = "ok" if c["ok"] else "FAIL"
        note = f" ({c['note']})" if c.get("note") else ""
        lines.append(f"  {c['name']}: {mark}{note}")
    return "\n".join(lines)


def _cmd_interpolate(args, phi_text: str, psi_text: str) -> int:
    phi = parse_formula(phi_text)
    psi = parse_formula(psi_text)
    budget = _budget(args)
    verify = not args.no_verify
    if args.method == "labelled":
        from .calculi import logic_frame
        frame = logic_frame(args.logic)
        if frame is None:
            raise UsageError(
                f"logic {args.logic} has no labelled frame presentation")
        result = interpolate_labelled(frame, phi, psi, args.mode,
                                      budget=budget, logic=args.logic,
                                      verify=verify)
    else:
        calculus = parse_calculus(args.calculus) if args.calculus else None
        result = interpolate(args.logic, phi, psi, args.mode,
                             budget=budget, calculus=calculus, verify=verify)

    payload = result.to_json()
    payload["command"] = "interpolate"
    payload["phi"] = render_formula(phi)
    payload["psi"] = render_formula(psi)
    if result.status != "interpolated":
        if result.status == NOT_PROVABLE:
            human = "implication not provable; no interpolant"
            if result.search is not None and result.search.certificate:
                human += f"\ncountermodel: {json.dumps(result.search.certificate, sort_keys=True)}"
            _emit(args, payload, human)
            return EXIT_NEGATIVE
        _emit(args, payload, f"budget exceeded: {result.search.detail or ''}".rstrip(": "))
        return EXIT_INCONCLUSIVE

    human = f"interpolant: {render_formula(result.interpolant)}"
    if result.multiformula is not None:
        human += f"\nmultiformula: {render_multiformula(result.multiformula)}"
        payload["multiformula_text"] = render_multiformula(result.multiformula)
    if verify:
        human += f"\nverified: {'yes' if result.verified else 'no'}"
        checks = _checks_human(result.verification)
        if checks:
            human += "\n" + checks
    _emit(args, payload, human)
    return _verification_exit(result.verification) if verify else EXIT_OK


def _cmd_uniform(args, phi_text: str) -> int:
    if args.logic != "K":
        raise UsageError("uniform interpolation is implemented for K only")
    phi = parse_formula(phi_text)
    trace: list | None = [] if args.trace else None
    task = UniformTask(phi, args.var, args.dir)
    chi = uniform_interpolant(task, trace=trace, tie_break=args.tie_break)
    verification = None
    if not args.no_verify:
        verification = kripke.verify_uniform(args.logic, phi, args.var, chi,
                                             args.dir, budget=_budget(args))
    payload = {"command": "uniform", "logic": args.logic, "var": args.var,
               "dir": args.dir, "formula": render_formula(phi),
               "result": render_formula(chi)}
    human = f"{'A' if args.dir == 'forall' else 'E'}{args.var}. "\
            f"{render_formula(phi)} = {render_formula(chi)}"
    if verification is not None:
        payload["verified"] = verification["ok"]
        payload["checks"] = verification["checks"]
        human += f"\nverified: {'yes' if verification['ok'] else 'no'}"
        human += "\n" + _checks_human(verification)
    if trace is not None:
        payload["trace"] = trace
        human += "\n" + "\n".join(
            f"  {e['sequent']}  [{e['row']}]  {e['value']}" for e in trace)
    _emit(args, payload, human)
    return _verification_exit(verification)


def _cmd_verify(args) -> int:
    phi = parse_formula(args.phi)
    theta = parse_formula(args.theta)
    psi = parse_formula(args.psi)
    report = kripke.verify_craig(args.logic, phi, theta, psi, args.mode,
                                 budget=_budget(args))
    payload = dict(report)
    payload["command"] = "verify"
    human = f"verified: {'yes' if report['ok'] else 'no'}\n" \
        + _checks_human(report)
    _emit(args, payload, human)
    return _verification_exit(report)


def _cmd_check_rules(args) -> int:
    if args.file in classify_mod.STANDARD_TABLES:
        text = classify_mod.STANDARD_TABLES[args.file]
    else:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise UsageError(str(err)) from err
    rules = classify_mod.parse_rules(text)
    report = classify_mod.assess_calculus(rules)
    if args.json:
        sys.stdout.write(classify_mod.report_to_json(report))
    else:
        sys.stdout.write(classify_mod.report_table(report))
    return EXIT_OK if report["semi_analytic"] else EXIT_NEGATIVE


def _replay_extract(doc: dict, mode: str):
    """Pull the proof node out of a fixture or result document, validate,
    extract.  Returns (payload fields, interpolant text, multiformula text)."""
    node = doc.get("proof", doc)
    calculus_name = node.get("calculus") or doc.get("calculus")
    if not calculus_name:
        raise FixtureError("fixture missing calculus field")
    calculus = parse_calculus(calculus_name)
    tree = proof_from_json(node)
    report = validate_proof(tree, calculus)
    if not report.ok:
        raise FixtureError(f"proof does not validate: {report.error}")
    if isinstance(tree, LabelledSplitProof):
        u = extract_labelled_interpolant(tree, mode,
                                         bool(doc.get("lser_box_like")))
        return calculus_name, render_formula(mf_form(u)), render_multiformula(u)
    if isinstance(tree, SplitProofTree):
        from .maehara import extract_interpolant
        theta = extract_interpolant(tree, mode, calculus_name)
        return calculus_name, render_formula(theta), None
    raise FixtureError("fixture proof carries no split annotations")


def _cmd_replay(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise UsageError(str(err)) from err
    except json.JSONDecodeError as err:
        raise FixtureError(f"not valid JSON: {err}") from err
    mode = args.mode or doc.get("mode", "craig")
    calculus_name, interpolant, multi = _replay_extract(doc, mode)
    payload = {"command": "replay", "calculus": calculus_name, "mode": mode,
               "interpolant": interpolant}
    human = f"interpolant: {interpolant}"
    if multi is not None:
        payload["multiformula"] = multi
        human += f"\nmultiformula: {multi}"

    expected = doc.get("expected")
    if expected is None and "interpolant" in doc and "proof" in doc:
        # a result document doubles as its own expectation
        expected = {"interpolant": doc["interpolant"]}
        if "multiformula_text" in doc:
            expected["multiformula"] = doc["multiformula_text"]
    if expected is not None:
        mismatches = []
        if "interpolant" in expected and expected["interpolant"] != interpolant:
            mismatches.append(
                f"interpolant: expected {expected['interpolant']!r}, got {interpolant!r}")
        if "multiformula" in expected and expected["multiformula"] != multi:
            mismatches.append(
                f"multiformula: expected {expected['multiformula']!r}, got {multi!r}")
        payload["expected"] = expected
        payload["match"] = not mismatches
        if mismatches:
            _emit(args, payload, human + "\n" + "\n".join(mismatches))
            return EXIT_NEGATIVE
        human += "\nmatches expectation"
    _emit(args, payload, human)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable output")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for sampled countermodel relations")
    common.add_argument("--budget-depth", type=int, default=None)
    common.add_argument("--budget-nodes", type=int, default=None)
    common.add_argument("--budget-labels", type=int, default=None)

    batch = argparse.ArgumentParser(add_help=False)
    batch.add_argument("--batch", metavar="FILE",
                       help="process one query per line, ordered output")

    p = argparse.ArgumentParser(
        prog="interpol",
        description="Sequent-calculus interpolation workbench")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("prove", parents=[common, batch],
                        help="backward proof search")
    sp.add_argument("--logic", default="CPC")
    sp.add_argument("--calculus", default=None)
    sp.add_argument("goal", nargs="?", help="formula or sequent `G => D`")

    si = sub.add_parser("interpolate", parents=[common, batch],
                        help="compute and verify an interpolant")
    si.add_argument("--logic", default="CPC")
    si.add_argument("--calculus", default=None)
    si.add_argument("--mode", choices=("craig", "lyndon"), default="craig")
    si.add_argument("--method", choices=("maehara", "labelled"),
                    default="maehara")
    si.add_argument("--no-verify", action="store_true")
    si.add_argument("phi", nargs="?")
    si.add_argument("psi", nargs="?")

    su = sub.add_parser("uniform", parents=[common, batch],
                        help="uniform interpolant by proof-search recursion")
    su.add_argument("--logic", default="K")
    su.add_argument("--var", required=True)
    su.add_argument("--dir", choices=("forall", "exists"), default="forall")
    su.add_argument("--trace", action="store_true")
    su.add_argument("--tie-break", choices=("leftmost", "rightmost"),
                    default="leftmost")
    su.add_argument("--no-verify", action="store_true")
    su.add_argument("formula", nargs="?")

    sv = sub.add_parser("verify", parents=[common],
                        help="check an interpolation claim independently")
    sv.add_argument("--logic", required=True)
    sv.add_argument("--phi", required=True)
    sv.add_argument("--theta", required=True)
    sv.add_argument("--psi", required=True)
    sv.add_argument("--mode", choices=("craig", "lyndon"), default="craig")

    sc = sub.add_parser("check-rules", parents=[common],
                        help="classify a rule table against the "
                             "semi-analytic shape")
    sc.add_argument("file", help="DSL file or stock table name "
                                 f"({', '.join(sorted(classify_mod.STANDARD_TABLES))})")

    sr = sub.add_parser("replay", parents=[common],
                        help="re-extract an interpolant from a stored proof")
    sr.add_argument("--mode", choices=("craig", "lyndon"), default=None)
    sr.add_argument("file")
    return p


def _positionals(args) -> list:
    if args.command == "prove":
        return [args.goal]
    if args.command == "interpolate":
        return [args.phi, args.psi]
    if args.command == "uniform":
        return [args.formula]
    return []


_DISPATCH = {
    "prove": _cmd_prove,
    "interpolate": _cmd_interpolate,
    "uniform": _cmd_uniform,
}


def _run_single(args) -> int:
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "check-rules":
        return _cmd_check_rules(args)
    if args.command == "replay":
        return _cmd_replay(args)
    handler = _DISPATCH[args.command]
    fields = _positionals(args)
    if any(f is None for f in fields):
        raise UsageError(f"{args.command} needs "
                         f"{len(fields)} positional argument(s)")
    return handler(args, *fields)


def _run_batch(args) -> int:
    try:
        with open(args.batch, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as err:
        raise UsageError(str(err)) from err
    handler = _DISPATCH[args.command]
    want = len(_positionals(args))

    def one(line: str) -> tuple[int, str]:
        fields = shlex.split(line)
        if len(fields) != want:
            raise UsageError(
                f"batch line needs {want} field(s): {line!r}")
        import io
        from contextlib import redirect_stdout
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = handler(args, *fields)
        return code, buf.getvalue()

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(one, lines))
    severity = {EXIT_OK: 0, EXIT_NEGATIVE: 1, EXIT_INCONCLUSIVE: 2,
                EXIT_USAGE: 3}
    worst = EXIT_OK
    for code, text in results:
        sys.stdout.write(text)
        if severity[code] > severity[worst]:
            worst = code
    return worst


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        kripke.set_sample_seed(args.seed)
    try:
        if getattr(args, "batch", None):
            return _run_batch(args)
        return _run_single(args)
    except (ParseError, ValueError, InterpolationError) as err:
        # covers UsageError, FixtureError, and rule-table syntax errors too
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(argv=None))
