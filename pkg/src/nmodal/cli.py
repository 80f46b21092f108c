"""Command-line front end: ``nmodal <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import List, Optional

from .config import Budgets, BudgetExceeded
from .formula import CorpusTooLarge, ParseError, enumerate_corpus, parse, to_text
from .hilbert import HILBERT_SYSTEMS, check_proof, proof_from_json, search_proof
from .kripke import FRAME_CLASSES, kripke_check
from .levels import compute_levels, default_fragment
from .matrices import SYSTEMS, UnknownSystem, matrix_for, render_table, table_json
from .restrictions import UnknownAxiom
from .runner import (
    NMATRIX, RN, ResultRecord, RunConfig, compare_engines, evaluate, replay_record,
    run_corpus, write_records,
)


def _budget_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("budgets (defaults come from NMODAL_* environment variables)")
    g.add_argument("--max-free-bits", type=int)
    g.add_argument("--fragment-depth", type=int)
    g.add_argument("--bridge-width", type=int)


def _budgets(args) -> Budgets:
    b = Budgets.from_env()
    for name in ("max_free_bits", "fragment_depth", "bridge_width", "proof_depth", "max_worlds"):
        value = getattr(args, name, None)
        if value is not None:
            b = replace(b, **{name: value})
    return b


def _system_args(p: argparse.ArgumentParser):
    p.add_argument("--system", default="M", help=f"one of {', '.join(SYSTEMS)}")
    p.add_argument("--semantics", choices=(NMATRIX, RN), default=NMATRIX)
    p.add_argument("--axioms", default="", help="comma-separated restriction names (rn semantics)")
    p.add_argument("--rule", choices=("N",), help="add the necessitation rule (level valuations)")
    _budget_args(p)


def _config(args, output=None) -> RunConfig:
    axioms = tuple(a for a in args.axioms.split(",") if a)
    return RunConfig(args.system, args.semantics, axioms, args.rule == "N", _budgets(args), output)


def _emit(args, data, text: str):
    print(json.dumps(data, indent=2) if args.json else text)


# --------------------------------------------------------------- commands

def cmd_table(args) -> int:
    m = matrix_for(args.system)
    print(table_json(m) if args.json else render_table(m))
    return 0


def cmd_check(args) -> int:
    cfg = _config(args)
    sig = cfg.signature
    goal = parse(args.formula, sig)
    premises = [parse(p, sig) for p in args.premise]
    verdict = evaluate(cfg, goal, premises)
    lines = [f"{cfg.label}: {verdict.status}"]
    if verdict.witness is not None:
        lines.append(str(verdict.witness))
    if "fragment" in verdict.info:
        lines.append(f"fragment: {len(verdict.info['fragment']['formulas'])} formulas, "
                     f"{verdict.info['levels']} level(s)")
    _emit(args, dict(verdict.to_json(), system=cfg.label), "\n".join(lines))
    return 0


def cmd_levels(args) -> int:
    cfg = _config(args)
    goal = parse(args.formula, cfg.signature)
    frag = default_fragment(cfg.engine(), goal, cfg.budgets)
    trace = compute_levels(cfg.engine(), frag, args.max_levels, max_free_bits=cfg.budgets.max_free_bits)
    _emit(args, trace.to_json(), trace.summary())
    return 0


def cmd_prove(args) -> int:
    goal = parse(args.goal)
    proof = search_proof(args.system, goal, args.depth)
    if proof is None:
        _emit(args, {"found": False}, f"no proof within {args.depth} lines")
    else:
        _emit(args, {"found": True, "proof": proof.to_json()}, str(proof))
    return 0


def cmd_check_proof(args) -> int:
    with open(args.file) as fh:
        proof = proof_from_json(fh.read())
    premises = [parse(p) for p in args.premise]
    goal = parse(args.goal) if args.goal else None
    report = check_proof(args.system, proof, premises, goal)
    _emit(args, {"ok": report.ok, "line": report.line, "reason": report.reason}, str(report))
    return 0


def cmd_kripke(args) -> int:
    goal = parse(args.formula)
    verdict = kripke_check(args.frames, goal, args.max_worlds)
    text = verdict.status if verdict.witness is None else f"{verdict.status}\n{verdict.witness}"
    _emit(args, verdict.to_json(), text)
    return 0


def cmd_corpus(args) -> int:
    cfg = _config(args, args.output)
    if args.replay:
        return _replay(cfg, args.replay)
    if args.input:
        with open(args.input) as fh:
            source = fh.readlines()
    else:
        variables = args.vars.split(",")
        source = [to_text(f) for f in enumerate_corpus(
            variables, args.max_connectives, cfg.signature, cfg.budgets.corpus_cap)]
    records = run_corpus(cfg, source, args.jobs)
    if args.output:
        with open(args.output, "a") as out:
            n = write_records(records, out)
        print(f"{n} records appended to {args.output}", file=sys.stderr)
    else:
        write_records(records, sys.stdout)
    return 0


def _replay(cfg: RunConfig, path: str) -> int:
    checked = failed = 0
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = ResultRecord.from_json(line)
            if rec.witness is None:
                continue
            checked += 1
            problems = replay_record(rec, cfg)
            if problems:
                failed += 1
                print(f"{rec.formula}: {'; '.join(problems)}")
    print(f"replayed {checked} witnesses, {failed} failed")
    return 1 if failed else 0


def cmd_compare(args) -> int:
    cfg = _config(args)
    if args.input:
        with open(args.input) as fh:
            corpus = [s.strip() for s in fh if s.strip()]
    else:
        corpus = list(enumerate_corpus(args.vars.split(","), args.max_connectives, cfg.signature,
                                       cfg.budgets.corpus_cap))
    report = compare_engines(cfg, corpus)
    text = (f"{report.system}: {report.checked} formulas, "
            f"{len(report.disagreements)} disagreement(s), {len(report.errors)} error(s)")
    for d in report.disagreements:
        text += f"\n  {d.formula}: nmatrix {d.nmatrix}, rn {d.rn}"
    _emit(args, report.to_json(), text)
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nmodal", description="Nmatrix semantics for modal logics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="print the truth tables of a system")
    p.add_argument("--system", default="M", choices=SYSTEMS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check", help="decide validity or consequence")
    _system_args(p)
    p.add_argument("--premise", action="append", default=[])
    p.add_argument("--formula", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("levels", help="show the level-valuation trace on the default fragment")
    _system_args(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--max-levels", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("prove", help="bounded Hilbert proof search")
    p.add_argument("--system", default="H", choices=tuple(HILBERT_SYSTEMS))
    p.add_argument("--goal", required=True)
    p.add_argument("--depth", type=int, default=Budgets.from_env().proof_depth)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check-proof", help="check a proof given as JSON")
    p.add_argument("--system", default="H", choices=tuple(HILBERT_SYSTEMS))
    p.add_argument("--file", required=True)
    p.add_argument("--premise", action="append", default=[])
    p.add_argument("--goal")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("kripke", help="bounded Kripke countermodel search")
    p.add_argument("--frames", default="all", choices=FRAME_CLASSES)
    p.add_argument("--formula", required=True)
    p.add_argument("--max-worlds", type=int, default=Budgets.from_env().max_worlds)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kripke)

    p = sub.add_parser("corpus", help="run a corpus, one JSON record per line")
    _system_args(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", help="file with one formula per line")
    src.add_argument("--replay", help="re-check the witnesses of an earlier output file")
    p.add_argument("--vars", default="p,q")
    p.add_argument("--max-connectives", type=int, default=2)
    p.add_argument("--output", help="append records to this file instead of stdout")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("compare", help="Nmatrix against RNmatrix verdicts")
    _system_args(p)
    p.add_argument("--input")
    p.add_argument("--vars", default="p,q")
    p.add_argument("--max-connectives", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UnknownSystem, UnknownAxiom, CorpusTooLarge, BudgetExceeded, ValueError,
            OSError) as exc:
        print(f"nmodal: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
