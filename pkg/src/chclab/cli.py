"""Command-line front end.

Subcommands: ``solve`` (abstract analyses, JSON or text reports),
``oracle`` (finite-universe reference semantics), ``trees``
(derivation-tree checks), ``qa`` (print the query-answer transform) and
``check`` (verify a model file against a system).

Exit codes: 0 success/SAFE, 1 failed check, 2 bad input, 3 resource cap
exceeded, 10 UNKNOWN verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .concrete import (
    check_combined_closure,
    goal_atoms,
    lfp_backward_rel,
    lfp_combined_rel,
    lfp_forward_rel,
    ground_relation,
)
from .linlogic import ResourceLimitError
from .parser import ParseError, parse_model, parse_system
from .qa import qa_iterated, qa_transform, qa_two_step
from .solver import (
    AnalysisConfig,
    alternate,
    check_model,
    goal_disjoint,
)
from .syntax import format_formula, format_model, format_system
from .trees import check_tree_props

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_UNKNOWN = 10


def _read_system(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise SystemExit2(f"cannot read {path}: {exc.strerror or exc}")
    try:
        return parse_system(text)
    except ParseError as exc:
        raise SystemExit2(f"{path}:{exc}")


class SystemExit2(Exception):
    """Input-level failure; maps to exit code 2."""


def _config_from_args(args) -> AnalysisConfig:
    return AnalysisConfig(
        max_rounds=args.max_rounds,
        widening_delay=args.widen_delay,
        descending_passes=args.descending_passes,
        start_direction={"fwd": "forward", "bwd": "backward"}[args.start],
        coarse_first=args.coarse_first,
    )


def _element_digest(elem) -> dict:
    return {name: str(box) for name, box in elem.items}


def cmd_solve(args) -> int:
    system = _read_system(args.file)
    config = _config_from_args(args)
    started = time.monotonic()
    if args.mode == "fwd":
        trace, verdict = alternate(
            system, config=AnalysisConfig(
                max_rounds=1,
                widening_delay=config.widening_delay,
                descending_passes=config.descending_passes,
            )
        )
        step_laws_ok = trace.certified
    elif args.mode == "alt":
        trace, verdict = alternate(system, config=config)
        step_laws_ok = trace.certified
    elif args.mode == "qa2":
        _, verdict = qa_two_step(system, config=config)
        trace = None
        step_laws_ok = None
    else:  # qa-iter
        trace, verdict = qa_iterated(system, config=config)
        step_laws_ok = trace.certified
    wall_ms = int((time.monotonic() - started) * 1000)

    model = verdict.witness.as_dict()
    model_ok = check_model(system, model)
    disjoint = goal_disjoint(system, model)
    report = {
        "schema": 1,
        "file": args.file,
        "mode": args.mode,
        "verdict": verdict.status,
        "rounds": verdict.rounds_used,
        "model": {name: format_formula(f) for name, f in model.items()},
        "certs": {
            "step_laws": step_laws_ok,
            "model_check": model_ok.ok,
            "goal_disjoint": disjoint,
        },
        "stats": {
            "preds": len(system.decls),
            "clauses": len(system.clauses),
            "wall_ms": wall_ms,
        },
    }
    if trace is not None:
        report["trace"] = [
            {"d": _element_digest(d)} if b is None else {"d": _element_digest(d), "b": _element_digest(b)}
            for d, b in _trace_pairs(trace)
        ]

    if args.json is not None:
        payload = json.dumps(report, sort_keys=True, separators=(",", ":"))
        if args.json == "-":
            print(payload)
        else:
            with open(args.json, "w", encoding="utf-8") as handle:
                handle.write(payload + "\n")
    else:
        print(f"{verdict.status} after {verdict.rounds_used} round(s)")
        certs = report["certs"]
        print(
            "certs: step_laws={step_laws} model_check={model_check} "
            "goal_disjoint={goal_disjoint}".format(**certs)
        )
        print(format_model(model, system), end="")
    if args.model_out:
        with open(args.model_out, "w", encoding="utf-8") as handle:
            handle.write(format_model(model, system))
    return EXIT_OK if verdict.status == "SAFE" else EXIT_UNKNOWN


def _trace_pairs(trace):
    for i, d in enumerate(trace.ds, start=1):
        yield d, (trace.bs[i] if i < len(trace.bs) else None)


def cmd_oracle(args) -> int:
    system = _read_system(args.file)
    if system.universe is None:
        raise SystemExit2(f"{args.file}: oracle needs a universe declaration")
    rel = ground_relation(system)
    goal = goal_atoms(system)
    if args.semantics == "fwd":
        atoms = lfp_forward_rel(rel)
    elif args.semantics == "bwd":
        atoms = lfp_backward_rel(rel, goal)
    else:
        atoms = lfp_combined_rel(rel, goal)
    for atom in sorted(atoms, key=lambda a: a.key()):
        print(atom)
    if args.check_closure:
        ok = check_combined_closure(system)
        print("closure", "PASS" if ok else "FAIL")
        if not ok:
            return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_trees(args) -> int:
    system = _read_system(args.file)
    if system.universe is None:
        raise SystemExit2(f"{args.file}: tree enumeration needs a universe declaration")
    report = check_tree_props(system, depth_cap=args.depth)
    if args.check_props:
        for name, verdict in report.verdicts.items():
            print(name, verdict)
    print(f"forward trees: {report.forward_count} (stable depth {report.forward_depth})")
    print(f"backward trees: {report.backward_count} (stable depth {report.backward_depth})")
    if args.check_props and not report.all_ok:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_qa(args) -> int:
    system = _read_system(args.file)
    print(format_system(qa_transform(system).system), end="")
    return EXIT_OK


def cmd_check(args) -> int:
    system = _read_system(args.file)
    try:
        with open(args.model, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise SystemExit2(f"cannot read {args.model}: {exc.strerror or exc}")
    try:
        model = parse_model(text, system)
    except ParseError as exc:
        raise SystemExit2(f"{args.model}:{exc}")
    result = check_model(system, model)
    if result.ok:
        print("PASS: model satisfies every clause")
        return EXIT_OK
    print(f"FAIL: {len(result.violations)} clause(s) violated")
    for idx, clause, witness in result.violations:
        print(f"  clause {idx}: {clause}")
        print(f"    witness: {witness}")
    return EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chclab",
        description="Analyze constrained Horn clause systems over linear rational arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run an abstract analysis")
    solve.add_argument("file")
    solve.add_argument(
        "--mode",
        choices=["fwd", "alt", "qa2", "qa-iter"],
        default="alt",
        help="fwd: single forward pass; alt: forward/backward alternation; "
        "qa2: two-phase query-answer analysis; qa-iter: transformation-based alternation",
    )
    solve.add_argument("--max-rounds", type=int, default=5)
    solve.add_argument("--widen-delay", type=int, default=2, help="joins before widening kicks in")
    solve.add_argument("--descending-passes", type=int, default=1)
    solve.add_argument("--start", choices=["fwd", "bwd"], default="fwd")
    solve.add_argument(
        "--coarse-first",
        action="store_true",
        help="seed the first backward pass from the predicate-level reachability skeleton",
    )
    solve.add_argument(
        "--json",
        metavar="PATH",
        default=None,
        help="write a machine-readable report to PATH ('-' for stdout)",
    )
    solve.add_argument("--model-out", metavar="PATH", help="write the model to a file")
    solve.set_defaults(func=cmd_solve)

    oracle = sub.add_parser("oracle", help="finite-universe reference semantics")
    oracle.add_argument("file")
    oracle.add_argument("--semantics", choices=["fwd", "bwd", "combined"], default="combined")
    oracle.add_argument(
        "--check-closure",
        action="store_true",
        help="verify the combined semantics is closed under one more alternation",
    )
    oracle.set_defaults(func=cmd_oracle)

    trees = sub.add_parser("trees", help="derivation-tree semantics checks")
    trees.add_argument("file")
    trees.add_argument("--depth", type=int, default=10, help="stabilization depth cap")
    trees.add_argument(
        "--check-props",
        action="store_true",
        help="compare tree abstractions against the ground-relation fixpoints",
    )
    trees.set_defaults(func=cmd_trees)

    qa = sub.add_parser("qa", help="print the query-answer transformed system")
    qa.add_argument("file")
    qa.set_defaults(func=cmd_qa)

    check = sub.add_parser("check", help="verify a model file against a system")
    check.add_argument("file")
    check.add_argument("model")
    check.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
