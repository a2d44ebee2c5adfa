"""Command-line interface: subcommands, exit codes, report format."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from chclab.cli import main
from conftest import CORPUS

LADDER = str(CORPUS / "ladder.chc")
ADDITION_LOOPS = str(CORPUS / "addition_loops.chc")
NO_INIT = str(CORPUS / "no_init.chc")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- solve ---------------------------------------------------------------------


def test_solve_alt_safe(capsys):
    code, out, _ = run(capsys, "solve", ADDITION_LOOPS, "--mode", "alt")
    assert code == 0
    assert out.startswith("SAFE after 2 round(s)")
    assert "step_laws=True" in out and "goal_disjoint=True" in out


def test_solve_fwd_unknown(capsys):
    code, out, _ = run(capsys, "solve", ADDITION_LOOPS, "--mode", "fwd")
    assert code == 10
    assert out.startswith("UNKNOWN")


def test_solve_modes_cover_qa(capsys):
    code, _, _ = run(capsys, "solve", ADDITION_LOOPS, "--mode", "qa2")
    assert code == 10
    code, out, _ = run(capsys, "solve", ADDITION_LOOPS, "--mode", "qa-iter")
    assert code == 0 and "SAFE" in out


def test_solve_flags_accepted(capsys):
    code, _, _ = run(
        capsys,
        "solve",
        ADDITION_LOOPS,
        "--max-rounds", "7",
        "--widen-delay", "3",
        "--start", "bwd",
        "--coarse-first",
    )
    assert code == 0


def test_json_report_shape_and_determinism(capsys):
    argv = ("solve", LADDER, "--mode", "alt", "--json", "-")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 10
    r1, r2 = json.loads(out1), json.loads(out2)
    assert r1["schema"] == 1
    assert r1["verdict"] == "UNKNOWN"
    assert set(r1["certs"]) == {"step_laws", "model_check", "goal_disjoint"}
    assert set(r1["stats"]) == {"preds", "clauses", "wall_ms"}
    assert r1["model"].keys() == {"p", "false"}
    for r in (r1, r2):
        r["stats"].pop("wall_ms")
    assert r1 == r2


def test_json_to_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "solve", ADDITION_LOOPS, "--json", str(target))
    assert code == 0 and out == ""
    report = json.loads(target.read_text())
    assert report["verdict"] == "SAFE" and report["rounds"] == 2


def test_model_out_round_trips_through_check(tmp_path, capsys):
    model = tmp_path / "addition_loops.model"
    code, _, _ = run(capsys, "solve", ADDITION_LOOPS, "--model-out", str(model))
    assert code == 0
    code, out, _ = run(capsys, "check", ADDITION_LOOPS, str(model))
    assert code == 0 and out.startswith("PASS")


def test_check_reports_violations(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("model p1 : true.\nmodel p2 : true.\nmodel false : false.\n")
    code, out, _ = run(capsys, "check", ADDITION_LOOPS, str(bad))
    assert code == 1
    assert out.startswith("FAIL") and "witness" in out


# -- oracle ---------------------------------------------------------------------


def test_oracle_semantics(capsys):
    code, out, _ = run(capsys, "oracle", LADDER, "--semantics", "fwd")
    assert code == 0
    assert out.splitlines() == ["p(1)", "p(2)", "p(3)", "p(5)"]
    _, out, _ = run(capsys, "oracle", LADDER, "--semantics", "bwd")
    assert out.splitlines() == ["p(1)", "p(2)", "p(3)", "p(4)", "p(5)"]
    _, out, _ = run(capsys, "oracle", LADDER, "--semantics", "combined")
    assert out.splitlines() == ["p(1)", "p(3)", "p(5)"]


def test_oracle_closure_check(capsys):
    code, out, _ = run(capsys, "oracle", LADDER, "--check-closure")
    assert code == 0
    assert out.splitlines()[-1] == "closure PASS"


def test_oracle_needs_universe(capsys):
    code, _, err = run(capsys, "oracle", ADDITION_LOOPS)
    assert code == 2 and "universe" in err


# -- trees ----------------------------------------------------------------------


def test_trees_check_props(capsys):
    code, out, _ = run(capsys, "trees", LADDER, "--depth", "6", "--check-props")
    assert code == 0
    lines = out.splitlines()
    assert lines[:3] == ["forward PASS", "backward PASS", "combined PASS"]
    assert lines[3].startswith("forward trees: 4")


def test_trees_counts_only_by_default(capsys):
    code, out, _ = run(capsys, "trees", LADDER, "--depth", "6")
    assert code == 0
    assert "PASS" not in out and out.startswith("forward trees:")


# -- qa -------------------------------------------------------------------------


def test_qa_prints_parseable_system(capsys, tmp_path):
    code, out, _ = run(capsys, "qa", ADDITION_LOOPS)
    assert code == 0
    qa_file = tmp_path / "addition_loops_qa.chc"
    qa_file.write_text(out)
    code, _, _ = run(capsys, "solve", str(qa_file), "--mode", "fwd")
    assert code == 10  # parses and analyzes; verdict is not the point


# -- failure modes ----------------------------------------------------------------


def test_missing_file(capsys):
    code, _, err = run(capsys, "solve", "/nonexistent.chc")
    assert code == 2 and "cannot read" in err


def test_parse_error_position(tmp_path, capsys):
    bad = tmp_path / "bad.chc"
    bad.write_text("pred p/1.\np(X :- X = 0.\n")
    code, _, err = run(capsys, "solve", str(bad))
    assert code == 2 and "2:" in err


def test_resource_limit(tmp_path, capsys):
    blow = tmp_path / "blow.chc"
    body = ", ".join(f"V{i} != {i}" for i in range(13))
    blow.write_text(f"pred p/1.\np(X) :- {body}, X = 0.\n")
    code, _, err = run(capsys, "solve", str(blow))
    assert code == 3 and "resource limit" in err


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chclab.cli", "solve", ADDITION_LOOPS, "--mode", "alt"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("SAFE")
