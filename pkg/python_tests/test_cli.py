# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import csv
import json
import math

import pytest

from eqprox import cli
from eqprox.cli import (
    EXIT_ERROR,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    EXIT_VIOLATED,
    RunConfig,
    counterexample_rows,
    main,
)
from eqprox.errors import EqproxError, SubproblemError
from eqprox.problems import builtin, dump


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_counterexample(capsys, tmp_path):
    out = tmp_path / "ce.json"
    assert main(["counterexample", "--out", str(out)]) == EXIT_OK
    table = capsys.readouterr().out
    assert "sqrt(1+l^2)" in table
    rows = json.loads(out.read_text())["rows"]
    assert [r["lambda"] for r in rows] == [0.1, 0.5, 1.0, 2.0]
    for r in rows:
        assert r["agree"]
        assert r["B_x"] == pytest.approx([1.0, r["lambda"]])
        assert r["ratio"] == pytest.approx(math.sqrt(1 + r["lambda"] ** 2))


def test_counterexample_rows_disagree_under_zero_tolerance():
    rows = counterexample_rows([0.5], tol=-1.0)
    assert rows[0]["agree"] is False


def test_solve_converges(capsys):
    code = main(["solve", "--builtin", "mvi-cocoercive", "--lambda", "0.3", "--x0", "1,1"])
    assert code == EXIT_OK
    summary = _json_out(capsys)
    assert summary["status"] == "converged"
    assert summary["problem"] == "mvi-cocoercive"
    assert summary["map"] == "B" and summary["scheme"] == "picard"
    assert summary["final_point"] == pytest.approx([0.5, -0.25], abs=1e-7)
    assert abs(summary["gap"]) <= 1e-6


def test_solve_rotation_does_not_converge(capsys):
    code = main(["solve", "--builtin", "rotation", "--x0", "1,0", "--max-iter", "20"])
    assert code == EXIT_NOT_CONVERGED
    summary = _json_out(capsys)
    assert summary["status"] == "max_iter"
    # the whole space is unbounded, so no gap is reported
    assert summary["gap"] is None
    assert summary["rate"] == pytest.approx(math.sqrt(1.25), abs=1e-6)


def test_solve_extragradient_with_trace(capsys, tmp_path):
    trace = tmp_path / "trace.csv"
    out = tmp_path / "summary.json"
    code = main(
        [
            "solve", "--builtin", "rotation", "--map", "T", "--x0", "1,0",
            "--trace", str(trace), "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    summary = json.loads(out.read_text())
    with open(trace, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == summary["iterations"] + 1


def test_solve_from_problem_file(capsys, tmp_path):
    path = tmp_path / "coco.json"
    dump(builtin("mvi-cocoercive"), path)
    code = main(["solve", "--problem", str(path), "--scheme", "km", "--lambda", "0.3"])
    assert code == EXIT_OK
    assert _json_out(capsys)["scheme"] == "km"


def test_solve_errors(capsys, tmp_path):
    assert main(["solve", "--builtin", "rotation", "--lambda", "0"]) == EXIT_ERROR
    assert "solve: lambda must be positive" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert main(["solve", "--problem", str(bad)]) == EXIT_ERROR
    assert "expected a JSON object" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve"],
        ["solve", "--builtin", "nope"],
        ["solve", "--builtin", "rotation", "--problem", "x.json"],
        ["solve", "--builtin", "rotation", "--x0", "1,a"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_check_holds(capsys):
    code = main(["check", "--builtin", "rotation", "--property", "monotone", "--samples", "200"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "holds" in out
    assert "(low confidence)" in out


def test_check_violated_writes_report(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main(
        [
            "check", "--builtin", "rotation", "--property", "expansion", "--map", "B",
            "--lambda", "1", "--samples", "100", "--seed", "5", "--out", str(out),
        ]
    )
    assert code == EXIT_VIOLATED
    report = json.loads(out.read_text())
    assert report["verdict"] == "violated"
    assert report["seed"] == 5
    assert report["estimated_modulus"] == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert report["classification"] == "epsilon-expansive"


def test_check_quasicontraction_uses_theorem_factor(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main(
        [
            "check", "--builtin", "bilinear-strong", "--property", "quasicontraction",
            "--lambda", "0.3", "--samples", "100", "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    assert json.loads(out.read_text())["details"]["rho"] == pytest.approx(math.sqrt(0.7))


def test_check_errors(capsys):
    code = main(["check", "--builtin", "rotation", "--property", "convex"])
    assert code == EXIT_ERROR
    assert "unknown property 'convex'" in capsys.readouterr().err
    code = main(["check", "--builtin", "bilinear-strong", "--property", "cocoercive"])
    assert code == EXIT_ERROR
    assert "needs an MVI bifunction" in capsys.readouterr().err


def test_check_cocoercive(capsys):
    code = main(
        ["check", "--builtin", "mvi-cocoercive", "--property", "cocoercive", "--samples", "300"]
    )
    assert code == EXIT_OK


def test_bench_reports_failing_cells(capsys, monkeypatch):
    def fake_bench(samples, seed, workers):
        assert (samples, seed, workers) == (10, 3, 2)
        return {"seed": seed, "samples": samples, "cells": [], "passed": False, "failing": ["a/b/B/0.5"]}

    monkeypatch.setattr(cli, "run_bench", fake_bench)
    code = main(["bench", "--samples", "10", "--seed", "3", "--workers", "2"])
    assert code == EXIT_VIOLATED
    captured = capsys.readouterr()
    assert json.loads(captured.out)["failing"] == ["a/b/B/0.5"]
    assert "bench: cell a/b/B/0.5 failed" in captured.err


def test_run_config_rejects_unknown_keys():
    with pytest.raises(EqproxError, match="unknown configuration keys: speed"):
        RunConfig.from_dict({"command": "solve", "speed": 1})


def test_solve_rejects_anchor_of_wrong_dimension(capsys):
    argv = ["solve", "--builtin", "rotation", "--map", "R", "--scheme", "halpern"]
    code = main(argv + ["--anchor", "1,2,3", "--max-iter", "5"])
    assert code == EXIT_ERROR
    err = capsys.readouterr().err
    assert "halpern anchor" in err
    assert "expected 2, got 3" in err


def test_solve_reports_missing_gap_when_gap_solver_fails(capsys, monkeypatch):
    def failing_gap(*args, **kwargs):
        raise SubproblemError("boom", best_residual=1.0, iterations=1)

    monkeypatch.setattr(cli, "gap_value", failing_gap)
    code = main(["solve", "--builtin", "mvi-cocoercive", "--lambda", "0.3", "--x0", "1,1"])
    assert code == EXIT_OK
    summary = _json_out(capsys)
    assert summary["status"] == "converged"
    assert summary["gap"] is None


def test_solve_describe(capsys):
    argv = ["solve", "--builtin", "mvi-cocoercive", "--lambda", "0.3"]
    assert main(argv + ["--describe"]) == EXIT_OK
    instance = _json_out(capsys)["instance"]
    assert instance["name"] == "mvi-cocoercive"
    assert "profile" in instance
    assert "lambda_recommendations" in instance
    main(argv)
    assert "instance" not in _json_out(capsys)
