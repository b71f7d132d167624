# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import json
import math

import pytest

from eqprox.bench import (
    PASSING,
    BenchCell,
    acceptance_cells,
    oracle_equivalence,
    run_bench,
    run_cell,
)
from eqprox.proxmaps import MapKind


def _cell(suite, instance=None, lam=None):
    for cell in acceptance_cells():
        if cell.suite == suite and (instance is None or cell.instance == instance):
            if lam is None or cell.lam == lam:
                return cell
    raise AssertionError(f"no cell {suite}/{instance}/{lam}")


def test_cells():
    cells = acceptance_cells()
    ids = [c.cell_id for c in cells]
    assert len(ids) == len(set(ids)) == 21
    assert "counterexample/rotation/B/1.0" in ids
    assert ids[-1] == "oracle/random-mvi/B/-"
    assert BenchCell("x", "rotation", MapKind.T, 0.5).cell_id == "x/rotation/T/0.5"


def test_counterexample_cell_is_expected_expansion():
    result = run_cell(_cell("counterexample", lam=1.0), samples=50, seed=42)
    assert result["status"] == "expansive-as-expected"
    assert result["passed"]
    assert result["theorem_bound"] == pytest.approx(math.sqrt(2.0))
    assert result["low_confidence"]


def test_quasicontraction_cell():
    result = run_cell(_cell("quasicontraction"), samples=100, seed=42)
    assert result["status"] == "pass"
    assert result["theorem_bound"] == pytest.approx(math.sqrt(0.7))
    assert result["expansion_estimate"] <= result["theorem_bound"]


def test_stated_range_cells_never_fail():
    for lam in (1.0, 2.0):
        result = run_cell(_cell("cocoercive-stated", lam=lam), samples=100, seed=42)
        assert result["status"] in ("within-stated-range", "flagged")
        assert result["passed"]
        assert result["stated_range"] == pytest.approx([0.0, 2.0])
        assert result["derived_range"] == pytest.approx([0.0, 0.5])


def test_composite_cell():
    result = run_cell(_cell("composite"), samples=100, seed=42)
    assert result["status"] == "pass"
    assert result["expansion_estimate"] == pytest.approx(math.sqrt(1 - 0.25 + 0.0625), abs=1e-4)


def test_oracle():
    worst, draws = oracle_equivalence(20, seed=42)
    assert draws == 20
    assert worst <= 1e-8
    result = run_cell(_cell("oracle"), samples=10, seed=42)
    assert result["status"] == "pass"
    assert result["report"] is None


def test_passing_statuses():
    assert "fail" not in PASSING


def test_small_bench_passes_and_is_deterministic():
    a = run_bench(samples=30, seed=42)
    b = run_bench(samples=30, seed=42, workers=4)
    assert a["passed"], a["failing"]
    assert [c["cell"] for c in a["cells"]] == [c.cell_id for c in acceptance_cells()]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
