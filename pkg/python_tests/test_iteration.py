# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import csv
import logging
import math
from unittest import TestCase

import numpy as np
import pytest

from pytest_utils import assert_close

from eqprox.analysis import SampleSpec, estimate_map_expansion
from eqprox.errors import DimensionMismatchError, InvalidParameterError, SubproblemError
from eqprox.iteration import (
    IterationConfig,
    Scheme,
    TraceStatus,
    estimate_rate,
    run_fixed_point,
    trace_summary,
    write_trace_csv,
)
from eqprox.problems import builtin
from eqprox.proxmaps import MapKind


def _run(name, x0, **cfg):
    p = builtin(name)
    return run_fixed_point(
        p.bifunction, p.convex_set, x0, IterationConfig(**cfg), p.known_solution
    )


class TestFixedPoint(TestCase):
    def test_picard_converges_on_cocoercive_mvi(self):
        trace = _run("mvi-cocoercive", [1.0, 1.0], lam=0.3)
        self.assertEqual(trace.final_status, TraceStatus.CONVERGED)
        self.assertLessEqual(trace.final_residual, 1e-8)
        assert_close(trace.final_point, [0.5, -0.25], atol=1e-7)
        self.assertLess(trace.records[-1].distance_to_solution, 1e-7)
        self.assertEqual(trace.records[0].k, 0)
        assert_close(trace.records[0].iterate, [1.0, 1.0], atol=0.0)

    def test_picard_diverges_on_rotation(self):
        lam = 0.5
        trace = _run("rotation", [1.0, 0.0], lam=lam, max_iterations=40)
        self.assertEqual(trace.final_status, TraceStatus.MAX_ITER)
        self.assertEqual(trace.iterations, 41)
        res = trace.residuals
        # each step multiplies the norm by √(1 + λ²)
        for a, b in zip(res, res[1:]):
            self.assertAlmostEqual(b / a, math.sqrt(1 + lam * lam), places=9)
        self.assertAlmostEqual(trace.estimated_rate, math.sqrt(1 + lam * lam), places=6)

    def test_extragradient_converges_on_rotation(self):
        trace = _run("rotation", [1.0, 0.0], lam=0.5, map_kind="T")
        self.assertEqual(trace.final_status, TraceStatus.CONVERGED)
        self.assertAlmostEqual(trace.estimated_rate, math.sqrt(1 - 0.25 + 0.0625), places=6)

    def test_km_on_resolvent(self):
        trace = _run("bilinear-strong", [1.0, 1.0], lam=0.5, map_kind=MapKind.R, scheme="km")
        self.assertEqual(trace.final_status, TraceStatus.CONVERGED)
        assert_close(trace.final_point, [0.0, 0.0], atol=1e-7)

    def test_halpern_on_resolvent(self):
        trace = _run(
            "rotation", [1.0, 0.0], lam=0.5, map_kind="R", scheme=Scheme.HALPERN,
            tol_residual=1e-2, max_iterations=1000,
        )
        self.assertEqual(trace.final_status, TraceStatus.CONVERGED)
        # the anchor slows Halpern to O(1/k)
        self.assertGreater(trace.iterations, 20)

    def test_config_validation(self):
        with self.assertRaisesRegex(InvalidParameterError, "lambda must be positive"):
            IterationConfig(lam=0.0)
        with self.assertRaisesRegex(InvalidParameterError, "km alpha"):
            IterationConfig(lam=0.5, alpha=1.5)
        with self.assertRaisesRegex(InvalidParameterError, "max_iterations"):
            IterationConfig(lam=0.5, max_iterations=0)
        with self.assertRaises(InvalidParameterError):
            IterationConfig(lam=0.5, scheme="anderson")
        with self.assertRaises(InvalidParameterError):
            IterationConfig(lam=0.5, map_kind="Z")
        self.assertEqual(IterationConfig.beta(0), 0.5)


def test_start_outside_set_is_projected(caplog):
    with caplog.at_level(logging.WARNING, logger="eqprox"):
        trace = _run("mvi-cocoercive", [5.0, -5.0], lam=0.3)
    assert trace.x_projected
    assert_close(trace.records[0].iterate, [1.0, -1.0], atol=0.0)
    assert "outside the set" in caplog.text


def test_subproblem_failure_stops_with_error(monkeypatch, caplog):
    def failing_map(*args, **kwargs):
        raise SubproblemError("boom", best_residual=1.0, iterations=3)

    monkeypatch.setattr("eqprox.iteration.evaluate_map", failing_map)
    with caplog.at_level(logging.ERROR, logger="eqprox"):
        trace = _run("mvi-cocoercive", [0.0, 0.0], lam=0.3)
    assert trace.final_status == TraceStatus.ERROR
    assert trace.iterations == 0
    assert "iteration 0" in trace.message
    assert "Here's a script to reproduce the error" in caplog.text
    assert "evaluate_map('B'" in caplog.text


def test_estimate_rate():
    assert estimate_rate([0.5**k for k in range(30)]) == pytest.approx(0.5)
    assert estimate_rate([1.0] * 9) is None
    assert estimate_rate([1.0] * 10 + [0.0] * 10) is None


def test_trace_csv(tmp_path):
    trace = _run("mvi-cocoercive", [1.0, 1.0], lam=0.3)
    path = tmp_path / "trace.csv"
    write_trace_csv(trace, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["k", "residual", "distance_to_solution", "x_0", "x_1"]
    assert len(rows) == trace.iterations + 1
    last = trace.records[-1]
    assert float(rows[-1][1]) == last.residual
    assert np.array([float(v) for v in rows[-1][3:]]).tolist() == last.iterate.tolist()


def test_trace_summary():
    trace = _run("rotation", [1.0, 0.0], lam=0.5, map_kind="T")
    summary = trace_summary(trace, gap=None)
    assert summary["status"] == "converged"
    assert summary["iterations"] == trace.iterations
    assert summary["final_point"] == trace.final_point.tolist()
    assert summary["gap"] is None
    assert summary["x_projected"] is False


def test_halpern_anchor_dimension_is_checked():
    cfg = IterationConfig(lam=0.5, map_kind="R", scheme="halpern", anchor=[1.0, 2.0, 3.0])
    p = builtin("rotation")
    with pytest.raises(DimensionMismatchError, match="halpern anchor"):
        run_fixed_point(p.bifunction, p.convex_set, [1.0, 0.0], cfg)


def test_halpern_anchor_is_projected_onto_set():
    p = builtin("bilinear-strong")
    cfg = IterationConfig(
        lam=0.3, scheme="halpern", anchor=[5.0, 5.0], max_iterations=30, tol_residual=1e-12
    )
    trace = run_fixed_point(p.bifunction, p.convex_set, [1.0, 1.0], cfg)
    # β₀ = 1/2 mixes the projected anchor (1, 1) with B(1, 1) = (1/4, 1/16)
    assert_close(trace.records[1].iterate, [0.625, 0.53125], atol=1e-9)
    for r in trace.records:
        assert p.convex_set.contains(r.iterate, 1e-12)


def test_picard_residuals_contract_at_the_map_modulus():
    # B = clip(diag(1/4, 1/16) x) on bilinear-strong with λ = 0.3
    p = builtin("bilinear-strong")
    rho = 0.25
    report = estimate_map_expansion(
        "B", 0.3, p.bifunction, p.convex_set, SampleSpec(count=200, seed=3, refine=2)
    )
    assert report.estimated_modulus <= rho + 1e-4
    trace = _run("bilinear-strong", [1.0, 1.0], lam=0.3)
    assert trace.final_status == TraceStatus.CONVERGED
    res = trace.residuals
    for a, b in zip(res, res[1:]):
        assert b <= rho * a + 1e-9


@pytest.mark.parametrize("lam", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("x0", [[1.0, 0.0], [3.0, -2.0]])
def test_km_on_extragradient_never_moves_away_from_solution(lam, x0):
    trace = _run("rotation", x0, lam=lam, map_kind="T", scheme="km", max_iterations=200)
    dist = [r.distance_to_solution for r in trace.records]
    assert all(d is not None for d in dist)
    for a, b in zip(dist, dist[1:]):
        assert b <= a + 1e-10


@pytest.mark.parametrize(
    "name, cfg",
    [
        ("mvi-l1", dict(lam=0.3)),
        ("bilinear-strong", dict(lam=0.5, map_kind="T", scheme="km")),
        ("bilinear-strong", dict(lam=0.5, map_kind="R", scheme="halpern", max_iterations=20)),
    ],
    ids=["picard-B", "km-T", "halpern-R"],
)
def test_identical_runs_give_identical_traces(name, cfg, tmp_path):
    first = _run(name, [0.9, -0.4], **cfg)
    second = _run(name, [0.9, -0.4], **cfg)
    assert first.residuals == second.residuals
    for a, b in zip(first.records, second.records):
        assert a.iterate.tobytes() == b.iterate.tobytes()
    write_trace_csv(first, tmp_path / "a.csv")
    write_trace_csv(second, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
