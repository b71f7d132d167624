# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import os
import platform
from typing import Any, Callable, Dict, Iterable

import numpy as np
import pytest_benchmark

import eqprox
from eqprox.proxmaps import ProxEvaluation


def get_machine_properties() -> Dict[str, Any]:
    """
    Host facts stored with every benchmark run so that reports from
    different machines can be told apart.
    """
    return {
        "cpu_count": os.cpu_count(),
        "processor": platform.processor() or platform.machine(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "eqprox": str(eqprox.version()),
    }


MACHINE_PROPERTIES = get_machine_properties()


class EqproxBenchmark:
    """
    A wrapper class around pytest-benchmark that counts the inner
    subproblem iterations spent by every timed call.
    """

    def __init__(self, benchmark_fixture):
        self.benchmark = benchmark_fixture
        self.inner_iterations = 0
        self.calls = 0

    def __call__(self, function_to_benchmark: Callable, *args, **kwargs):
        return self.benchmark(function_to_benchmark, *args, **kwargs)

    def __getattr__(self, attr):
        return getattr(self.benchmark, attr)

    def record(self, evaluations: Iterable[ProxEvaluation]) -> None:
        for ev in evaluations:
            self.inner_iterations += ev.inner_iterations
            self.calls += 1

    def set_metrics(self, points: int) -> None:
        """
        Current metrics:
            Points: map evaluations per round
            PointsPerSecond: Points * total_rounds / total_time
            InnerIterationsPerCall: mean subproblem iterations per map evaluation
        """
        stats = self.benchmark.stats
        self.benchmark.extra_info["Points"] = points
        if stats is not None and stats["total"] > 0:
            self.benchmark.extra_info["PointsPerSecond"] = (
                points * stats["rounds"] / stats["total"]
            )
        if self.calls:
            self.benchmark.extra_info["InnerIterationsPerCall"] = (
                self.inner_iterations / self.calls
            )


def run_benchmark(
    benchmark: pytest_benchmark.fixture.BenchmarkFixture,
    benchmark_fn: Callable,
    points: np.ndarray,
    rounds: int = 5,
    warmup_rounds: int = 1,
):
    """
    Benchmarks a map over a batch of points and stores metrics as extra information.

    Arguments:
        benchmark: pytest-benchmark fixture
        benchmark_fn: Target function, called once per point
        points: (count, n) array of inputs

    Returns:
        outputs: list of ProxEvaluation from the last round
    """
    eq_benchmark = EqproxBenchmark(benchmark)

    def run_all(pts):
        outputs = [benchmark_fn(x) for x in pts]
        eq_benchmark.record(outputs)
        return outputs

    outputs = eq_benchmark.pedantic(
        run_all, args=(points,), rounds=rounds, warmup_rounds=warmup_rounds
    )
    eq_benchmark.set_metrics(len(points))
    return outputs
