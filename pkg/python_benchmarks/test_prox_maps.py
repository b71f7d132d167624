# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import numpy as np
import pytest

from eqprox.proxmaps import MapKind, evaluate_map, evaluate_map_rows
from .core import run_benchmark
from .global_params import LAMBDAS, generate_instances, make_instance


@pytest.mark.parametrize("instance", generate_instances())
@pytest.mark.parametrize("map_kind", [k.value for k in MapKind])
@pytest.mark.parametrize("lam", LAMBDAS)
def test_prox_map_benchmark(
    benchmark,
    instance: tuple,
    map_kind: str,
    lam: float,
    sample_points,
    disable_validation: bool,
    disable_benchmarking: bool,
):
    problem = make_instance(*instance)
    f, S = problem.bifunction, problem.convex_set
    points = sample_points(problem)

    def fn(x):
        return evaluate_map(map_kind, f, S, x, lam)

    if not disable_validation:
        for x in points[:4]:
            ev = fn(x)
            assert S.contains(ev.output, 1e-9)

    if not disable_benchmarking:
        run_benchmark(benchmark, fn, points)


@pytest.mark.parametrize("instance", generate_instances())
@pytest.mark.parametrize("map_kind", [k.value for k in MapKind])
def test_prox_map_rows_benchmark(
    benchmark,
    instance: tuple,
    map_kind: str,
    sample_points,
    disable_validation: bool,
    disable_benchmarking: bool,
):
    problem = make_instance(*instance)
    f, S = problem.bifunction, problem.convex_set
    points = sample_points(problem)
    lam = LAMBDAS[1]

    if not disable_validation:
        rows = evaluate_map_rows(map_kind, f, S, points[:4], lam)
        for x, out in zip(points[:4], rows):
            expected = evaluate_map(map_kind, f, S, x, lam).output
            np.testing.assert_allclose(out, expected, atol=1e-8)

    if not disable_benchmarking:
        benchmark.pedantic(
            evaluate_map_rows, args=(map_kind, f, S, points, lam), rounds=5, warmup_rounds=1
        )
        benchmark.extra_info["Points"] = len(points)
