# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import numpy as np
import pytest

from pytest_core import MapInfo
from pytest_framework import create_map_test
from pytest_mapinfos import mapinfos
from pytest_utils import assert_close

from eqprox.problems import builtin


# ****** Check a map's outputs are correct ******


@create_map_test(tuple(mapinfos))
def test_correctness(mapinfo: MapInfo, instance: str, lam: float):
    for sample in mapinfo.sample_input_generator(instance, lam):
        problem, x, lam = sample.args
        f, S = problem.bifunction, problem.convex_set
        result = mapinfo.op(f, S, x, lam, **mapinfo.map_kwargs)

        assert result.map_kind == mapinfo.map_kind
        assert result.lam == lam
        assert S.contains(result.output, 1e-9), f"{result.output} left {S}"
        assert result.residual_to_input == pytest.approx(
            float(np.linalg.norm(result.output - x)), abs=1e-12
        )
        expected = mapinfo.reference(problem, x, lam) if mapinfo.reference else None
        if expected is not None:
            assert_close(result.output, expected, atol=mapinfo.atol)


# ****** A known solution is a fixed point of every map ******


@create_map_test(tuple(mapinfos))
def test_fixed_point_at_solution(mapinfo: MapInfo, instance: str, lam: float):
    problem = builtin(instance)
    x_star = problem.known_solution
    result = mapinfo.op(problem.bifunction, problem.convex_set, x_star, lam)
    assert_close(result.output, x_star, atol=1e-7)
    assert result.residual_to_input <= 1e-7


# ****** Check a map rejects invalid inputs ******


@create_map_test(tuple(mapinfos), lambdas=(0.5,))
def test_errors(mapinfo: MapInfo, instance: str, lam: float):
    problem = builtin(instance)
    f, S = problem.bifunction, problem.convex_set
    for sample in mapinfo.error_input_generator(instance):
        kwargs = dict(sample.kwargs)
        x = kwargs.pop("x")
        with pytest.raises(sample.ex_type, match=sample.ex_str):
            mapinfo.op(f, S, x, **kwargs)
