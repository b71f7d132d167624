# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import numpy as np
import pytest

from eqprox.problems import ProblemInstance
from .core import MACHINE_PROPERTIES
from .global_params import BENCH_SEED, POINTS


def pytest_addoption(parser):
    parser.addoption(
        "--disable-validation",
        action="store_true",
        default=False,
        help="Skip the membership and convergence checks on benchmark outputs.",
    )
    parser.addoption(
        "--disable-benchmarking",
        action="store_true",
        default=False,
        help="Run the validation only, without timing.",
    )
    parser.addoption(
        "--bench-points",
        type=int,
        default=POINTS,
        help="Map evaluations per benchmark round.",
    )


@pytest.fixture
def disable_validation(request):
    return request.config.getoption("--disable-validation")


@pytest.fixture
def disable_benchmarking(request):
    return request.config.getoption("--disable-benchmarking")


@pytest.fixture
def sample_points(request):
    """Seeded uniform points in [-2, 2]^n for a problem instance."""
    count = request.config.getoption("--bench-points")

    def draw(problem: ProblemInstance) -> np.ndarray:
        rng = np.random.default_rng(BENCH_SEED)
        return rng.uniform(-2.0, 2.0, (count, problem.dimension))

    return draw


def pytest_make_parametrize_id(val):
    # (instance kind, dimension) pairs from generate_instances
    if isinstance(val, tuple) and len(val) == 2 and isinstance(val[1], int):
        return f"{val[0]}-{val[1]}d"
    if isinstance(val, tuple):
        return "-".join(str(v) for v in val)
    return repr(val)


def pytest_benchmark_update_machine_info(config, machine_info):
    machine_info.update(MACHINE_PROPERTIES)
