# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import itertools
from typing import List, Tuple

from eqprox.problems import ProblemInstance, builtin, random_mvi, registry

# Step sizes to benchmark
LAMBDAS = [0.1, 0.5, 1.0]

# Points per benchmark round
POINTS = 64

BENCH_SEED = 42

# Dimensions of generated MVI instances
RANDOM_DIMS = [2, 8, 32]


def generate_instances() -> List[Tuple[str, int]]:
    """(kind, dimension) pairs: every bundled instance plus random MVIs."""
    inputs = [(name, 2) for name in registry()]
    inputs.extend(itertools.product(["random-mvi", "random-mvi-l1"], RANDOM_DIMS))
    return inputs


def make_instance(kind: str, dimension: int) -> ProblemInstance:
    if kind == "random-mvi":
        return random_mvi(dimension, BENCH_SEED)
    if kind == "random-mvi-l1":
        return random_mvi(dimension, BENCH_SEED, l1_weight=0.1)
    return builtin(kind)
