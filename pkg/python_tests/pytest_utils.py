# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import numpy as np

from eqprox.geometry import ConvexSet


# Test-name friendly spelling of a λ value, e.g. 0.25 -> "lam0p25"
def map_lambda_to_str(lam: float) -> str:
    return "lam" + repr(float(lam)).replace(".", "p").replace("-", "m")


def assert_close(actual, expected, atol: float = 1e-8):
    np.testing.assert_allclose(
        np.asarray(actual, dtype=np.float64),
        np.asarray(expected, dtype=np.float64),
        rtol=0,
        atol=atol,
    )


def make_points(S: ConvexSet, count: int, seed: int = 0, spread: float = 3.0):
    """Seeded points around the set, half of them projected onto it."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(-spread, spread, size=(count, S.dimension))
    return [S.project(p) if i % 2 else p for i, p in enumerate(points)]


def soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)
