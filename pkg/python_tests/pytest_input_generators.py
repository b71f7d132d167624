# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import numpy as np

from pytest_core import ErrorSample, SampleInput
from pytest_utils import make_points, soft_threshold

from eqprox.errors import DimensionMismatchError, InvalidParameterError
from eqprox.geometry import SetKind
from eqprox.problems import ProblemInstance, builtin

SAMPLES_PER_INSTANCE = 6


def prox_map_generator(instance: str, lam: float, seed: int = 0):
    problem = builtin(instance)
    for x in make_points(problem.convex_set, SAMPLES_PER_INSTANCE, seed):
        yield SampleInput(problem, x, lam)


def prox_map_error_generator(instance: str):
    problem = builtin(instance)
    x = np.zeros(problem.dimension)

    yield ErrorSample({"x": x, "lam": 0.0}, "lambda must be positive", InvalidParameterError)
    yield ErrorSample({"x": x, "lam": -1.0}, "lambda must be positive", InvalidParameterError)
    yield ErrorSample(
        {"x": x, "lam": float("nan")}, "lambda must be positive", InvalidParameterError
    )
    yield ErrorSample({"x": x, "lam": 0.5, "tol": 0.0}, "tol must be positive", InvalidParameterError)
    yield ErrorSample(
        {"x": np.zeros(problem.dimension + 1), "lam": 0.5},
        "Dimension mismatch",
        DimensionMismatchError,
    )


# ****** Closed-form references ******


def _set_prox(problem: ProblemInstance, v, t):
    """argmin ½‖z − v‖² + Σ tᵢ|zᵢ| over the instance's set, written out by hand."""
    S = problem.convex_set
    v = soft_threshold(v, t)
    if S.kind == SetKind.BOX:
        return np.clip(v, S.lower, S.upper)
    if S.kind == SetKind.BALL:
        d = v - S.center
        return S.center + d * (S.radius / max(S.radius, np.linalg.norm(d)))
    return v


def _l1(problem: ProblemInstance):
    w = problem.bifunction.regularizer.l1_weights
    return np.zeros(problem.dimension) if w is None else w


def _isotropic_q(problem: ProblemInstance):
    Q = problem.bifunction.Q
    c = Q[0, 0]
    if np.allclose(Q, c * np.eye(problem.dimension)):
        return c
    return None


# B and T share one formula: a step from x with the operator taken at u
def _step_from(problem: ProblemInstance, x, u, lam):
    f = problem.bifunction
    c = _isotropic_q(problem)
    if c is None:
        return None
    v = (x - lam * ((f.P - f.Q) @ u + f.q)) / (1.0 + 2.0 * lam * c)
    return _set_prox(problem, v, lam * _l1(problem) / (1.0 + 2.0 * lam * c))


def reference_B(problem: ProblemInstance, x, lam):
    return _step_from(problem, x, x, lam)


def reference_T(problem: ProblemInstance, x, lam):
    u = reference_B(problem, x, lam)
    return None if u is None else _step_from(problem, x, u, lam)


def reference_R(problem: ProblemInstance, x, lam):
    f, S = problem.bifunction, problem.convex_set
    if np.any(_l1(problem)):
        return None
    M = f.P + f.Q
    if S.kind == SetKind.WHOLE_SPACE:
        return np.linalg.solve(np.eye(problem.dimension) + 2.0 * lam * M, x - 2.0 * lam * f.q)
    # a diagonal operator on a box separates by coordinate
    if S.kind == SetKind.BOX and np.allclose(M, np.diag(np.diag(M))):
        return np.clip((x - 2.0 * lam * f.q) / (1.0 + 2.0 * lam * np.diag(M)), S.lower, S.upper)
    return None
