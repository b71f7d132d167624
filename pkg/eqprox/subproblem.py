# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .bifunction import Bifunction, RegularizerKind
from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    SubproblemError,
    UnboundedSubproblemError,
)
from .geometry import ConvexSet, SetKind, Vector, VectorLike
from .global_params import (
    GAP_TOL,
    IN_SET_TOL,
    MAX_INNER_ITERATIONS,
    PSD_TOL,
    SUBPROBLEM_TOL,
)


__all__ = [
    "SolveMethod",
    "SubproblemSolution",
    "solve_prox_subproblem",
    "gap_value",
]


logger = logging.getLogger("eqprox")


class SolveMethod(str, enum.Enum):
    AUTO = "auto"
    CLOSED_FORM = "closed-form"
    ITERATIVE = "iterative"


@dataclass(frozen=True)
class SubproblemSolution:
    minimizer: Vector
    optimality_residual: float
    inner_iterations: int
    used_closed_form: bool


def check_positive(value: float, what: str) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise InvalidParameterError(f"{what} must be positive and finite, got {value}")
    return value


def _check_compatible(f: Bifunction, S: ConvexSet) -> None:
    if f.dimension != S.dimension:
        raise DimensionMismatchError(f.dimension, S.dimension, "convex set")


def _l1(f: Bifunction) -> np.ndarray:
    w = f.regularizer.l1_weights
    return np.zeros(f.dimension) if w is None else w


class _ProxObjective:
    """y ↦ λ f(x, y) + ½‖y − anchor‖² split into a smooth part and λ·l1 + ι_S."""

    def __init__(self, f: Bifunction, S: ConvexSet, x: Vector, anchor: Vector, lam: float):
        self.f, self.S, self.x, self.anchor, self.lam = f, S, x, anchor, lam
        self.w = _l1(f)
        self.step = 1.0 / (1.0 + lam * f.y_curvature)

    def gradient(self, y: Vector) -> Vector:
        return self.lam * self.f.smooth_y_gradient(self.x, y) + (y - self.anchor)

    def prox_step(self, y: Vector) -> Vector:
        t = self.step
        return self.S.prox_weighted_l1(y - t * self.gradient(y), t * self.lam * self.w)

    def residual(self, y: Vector) -> float:
        """Norm of the gradient map (y − prox_step(y)) / step."""
        return float(np.linalg.norm(y - self.prox_step(y))) / self.step


def _closed_form(
    f: Bifunction, S: ConvexSet, x: Vector, anchor: Vector, lam: float
) -> Optional[Vector]:
    w = f.regularizer.l1_weights
    if f.linear_in_y:
        v = anchor - lam * f.linear_y_coefficient(x)
        if w is None:
            return S.project(v)
        if S.kind == SetKind.BALL:
            return None
        return S.prox_weighted_l1(v, lam * w)
    if S.kind == SetKind.WHOLE_SPACE and w is None:
        # stationarity: (I + λ∇²) y = anchor − λ · (gradient at y = 0)
        n = f.dimension
        rhs = anchor - lam * f.smooth_y_gradient(x, np.zeros(n))
        return np.linalg.solve(np.eye(n) + lam * f.y_hessian, rhs)
    return None


def closed_form_rows(
    f: Bifunction, S: ConvexSet, X: np.ndarray, anchors: np.ndarray, lam: float
) -> Optional[np.ndarray]:
    """Closed-form minimizers for stacked (x, anchor) rows without l1 terms.

    Returns None when a row would need the iterative solver.
    """
    if f.regularizer.l1_weights is not None:
        return None
    h = f.regularizer.h if f.regularizer.kind == RegularizerKind.QUADRATIC else 0.0
    if f.linear_in_y:
        return S.project_rows(anchors - lam * (X @ f.P.T + f.q + h))
    if S.kind == SetKind.WHOLE_SPACE:
        # smooth y-gradient at y = 0 is (P − Qᵀ)x + q + h
        rhs = anchors - lam * (X @ f.lipschitz_matrix.T + f.q + h)
        return np.linalg.solve(np.eye(f.dimension) + lam * f.y_hessian, rhs.T).T
    return None


def solve_prox_subproblem(
    f: Bifunction,
    S: ConvexSet,
    x: VectorLike,
    anchor: VectorLike,
    lam: float,
    tol: float = SUBPROBLEM_TOL,
    *,
    method: Union[SolveMethod, str] = SolveMethod.AUTO,
    start: Optional[VectorLike] = None,
    max_iterations: int = MAX_INNER_ITERATIONS,
) -> SubproblemSolution:
    """Unique minimizer of y ↦ λ f(x, y) + ½‖y − anchor‖² over S.

    Uses an exact formula when the objective admits one and `method` allows
    it, otherwise a proximal gradient method with step 1/(1 + λΛ), Λ the
    curvature of f(x, ·), started at `start` or at P_S(anchor).
    """
    lam = check_positive(lam, "lambda")
    tol = check_positive(tol, "tol")
    method = SolveMethod(method)
    _check_compatible(f, S)
    x, anchor = f.check_point(x), f.check_point(anchor)
    objective = _ProxObjective(f, S, x, anchor, lam)

    if method != SolveMethod.ITERATIVE:
        y = _closed_form(f, S, x, anchor, lam)
        if y is not None:
            residual = objective.residual(y)
            logger.debug("prox subproblem: closed form, residual %.3e", residual)
            return SubproblemSolution(y, residual, 0, True)
        if method == SolveMethod.CLOSED_FORM:
            raise InvalidParameterError(
                f"no closed form for {f.kind.value} bifunction with "
                f"{f.regularizer.kind.value} regularizer on a {S.kind.value} set"
            )

    y = S.project(anchor if start is None else f.check_point(start))
    best = math.inf
    for k in range(max_iterations):
        y_next = objective.prox_step(y)
        residual = float(np.linalg.norm(y - y_next)) / objective.step
        if residual <= tol:
            logger.debug("prox subproblem: %d proximal gradient steps", k)
            return SubproblemSolution(y, residual, k, False)
        best = min(best, residual)
        y = y_next
    raise SubproblemError(
        "An error occurred while solving the prox subproblem: no convergence",
        best_residual=best,
        iterations=max_iterations,
    )


def gap_value(
    f: Bifunction,
    S: ConvexSet,
    x: VectorLike,
    tol: float = GAP_TOL,
    max_iterations: int = MAX_INNER_ITERATIONS,
) -> float:
    """g(x) = −min{f(x, y) : y ∈ S}.

    Exact when f(x, ·) is affine up to weighted-l1 terms. Otherwise a
    proximal gradient descent from x that stops once the Frank–Wolfe gap
    certifies the value to within `tol`.
    """
    tol = check_positive(tol, "tol")
    _check_compatible(f, S)
    x = f.check_point(x)
    if not S.contains(x, IN_SET_TOL):
        raise InvalidParameterError(f"gap_value needs x in the set, got {x.tolist()}")
    w = f.regularizer.l1_weights

    if f.linear_in_y:
        c = f.linear_y_coefficient(x)
        _, value = S.minimize_linear_l1(c, w)
        l1_x = 0.0 if w is None else float(np.dot(w, np.abs(x)))
        return -(value - float(np.dot(c, x)) - l1_x)

    if not S.is_bounded:
        return _whole_space_gap(f, x, tol, max_iterations)

    step = 1.0 / f.y_curvature
    w = _l1(f)
    y = S.project(x)
    best = math.inf
    for _ in range(max_iterations):
        grad = f.smooth_y_gradient(x, y)
        _, lin = S.minimize_linear_l1(grad, w)
        frank_wolfe = float(np.dot(grad, y)) + float(np.dot(w, np.abs(y))) - lin
        if frank_wolfe <= tol:
            return -f.evaluate(x, y)
        best = min(best, frank_wolfe)
        y = S.prox_weighted_l1(y - step * grad, step * w)
    raise SubproblemError(
        "An error occurred while computing the gap function: no convergence",
        best_residual=best,
        iterations=max_iterations,
    )


def _whole_space_gap(f: Bifunction, x: Vector, tol: float, max_iterations: int) -> float:
    hessian = f.y_hessian
    mu = float(np.linalg.eigvalsh(hessian)[0])
    if mu <= PSD_TOL:
        raise UnboundedSubproblemError(
            "f(x, .) is not strongly convex, so min over the whole space may be unbounded below"
        )
    n = f.dimension
    w = f.regularizer.l1_weights
    if w is None:
        y = np.linalg.solve(hessian, -f.smooth_y_gradient(x, np.zeros(n)))
        return -f.evaluate(x, y)

    whole = ConvexSet.whole_space(n)
    step = 1.0 / f.y_curvature
    y = x
    best = math.inf
    for _ in range(max_iterations):
        y_next = whole.prox_weighted_l1(y - step * f.smooth_y_gradient(x, y), step * w)
        g = float(np.linalg.norm(y - y_next)) / step
        if g * g / mu <= tol:
            return -f.evaluate(x, y_next)
        best = min(best, g)
        y = y_next
    raise SubproblemError(
        "An error occurred while computing the gap function: no convergence",
        best_residual=best,
        iterations=max_iterations,
    )
