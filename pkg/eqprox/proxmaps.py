# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import enum
import logging
from dataclasses import dataclass
from typing import Any, Dict, Union

import numpy as np

from .bifunction import Bifunction, RegularizerKind, spectral_norm
from .errors import DimensionMismatchError, NotMonotoneError, SubproblemError
from .geometry import ConvexSet, SetKind, Vector, VectorLike
from .global_params import (
    RESOLVENT_MAX_ITERATIONS,
    RESOLVENT_STOP_FACTOR,
    SUBPROBLEM_TOL,
)
from .subproblem import check_positive, closed_form_rows, solve_prox_subproblem


__all__ = [
    "MapKind",
    "ProxEvaluation",
    "prox_B",
    "prox_T",
    "prox_R",
    "evaluate_map",
    "evaluate_map_rows",
    "resolvent_inner_step",
]


logger = logging.getLogger("eqprox")


class MapKind(str, enum.Enum):
    B = "B"
    T = "T"
    R = "R"


@dataclass(frozen=True)
class ProxEvaluation:
    output: Vector
    residual_to_input: float
    subproblem_residual: float
    inner_iterations: int
    map_kind: MapKind
    lam: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "output": self.output.tolist(),
            "residual_to_input": self.residual_to_input,
            "subproblem_residual": self.subproblem_residual,
            "inner_iterations": self.inner_iterations,
            "map_kind": self.map_kind.value,
            "lambda": self.lam,
        }


def _evaluation(x: Vector, out: Vector, residual: float, iters: int, kind: MapKind, lam: float):
    return ProxEvaluation(out, float(np.linalg.norm(out - x)), residual, iters, kind, lam)


def prox_B(
    f: Bifunction, S: ConvexSet, x: VectorLike, lam: float, tol: float = SUBPROBLEM_TOL, **kwargs
) -> ProxEvaluation:
    """B_λ(x) = argmin{λ f(x, y) + ½‖y − x‖² : y ∈ S}."""
    x = f.check_point(x)
    sol = solve_prox_subproblem(f, S, x, x, lam, tol, **kwargs)
    return _evaluation(
        x, sol.minimizer, sol.optimality_residual, sol.inner_iterations, MapKind.B, lam
    )


def prox_T(
    f: Bifunction, S: ConvexSet, x: VectorLike, lam: float, tol: float = SUBPROBLEM_TOL, **kwargs
) -> ProxEvaluation:
    """T_λ(x) = argmin{λ f(B_λ(x), y) + ½‖y − x‖² : y ∈ S}."""
    x = f.check_point(x)
    u = solve_prox_subproblem(f, S, x, x, lam, tol, **kwargs)
    sol = solve_prox_subproblem(f, S, u.minimizer, x, lam, tol, **kwargs)
    return _evaluation(
        x,
        sol.minimizer,
        max(u.optimality_residual, sol.optimality_residual),
        u.inner_iterations + sol.inner_iterations,
        MapKind.T,
        lam,
    )


def resolvent_inner_step(f: Bifunction, lam: float) -> float:
    """Prox parameter μ for the Picard loop on g(z, y) = f(z, y) + (1/2λ)⟨y − z, z − x⟩.

    g is strongly monotone with modulus τ + 1/(2λ) and has Lipschitz matrix
    D + I/(2λ); μ is λ/2 capped at the contraction step modulus/‖D + I/(2λ)‖².
    """
    n = f.dimension
    gamma = float(np.linalg.eigvalsh(f.monotonicity_matrix)[0]) + 0.5 / lam
    d = spectral_norm(f.lipschitz_matrix + (0.5 / lam) * np.eye(n))
    return min(0.5 * lam, gamma / (d * d))


def _resolvent_closed_form(f: Bifunction, S: ConvexSet, X: np.ndarray, lam: float):
    # stationarity of g(z, .) at y = z on the whole space, one row per point
    if S.kind != SetKind.WHOLE_SPACE or f.regularizer.kind == RegularizerKind.WEIGHTED_L1:
        return None
    n = f.dimension
    M = f.P + f.Q
    c = f.q
    if f.regularizer.kind == RegularizerKind.QUADRATIC:
        M = M + f.regularizer.H
        c = c + f.regularizer.h
    return np.linalg.solve(np.eye(n) + 2.0 * lam * M, (X - 2.0 * lam * c).T).T


def _require_monotone(f: Bifunction) -> None:
    if not f.is_monotone():
        raise NotMonotoneError(
            f"R_lambda needs a monotone bifunction; f(x,y)+f(y,x) has eigenvalue "
            f"{-np.linalg.eigvalsh(f.monotonicity_matrix)[0]:.3e} > 0"
        )


def prox_R(
    f: Bifunction,
    S: ConvexSet,
    x: VectorLike,
    lam: float,
    tol: float = SUBPROBLEM_TOL,
    *,
    assume_monotone: bool = False,
    max_iterations: int = RESOLVENT_MAX_ITERATIONS,
    **kwargs,
) -> ProxEvaluation:
    """R_λ(x): the z ∈ S with f(z, y) + (1/2λ)⟨y − z, z − x⟩ ≥ 0 for all y ∈ S."""
    lam = check_positive(lam, "lambda")
    tol = check_positive(tol, "tol")
    x = f.check_point(x)
    if not assume_monotone:
        _require_monotone(f)

    z = _resolvent_closed_form(f, S, x[None, :], lam)
    if z is not None:
        return _evaluation(x, z[0], 0.0, 0, MapKind.R, lam)

    mu = resolvent_inner_step(f, lam)
    stop = tol * RESOLVENT_STOP_FACTOR
    inner_tol = stop * RESOLVENT_STOP_FACTOR
    z = S.project(x)
    iterations = 0
    step = np.inf
    for k in range(max_iterations):
        anchor = z - (0.5 * mu / lam) * (z - x)
        sol = solve_prox_subproblem(f, S, z, anchor, mu, inner_tol, **kwargs)
        iterations += sol.inner_iterations
        step = float(np.linalg.norm(sol.minimizer - z))
        z = sol.minimizer
        if step <= stop:
            logger.debug("R_lambda: %d Picard steps with mu=%.4g", k + 1, mu)
            return _evaluation(x, z, step, iterations, MapKind.R, lam)
    raise SubproblemError(
        "An error occurred while evaluating R_lambda: inner Picard iteration did not converge",
        best_residual=step,
        iterations=max_iterations,
    )


_MAPS = {MapKind.B: prox_B, MapKind.T: prox_T, MapKind.R: prox_R}


def evaluate_map(
    kind: Union[MapKind, str],
    f: Bifunction,
    S: ConvexSet,
    x: VectorLike,
    lam: float,
    tol: float = SUBPROBLEM_TOL,
    **kwargs,
) -> ProxEvaluation:
    return _MAPS[MapKind(kind)](f, S, x, lam, tol, **kwargs)


def evaluate_map_rows(
    kind: Union[MapKind, str],
    f: Bifunction,
    S: ConvexSet,
    X: np.ndarray,
    lam: float,
    tol: float = SUBPROBLEM_TOL,
) -> np.ndarray:
    """Map outputs for every row of an (m, n) array.

    Closed-form cases run as one stacked solve; the rest go through
    `evaluate_map` row by row.
    """
    kind = MapKind(kind)
    lam = check_positive(lam, "lambda")
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != f.dimension:
        raise DimensionMismatchError(f.dimension, X.shape[-1] if X.ndim else 0, "sample rows")
    if f.dimension != S.dimension:
        raise DimensionMismatchError(f.dimension, S.dimension, "convex set")

    if kind == MapKind.R:
        _require_monotone(f)
        out = _resolvent_closed_form(f, S, X, lam)
    else:
        out = closed_form_rows(f, S, X, X, lam)
        if out is not None and kind == MapKind.T:
            out = closed_form_rows(f, S, out, X, lam)
    if out is not None:
        return out
    rows = [evaluate_map(kind, f, S, x, lam, tol).output for x in X]
    return np.array(rows, dtype=np.float64).reshape(X.shape)
