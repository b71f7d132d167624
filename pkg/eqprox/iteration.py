# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import csv
import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .bifunction import Bifunction
from .errors import InvalidParameterError, SubproblemError
from .geometry import ConvexSet, Vector, VectorLike, as_vector
from .global_params import (
    FIXED_POINT_MAX_ITERATIONS,
    FIXED_POINT_TOL,
    KM_ALPHA,
    RATE_MIN_RESIDUALS,
    SUBPROBLEM_TOL,
)
from .proxmaps import MapKind, evaluate_map


__all__ = [
    "Scheme",
    "TraceStatus",
    "IterationConfig",
    "IterationRecord",
    "IterationTrace",
    "run_fixed_point",
    "estimate_rate",
    "write_trace_csv",
    "trace_summary",
]


logger = logging.getLogger("eqprox")


class Scheme(str, enum.Enum):
    PICARD = "picard"
    KM = "km"
    HALPERN = "halpern"


class TraceStatus(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    ERROR = "error"


@dataclass
class IterationConfig:
    """Fixed-point run settings.

    `alpha` is the Krasnoselskii–Mann relaxation. `anchor` is the Halpern
    anchor and defaults to the (projected) starting point. Halpern weights
    are β_k = 1/(k + 2).
    """

    lam: float
    scheme: Scheme = Scheme.PICARD
    map_kind: MapKind = MapKind.B
    alpha: float = KM_ALPHA
    anchor: Optional[Vector] = None
    tol_residual: float = FIXED_POINT_TOL
    max_iterations: int = FIXED_POINT_MAX_ITERATIONS
    subproblem_tol: float = SUBPROBLEM_TOL

    def __post_init__(self):
        try:
            self.scheme = Scheme(self.scheme)
            self.map_kind = MapKind(self.map_kind)
        except ValueError as err:
            raise InvalidParameterError(str(err)) from err
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidParameterError(f"lambda must be positive, got {self.lam}")
        if not (0 < self.alpha <= 1):
            raise InvalidParameterError(f"km alpha must be in (0, 1], got {self.alpha}")
        if not self.tol_residual > 0:
            raise InvalidParameterError(f"tol_residual must be positive, got {self.tol_residual}")
        if not (isinstance(self.max_iterations, int) and self.max_iterations > 0):
            raise InvalidParameterError(
                f"max_iterations must be a positive integer, got {self.max_iterations!r}"
            )
        if self.anchor is not None:
            self.anchor = as_vector(self.anchor, what="halpern anchor")

    @staticmethod
    def beta(k: int) -> float:
        return 1.0 / (k + 2)


@dataclass(frozen=True)
class IterationRecord:
    k: int
    iterate: Vector
    residual: float
    distance_to_solution: Optional[float] = None


@dataclass
class IterationTrace:
    records: List[IterationRecord] = field(default_factory=list)
    final_status: TraceStatus = TraceStatus.MAX_ITER
    estimated_rate: Optional[float] = None
    x_projected: bool = False
    message: Optional[str] = None

    @property
    def residuals(self) -> List[float]:
        return [r.residual for r in self.records]

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def final_point(self) -> Optional[Vector]:
        return self.records[-1].iterate if self.records else None

    @property
    def final_residual(self) -> Optional[float]:
        return self.records[-1].residual if self.records else None


def _repro_script(f: Bifunction, S: ConvexSet, x: Vector, cfg: IterationConfig) -> str:
    return (
        "from eqprox.bifunction import Bifunction, Regularizer\n"
        "from eqprox.geometry import ConvexSet\n"
        "from eqprox.proxmaps import evaluate_map\n"
        f"f = Bifunction.from_dict({f.to_dict()!r}, Regularizer.from_dict({f.regularizer.to_dict()!r}))\n"
        f"S = ConvexSet.from_dict({S.to_dict()!r})\n"
        f"evaluate_map({cfg.map_kind.value!r}, f, S, {x.tolist()!r}, {cfg.lam!r}, {cfg.subproblem_tol!r})\n"
    )


def run_fixed_point(
    f: Bifunction,
    S: ConvexSet,
    x0: VectorLike,
    cfg: IterationConfig,
    x_star: Optional[VectorLike] = None,
) -> IterationTrace:
    """Iterates the configured prox map from x0.

    Record k holds x_k and ‖x_k − Map(x_k)‖. The run stops at the first
    record whose residual is within tolerance or after max_iterations
    updates.
    """
    x = as_vector(x0, f.dimension, what="x0")
    x_star = None if x_star is None else as_vector(x_star, f.dimension, what="x_star")
    trace = IterationTrace()
    if not S.contains(x):
        x = S.project(x)
        trace.x_projected = True
        logger.warning("x0 is outside the set; starting from its projection %s", x.tolist())
    if cfg.anchor is None:
        anchor = x
    else:
        anchor = S.project(as_vector(cfg.anchor, f.dimension, what="halpern anchor"))

    for k in range(cfg.max_iterations + 1):
        try:
            mapped = evaluate_map(cfg.map_kind, f, S, x, cfg.lam, cfg.subproblem_tol).output
        except SubproblemError as err:
            msg = (
                "An error occurred while running the fixed-point iteration. "
                "Here's a script to reproduce the error:\n"
                "```python\n" + _repro_script(f, S, x, cfg) + "```\n"
            )
            logger.exception(msg)
            trace.final_status = TraceStatus.ERROR
            trace.message = f"subproblem failure at iteration {k}: {err}"
            break
        residual = float(np.linalg.norm(x - mapped))
        if not math.isfinite(residual):
            trace.final_status = TraceStatus.ERROR
            trace.message = f"non-finite iterate at iteration {k}"
            break
        dist = None if x_star is None else float(np.linalg.norm(x - x_star))
        trace.records.append(IterationRecord(k, x, residual, dist))
        if residual <= cfg.tol_residual:
            trace.final_status = TraceStatus.CONVERGED
            break
        if k == cfg.max_iterations:
            trace.final_status = TraceStatus.MAX_ITER
            break
        if cfg.scheme == Scheme.PICARD:
            x = mapped
        elif cfg.scheme == Scheme.KM:
            x = (1.0 - cfg.alpha) * x + cfg.alpha * mapped
        else:
            beta = cfg.beta(k)
            x = beta * anchor + (1.0 - beta) * mapped

    trace.estimated_rate = estimate_rate(trace)
    return trace


def estimate_rate(trace: Union[IterationTrace, List[float]]) -> Optional[float]:
    """Geometric rate from a least-squares fit of log residuals over the last half.

    Returns None with fewer than RATE_MIN_RESIDUALS residuals or when a
    residual in the fitted window is zero.
    """
    residuals = trace.residuals if isinstance(trace, IterationTrace) else list(trace)
    if len(residuals) < RATE_MIN_RESIDUALS:
        return None
    tail = np.asarray(residuals[len(residuals) // 2 :], dtype=np.float64)
    if np.any(tail <= 0):
        return None
    ks = np.arange(tail.size, dtype=np.float64)
    slope = np.polyfit(ks, np.log(tail), 1)[0]
    return float(np.exp(slope))


def write_trace_csv(trace: IterationTrace, path) -> None:
    n = trace.final_point.size if trace.records else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["k", "residual", "distance_to_solution"] + [f"x_{i}" for i in range(n)]
        )
        for r in trace.records:
            dist = "" if r.distance_to_solution is None else repr(r.distance_to_solution)
            writer.writerow(
                [r.k, repr(r.residual), dist] + [repr(float(v)) for v in r.iterate]
            )


def trace_summary(trace: IterationTrace, gap: Optional[float] = None) -> Dict[str, Any]:
    final = trace.final_point
    return {
        "status": trace.final_status.value,
        "iterations": trace.iterations,
        "final_residual": trace.final_residual,
        "rate": trace.estimated_rate,
        "final_point": None if final is None else final.tolist(),
        "gap": gap,
        "x_projected": trace.x_projected,
        "message": trace.message,
    }
