# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np

from . import bounds
from .bifunction import (
    ROTATION_MATRIX,
    Bifunction,
    BifunctionProfile,
    Regularizer,
    RegularizerKind,
    closed_form_profile,
)
from .errors import (
    InvalidParameterError,
    ProblemFormatError,
    UnknownProblemError,
)
from .geometry import ConvexSet, SetKind, Vector, VectorLike, as_vector
from .global_params import (
    FIXED_POINT_CERT_LAMBDA,
    FIXED_POINT_CERT_TOL,
    GAP_TOL,
    IN_SET_TOL,
)
from .proxmaps import prox_B
from .subproblem import gap_value


__all__ = [
    "ProblemInstance",
    "builtin",
    "registry",
    "load",
    "dump",
    "problem_from_dict",
    "verify_solution",
    "random_mvi",
]


_TOP_LEVEL_KEYS = {"name", "dimension", "set", "bifunction", "regularizer", "known_solution"}


def lambda_recommendations(profile: BifunctionProfile) -> Dict[str, bounds.Range]:
    ranges = {
        "quasicontraction": bounds.quasicontraction_lambda_range(profile),
        "contraction": bounds.contraction_lambda_range(profile),
        "composite": bounds.composite_lambda_range(profile),
    }
    for key, r in bounds.nonexpansive_lambda_ranges(profile).items():
        ranges[f"nonexpansive-{key}"] = r
    return ranges


def verify_solution(f: Bifunction, S: ConvexSet, x: Vector) -> None:
    """Raises ProblemFormatError unless x is a certified solution.

    Needs x ∈ S, ‖B_0.1(x) − x‖ ≤ 1e-8 and, on bounded sets, gap(x) ≤ 1e-6.
    """
    if not S.contains(x, IN_SET_TOL):
        raise ProblemFormatError("known_solution", "point is not in the set")
    residual = prox_B(f, S, x, FIXED_POINT_CERT_LAMBDA).residual_to_input
    if residual > FIXED_POINT_CERT_TOL:
        raise ProblemFormatError(
            "known_solution",
            f"not a fixed point of B_{FIXED_POINT_CERT_LAMBDA}: residual {residual:.3e}",
        )
    if S.is_bounded:
        gap = gap_value(f, S, x)
        if gap > GAP_TOL:
            raise ProblemFormatError("known_solution", f"gap certificate fails: {gap:.3e}")


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    name: str
    bifunction: Bifunction
    convex_set: ConvexSet
    profile: BifunctionProfile
    known_solution: Optional[Vector] = None
    lambda_recommendations: Dict[str, bounds.Range] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        name: str,
        f: Bifunction,
        S: ConvexSet,
        known_solution: Optional[VectorLike] = None,
        validate: bool = True,
    ) -> "ProblemInstance":
        if f.dimension != S.dimension:
            raise InvalidParameterError(
                f"bifunction dimension {f.dimension} and set dimension {S.dimension} differ"
            )
        if f.regularizer.kind == RegularizerKind.WEIGHTED_L1 and S.kind == SetKind.BALL:
            raise InvalidParameterError("weighted-l1 regularizers are not supported on a ball")
        x_star = None
        if known_solution is not None:
            x_star = as_vector(known_solution, f.dimension, what="known_solution")
            if validate:
                verify_solution(f, S, x_star)
        profile = closed_form_profile(f)
        return cls(name, f, S, profile, x_star, lambda_recommendations(profile))

    @property
    def dimension(self) -> int:
        return self.bifunction.dimension

    def to_dict(self) -> Dict[str, Any]:
        d = {
            "name": self.name,
            "dimension": self.dimension,
            "set": self.convex_set.to_dict(),
            "bifunction": self.bifunction.to_dict(),
            "regularizer": self.bifunction.regularizer.to_dict(),
        }
        if self.known_solution is not None:
            d["known_solution"] = self.known_solution.tolist()
        return d

    def describe(self) -> Dict[str, Any]:
        """to_dict plus the profile and recommended λ ranges."""
        d = self.to_dict()
        d["profile"] = self.profile.to_dict()
        d["lambda_recommendations"] = {
            k: [low, None if math.isinf(high) else high]
            for k, (low, high) in self.lambda_recommendations.items()
        }
        return d

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]


def problem_from_dict(
    data: Any, source: Optional[str] = None, validate: bool = True
) -> ProblemInstance:
    try:
        if not isinstance(data, dict):
            raise ProblemFormatError("$", "expected a JSON object")
        unknown = set(data) - _TOP_LEVEL_KEYS
        if unknown:
            raise ProblemFormatError(sorted(unknown)[0], "unknown key")
        for key in ("dimension", "set", "bifunction"):
            if key not in data:
                raise ProblemFormatError(key, "missing")
        n = data["dimension"]
        if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
            raise ProblemFormatError("dimension", f"expected a positive integer, got {n!r}")
        S = ConvexSet.from_dict(data["set"], n)
        reg = Regularizer.from_dict(data.get("regularizer", {"kind": "zero"}))
        f = Bifunction.from_dict(data["bifunction"], reg, n)
        name = data.get("name", Path(source).stem if source else "problem")
        x_star = data.get("known_solution")
        if x_star is not None:
            try:
                x_star = as_vector(x_star, n, what="known_solution")
            except (ValueError, TypeError) as err:
                raise ProblemFormatError("known_solution", str(err)) from err
        try:
            return ProblemInstance.create(name, f, S, x_star, validate)
        except InvalidParameterError as err:
            raise ProblemFormatError("$", str(err)) from err
    except ProblemFormatError as err:
        if source is None:
            raise
        raise ProblemFormatError(err.path, str(err).split(": ", 1)[-1], source) from err


def load(path: Union[str, Path]) -> ProblemInstance:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ProblemFormatError("$", f"invalid JSON: {err}", str(path)) from err
    except OSError as err:
        raise ProblemFormatError("$", f"cannot read file: {err}", str(path)) from err
    return problem_from_dict(data, str(path))


def dump(problem: ProblemInstance, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(problem.to_dict(), indent=2) + "\n")


# Registry


def _rotation() -> ProblemInstance:
    return ProblemInstance.create(
        "rotation", Bifunction.rotation(), ConvexSet.whole_space(2), [0.0, 0.0]
    )


def _bilinear_strong() -> ProblemInstance:
    # P − Q = diag(2, 3): tau = 2 < L1 + L2 = 3
    f = Bifunction.bilinear(np.diag([3.0, 4.0]), np.eye(2))
    return ProblemInstance.create(
        "bilinear-strong", f, ConvexSet.box([-1.0, -1.0], [1.0, 1.0]), [0.0, 0.0]
    )


def _mvi_cocoercive() -> ProblemInstance:
    f = Bifunction.mvi_affine(np.diag([1.0, 4.0]), [-0.5, 1.0])
    return ProblemInstance.create(
        "mvi-cocoercive", f, ConvexSet.box([-1.0, -1.0], [1.0, 1.0]), [0.5, -0.25]
    )


def _mvi_l1() -> ProblemInstance:
    A = np.eye(2) + 0.5 * ROTATION_MATRIX
    f = Bifunction.mvi_affine(A, [-0.7, 0.25], Regularizer.weighted_l1([0.2, 0.2]))
    return ProblemInstance.create(
        "mvi-l1", f, ConvexSet.box([-1.0, -1.0], [1.0, 1.0]), [0.5, 0.0]
    )


def _mvi_monotone_skew() -> ProblemInstance:
    f = Bifunction.mvi_affine(ROTATION_MATRIX, [0.5, 0.0])
    return ProblemInstance.create(
        "mvi-monotone-skew", f, ConvexSet.ball([0.0, 0.0], 2.0), [0.0, -0.5]
    )


_REGISTRY: Dict[str, Callable[[], ProblemInstance]] = {
    "rotation": _rotation,
    "bilinear-strong": _bilinear_strong,
    "mvi-cocoercive": _mvi_cocoercive,
    "mvi-l1": _mvi_l1,
    "mvi-monotone-skew": _mvi_monotone_skew,
}


def registry() -> List[str]:
    return sorted(_REGISTRY)


def builtin(name: str) -> ProblemInstance:
    if name not in _REGISTRY:
        raise UnknownProblemError(name, _REGISTRY)
    return _REGISTRY[name]()


def random_mvi(
    dimension: int,
    seed: int,
    skew: float = 0.5,
    l1_weight: float = 0.0,
) -> ProblemInstance:
    """Diagonal-plus-skew affine MVI on the box [-1, 1]^n.

    The diagonal is drawn from [0.5, 2] so the instance is strongly
    monotone; no known solution is attached.
    """
    rng = np.random.default_rng(seed)
    K = rng.standard_normal((dimension, dimension))
    A = np.diag(rng.uniform(0.5, 2.0, dimension)) + skew * (K - K.T) / 2.0
    b = rng.uniform(-1.0, 1.0, dimension)
    reg = (
        Regularizer.weighted_l1(np.full(dimension, l1_weight))
        if l1_weight > 0
        else Regularizer.zero()
    )
    f = Bifunction.mvi_affine(A, b, reg)
    S = ConvexSet.box(-np.ones(dimension), np.ones(dimension))
    suffix = "-l1" if l1_weight > 0 else ""
    return ProblemInstance.create(f"random-mvi{suffix}-{dimension}-{seed}", f, S)
