# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import enum
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    ProblemFormatError,
    UnboundedSubproblemError,
)
from .global_params import MEMBERSHIP_TOL


__all__ = [
    "Vector",
    "as_vector",
    "inner",
    "norm",
    "SetKind",
    "ConvexSet",
    "project",
]


Vector = npt.NDArray[np.float64]
VectorLike = Union[Vector, Sequence[float]]


def as_vector(
    x: VectorLike, dimension: Optional[int] = None, what: str = "vector"
) -> Vector:
    """Returns a read-only float64 copy of `x` after checking shape and finiteness."""
    v = np.array(x, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InvalidParameterError(
            f"{what} must be a non-empty one-dimensional sequence, got shape {v.shape}"
        )
    if not np.all(np.isfinite(v)):
        raise InvalidParameterError(f"{what} has non-finite entries: {v.tolist()}")
    if dimension is not None and v.size != dimension:
        raise DimensionMismatchError(dimension, v.size, what)
    v.setflags(write=False)
    return v


def _check_same_dimension(a: Vector, b: Vector) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(a.shape[-1], b.shape[-1])


def inner(a: VectorLike, b: VectorLike) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same_dimension(a, b)
    return float(np.dot(a, b))


def norm(a: VectorLike) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64)))


def soft_threshold(v: Vector, thresh: Vector) -> Vector:
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


class SetKind(str, enum.Enum):
    WHOLE_SPACE = "whole-space"
    BOX = "box"
    BALL = "ball"
    SIMPLEX = "simplex"


@dataclass(frozen=True, eq=False)
class ConvexSet:
    """A closed convex set C with an exact Euclidean projection.

    Build instances with the `whole_space`, `box`, `ball` and `simplex`
    constructors rather than directly.
    """

    kind: SetKind
    dimension: int
    lower: Optional[Vector] = None
    upper: Optional[Vector] = None
    center: Optional[Vector] = None
    radius: Optional[float] = None

    @classmethod
    def whole_space(cls, dimension: int) -> "ConvexSet":
        _check_dimension(dimension)
        return cls(SetKind.WHOLE_SPACE, dimension)

    @classmethod
    def box(cls, lower: VectorLike, upper: VectorLike) -> "ConvexSet":
        lower = as_vector(lower, what="box lower bound")
        upper = as_vector(upper, lower.size, what="box upper bound")
        if np.any(lower > upper):
            raise InvalidParameterError(
                f"box requires lower <= upper componentwise, got {lower.tolist()} and {upper.tolist()}"
            )
        return cls(SetKind.BOX, lower.size, lower=lower, upper=upper)

    @classmethod
    def ball(cls, center: VectorLike, radius: float) -> "ConvexSet":
        center = as_vector(center, what="ball center")
        radius = float(radius)
        if not (math.isfinite(radius) and radius > 0):
            raise InvalidParameterError(f"ball radius must be positive, got {radius}")
        return cls(SetKind.BALL, center.size, center=center, radius=radius)

    @classmethod
    def simplex(cls, dimension: int) -> "ConvexSet":
        _check_dimension(dimension)
        return cls(SetKind.SIMPLEX, dimension)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ConvexSet):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        params = {k: v for k, v in self.to_dict().items() if k != "kind"}
        return f"ConvexSet({self.kind.value}, {params})"

    @property
    def is_bounded(self) -> bool:
        return self.kind != SetKind.WHOLE_SPACE

    @property
    def diameter(self) -> float:
        if self.kind == SetKind.WHOLE_SPACE:
            return math.inf
        if self.kind == SetKind.BOX:
            return norm(self.upper - self.lower)
        if self.kind == SetKind.BALL:
            return 2.0 * self.radius
        return math.sqrt(2.0) if self.dimension > 1 else 0.0

    def _check(self, x: Vector) -> Vector:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.size != self.dimension:
            raise DimensionMismatchError(self.dimension, x.shape[-1] if x.ndim else 0)
        return x

    def contains(self, x: VectorLike, tol: float = MEMBERSHIP_TOL) -> bool:
        x = self._check(x)
        if not np.all(np.isfinite(x)):
            return False
        if self.kind == SetKind.WHOLE_SPACE:
            return True
        if self.kind == SetKind.BOX:
            return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))
        if self.kind == SetKind.BALL:
            return norm(x - self.center) <= self.radius + tol * max(1.0, self.radius)
        return bool(
            np.all(x >= -tol) and abs(math.fsum(x) - 1.0) <= tol * self.dimension
        )

    def project(self, x: VectorLike) -> Vector:
        """Nearest point of the set to `x`; returns `x` itself when it is a member."""
        x = self._check(x)
        if self.kind == SetKind.WHOLE_SPACE or self.contains(x):
            return x
        if self.kind == SetKind.BOX:
            return np.clip(x, self.lower, self.upper)
        if self.kind == SetKind.BALL:
            d = x - self.center
            return self.center + (self.radius / np.linalg.norm(d)) * d
        # sort-and-threshold
        u = np.sort(x)[::-1]
        css = np.cumsum(u)
        ks = np.arange(1, self.dimension + 1)
        rho = ks[u - (css - 1.0) / ks > 0][-1]
        theta = (css[rho - 1] - 1.0) / rho
        return np.maximum(x - theta, 0.0)

    def project_rows(self, X: np.ndarray) -> np.ndarray:
        """`project` applied to every row of an (m, n) array."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.dimension:
            raise DimensionMismatchError(self.dimension, X.shape[-1] if X.ndim else 0)
        if self.kind == SetKind.WHOLE_SPACE:
            return X.copy()
        if self.kind == SetKind.BOX:
            return np.clip(X, self.lower, self.upper)
        if self.kind == SetKind.BALL:
            D = X - self.center
            r = np.linalg.norm(D, axis=1, keepdims=True)
            outside = r > self.radius + MEMBERSHIP_TOL * max(1.0, self.radius)
            return np.where(outside, self.center + (self.radius / np.maximum(r, self.radius)) * D, X)
        n = self.dimension
        U = -np.sort(-X, axis=1)
        css = np.cumsum(U, axis=1)
        ks = np.arange(1, n + 1)
        positive = U - (css - 1.0) / ks > 0
        rho = n - np.argmax(positive[:, ::-1], axis=1)
        theta = (css[np.arange(X.shape[0]), rho - 1] - 1.0) / rho
        member = np.all(X >= -MEMBERSHIP_TOL, axis=1) & (
            np.abs(X.sum(axis=1) - 1.0) <= MEMBERSHIP_TOL * n
        )
        return np.where(member[:, None], X, np.maximum(X - theta[:, None], 0.0))

    def prox_weighted_l1(self, v: VectorLike, thresh: VectorLike) -> Vector:
        """argmin_z ½‖z − v‖² + Σ threshᵢ|zᵢ| over the set (thresh ≥ 0)."""
        v = self._check(v)
        thresh = np.asarray(thresh, dtype=np.float64)
        if not np.any(thresh):
            return self.project(v)
        if self.kind == SetKind.WHOLE_SPACE:
            return soft_threshold(v, thresh)
        if self.kind == SetKind.BOX:
            return np.clip(soft_threshold(v, thresh), self.lower, self.upper)
        if self.kind == SetKind.SIMPLEX:
            # |z| = z on the simplex
            return self.project(v - thresh)
        raise InvalidParameterError(
            "weighted-l1 terms are not supported on a ball (no exact separable prox)"
        )

    def minimize_linear_l1(
        self, c: VectorLike, w: Optional[VectorLike] = None
    ) -> Tuple[Vector, float]:
        """Exact minimizer and value of ⟨c, z⟩ + Σ wᵢ|zᵢ| over the set."""
        c = self._check(c)
        w = np.zeros_like(c) if w is None else np.asarray(w, dtype=np.float64)
        if self.kind == SetKind.WHOLE_SPACE:
            if np.any(np.abs(c) > w):
                raise UnboundedSubproblemError(
                    "linear objective is unbounded below on the whole space"
                )
            return np.zeros_like(c), 0.0
        if self.kind == SetKind.BOX:
            lo, hi = self.lower, self.upper
            candidates = np.stack(
                [
                    c * lo + w * np.abs(lo),
                    c * hi + w * np.abs(hi),
                    np.where((lo <= 0.0) & (hi >= 0.0), 0.0, np.inf),
                ]
            )
            pick = np.argmin(candidates, axis=0)
            z = np.choose(pick, [lo, hi, np.zeros_like(c)])
            return z, math.fsum(candidates[pick, np.arange(c.size)])
        if self.kind == SetKind.SIMPLEX:
            shifted = c + w
            i = int(np.argmin(shifted))
            z = np.zeros_like(c)
            z[i] = 1.0
            return z, float(shifted[i])
        if np.any(w):
            raise InvalidParameterError(
                "weighted-l1 terms are not supported on a ball (no exact separable prox)"
            )
        cn = np.linalg.norm(c)
        z = self.center.copy() if cn == 0.0 else self.center - (self.radius / cn) * c
        return z, float(np.dot(c, z))

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == SetKind.BOX:
            return {
                "kind": self.kind.value,
                "lower": self.lower.tolist(),
                "upper": self.upper.tolist(),
            }
        if self.kind == SetKind.BALL:
            return {
                "kind": self.kind.value,
                "center": self.center.tolist(),
                "radius": self.radius,
            }
        return {"kind": self.kind.value, "dimension": self.dimension}

    @classmethod
    def from_dict(
        cls, data: Dict[str, Any], dimension: Optional[int] = None, path: str = "set"
    ) -> "ConvexSet":
        if not isinstance(data, dict):
            raise ProblemFormatError(path, "expected an object")
        allowed = {
            SetKind.WHOLE_SPACE.value: {"kind", "dimension"},
            SetKind.SIMPLEX.value: {"kind", "dimension"},
            SetKind.BOX.value: {"kind", "lower", "upper"},
            SetKind.BALL.value: {"kind", "center", "radius"},
        }
        kind = data.get("kind")
        if kind not in allowed:
            raise ProblemFormatError(
                f"{path}.kind", f"expected one of {sorted(allowed)}, got {kind!r}"
            )
        unknown = set(data) - allowed[kind]
        if unknown:
            raise ProblemFormatError(f"{path}.{sorted(unknown)[0]}", "unknown key")
        try:
            if kind == SetKind.BOX.value:
                s = cls.box(_field(data, "lower", path), _field(data, "upper", path))
            elif kind == SetKind.BALL.value:
                s = cls.ball(_field(data, "center", path), _field(data, "radius", path))
            else:
                n = data.get("dimension", dimension)
                if n is None:
                    raise ProblemFormatError(f"{path}.dimension", "missing")
                s = (
                    cls.whole_space(n)
                    if kind == SetKind.WHOLE_SPACE.value
                    else cls.simplex(n)
                )
        except ProblemFormatError:
            raise
        except (ValueError, TypeError) as err:
            raise ProblemFormatError(path, str(err)) from err
        if dimension is not None and s.dimension != dimension:
            raise ProblemFormatError(
                path, f"set dimension {s.dimension} does not match problem dimension {dimension}"
            )
        return s


def project(S: ConvexSet, x: VectorLike) -> Vector:
    return S.project(x)


def _check_dimension(dimension: int) -> None:
    if not isinstance(dimension, (int, np.integer)) or dimension <= 0:
        raise InvalidParameterError(f"dimension must be a positive integer, got {dimension!r}")


def _field(data: Dict[str, Any], key: str, path: str) -> Any:
    if key not in data:
        raise ProblemFormatError(f"{path}.{key}", "missing")
    return data[key]
