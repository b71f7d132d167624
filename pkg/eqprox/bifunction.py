# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
"""Structured bifunctions f(x, y) = φ(x, y) + ϕ(y) − ϕ(x).

Every supported kind has a bilinear φ part of the form

    φ(x, y) = ⟨P x + Q y + q, y − x⟩

so mvi-affine (P = A, Q = 0, q = b) and rotation (P = [[0, 1], [-1, 0]])
share one code path with bilinear. The kind is kept for serialization and
for reporting.
"""
import enum
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatchError, InvalidParameterError, ProblemFormatError
from .geometry import Vector, VectorLike, as_vector
from .global_params import PSD_TOL


__all__ = [
    "Matrix",
    "BifunctionKind",
    "RegularizerKind",
    "ProfileSource",
    "Regularizer",
    "Bifunction",
    "BifunctionProfile",
    "ROTATION_MATRIX",
    "evaluate",
    "evaluate_batch",
    "y_subgradient",
    "closed_form_profile",
    "cocoercivity_modulus",
    "spectral_norm",
    "is_psd",
]


Matrix = npt.NDArray[np.float64]
MatrixLike = Union[Matrix, Sequence[Sequence[float]]]

ROTATION_MATRIX = np.array([[0.0, 1.0], [-1.0, 0.0]])
ROTATION_MATRIX.setflags(write=False)


class BifunctionKind(str, enum.Enum):
    MVI_AFFINE = "mvi-affine"
    BILINEAR = "bilinear"
    ROTATION = "rotation"


class RegularizerKind(str, enum.Enum):
    ZERO = "zero"
    WEIGHTED_L1 = "weighted-l1"
    QUADRATIC = "quadratic"


class ProfileSource(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    ESTIMATED = "estimated"


def as_matrix(
    m: MatrixLike, dimension: Optional[int] = None, what: str = "matrix"
) -> Matrix:
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        raise InvalidParameterError(f"{what} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError(f"{what} has non-finite entries")
    if dimension is not None and a.shape[0] != dimension:
        raise DimensionMismatchError(dimension, a.shape[0], what)
    a.setflags(write=False)
    return a


def sym(m: Matrix) -> Matrix:
    return 0.5 * (m + m.T)


def spectral_norm(m: Matrix) -> float:
    return float(np.linalg.norm(m, 2))


def is_symmetric(m: Matrix) -> bool:
    return bool(np.allclose(m, m.T, rtol=0.0, atol=PSD_TOL * max(1.0, np.abs(m).max())))


def is_psd(m: Matrix, tol: float = PSD_TOL) -> bool:
    """Cholesky test of the symmetric part shifted by `tol`."""
    try:
        np.linalg.cholesky(sym(m) + tol * np.eye(m.shape[0]))
    except np.linalg.LinAlgError:
        return False
    return True


def _require_symmetric_psd(m: Matrix, what: str) -> None:
    if not is_symmetric(m):
        raise InvalidParameterError(f"{what} must be symmetric")
    if not is_psd(m):
        raise InvalidParameterError(
            f"{what} must be positive semidefinite (smallest eigenvalue "
            f"{np.linalg.eigvalsh(sym(m))[0]:.3e})"
        )


@dataclass(frozen=True, eq=False)
class Regularizer:
    """Convex ϕ: zero, Σ wᵢ|yᵢ| with w ≥ 0, or ½ yᵀHy + hᵀy with H PSD."""

    kind: RegularizerKind = RegularizerKind.ZERO
    weights: Optional[Vector] = None
    H: Optional[Matrix] = None
    h: Optional[Vector] = None

    @classmethod
    def zero(cls) -> "Regularizer":
        return cls()

    @classmethod
    def weighted_l1(cls, weights: VectorLike) -> "Regularizer":
        w = as_vector(weights, what="weighted-l1 weights")
        if np.any(w < 0):
            raise InvalidParameterError(f"weighted-l1 weights must be >= 0, got {w.tolist()}")
        return cls(RegularizerKind.WEIGHTED_L1, weights=w)

    @classmethod
    def quadratic(cls, H: MatrixLike, h: Optional[VectorLike] = None) -> "Regularizer":
        H = as_matrix(H, what="quadratic regularizer H")
        _require_symmetric_psd(H, "quadratic regularizer H")
        n = H.shape[0]
        h = as_vector(np.zeros(n) if h is None else h, n, what="quadratic regularizer h")
        return cls(RegularizerKind.QUADRATIC, H=H, h=h)

    @property
    def dimension(self) -> Optional[int]:
        if self.kind == RegularizerKind.WEIGHTED_L1:
            return self.weights.size
        if self.kind == RegularizerKind.QUADRATIC:
            return self.H.shape[0]
        return None

    @property
    def l1_weights(self) -> Optional[Vector]:
        return self.weights if self.kind == RegularizerKind.WEIGHTED_L1 else None

    @property
    def curvature(self) -> float:
        return spectral_norm(self.H) if self.kind == RegularizerKind.QUADRATIC else 0.0

    def value(self, y: Vector) -> float:
        if self.kind == RegularizerKind.WEIGHTED_L1:
            return float(np.dot(self.weights, np.abs(y)))
        if self.kind == RegularizerKind.QUADRATIC:
            return float(0.5 * np.dot(y, self.H @ y) + np.dot(self.h, y))
        return 0.0

    def value_batch(self, Y: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        if self.kind == RegularizerKind.WEIGHTED_L1:
            return np.abs(Y) @ self.weights
        if self.kind == RegularizerKind.QUADRATIC:
            return 0.5 * np.einsum("ij,jk,ik->i", Y, self.H, Y) + Y @ self.h
        return np.zeros(Y.shape[0])

    def subgradient(self, y: Vector) -> Vector:
        # np.sign picks the 0 element at kinks
        if self.kind == RegularizerKind.WEIGHTED_L1:
            return self.weights * np.sign(y)
        if self.kind == RegularizerKind.QUADRATIC:
            return self.H @ y + self.h
        return np.zeros_like(y)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == RegularizerKind.WEIGHTED_L1:
            return {"kind": self.kind.value, "w": self.weights.tolist()}
        if self.kind == RegularizerKind.QUADRATIC:
            return {"kind": self.kind.value, "H": self.H.tolist(), "h": self.h.tolist()}
        return {"kind": self.kind.value}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], path: str = "regularizer") -> "Regularizer":
        allowed = {
            RegularizerKind.ZERO.value: {"kind"},
            RegularizerKind.WEIGHTED_L1.value: {"kind", "w"},
            RegularizerKind.QUADRATIC.value: {"kind", "H", "h"},
        }
        kind = _check_keys(data, allowed, path)
        try:
            if kind == RegularizerKind.WEIGHTED_L1.value:
                return cls.weighted_l1(_field(data, "w", path))
            if kind == RegularizerKind.QUADRATIC.value:
                return cls.quadratic(_field(data, "H", path), data.get("h"))
        except ProblemFormatError:
            raise
        except (ValueError, TypeError) as err:
            raise ProblemFormatError(path, str(err)) from err
        return cls.zero()


@dataclass(frozen=True, eq=False)
class Bifunction:
    kind: BifunctionKind
    P: Matrix
    Q: Matrix
    q: Vector
    regularizer: Regularizer = Regularizer()

    def __post_init__(self):
        n = self.dimension
        assert self.Q.shape == (n, n) and self.q.shape == (n,), (
            f"inconsistent bifunction data: P {self.P.shape}, Q {self.Q.shape}, q {self.q.shape}"
        )
        reg_dim = self.regularizer.dimension
        if reg_dim is not None and reg_dim != n:
            raise DimensionMismatchError(n, reg_dim, "regularizer")

    @classmethod
    def mvi_affine(
        cls,
        A: MatrixLike,
        b: Optional[VectorLike] = None,
        regularizer: Optional[Regularizer] = None,
    ) -> "Bifunction":
        """f(x, y) = ⟨Ax + b, y − x⟩ + ϕ(y) − ϕ(x)."""
        A = as_matrix(A, what="A")
        n = A.shape[0]
        b = as_vector(np.zeros(n) if b is None else b, n, what="b")
        return cls(
            BifunctionKind.MVI_AFFINE, A, _zeros(n), b, regularizer or Regularizer.zero()
        )

    @classmethod
    def bilinear(
        cls,
        P: MatrixLike,
        Q: MatrixLike,
        q: Optional[VectorLike] = None,
        regularizer: Optional[Regularizer] = None,
    ) -> "Bifunction":
        """f(x, y) = ⟨Px + Qy + q, y − x⟩ + ϕ(y) − ϕ(x) with Q symmetric PSD."""
        P = as_matrix(P, what="P")
        n = P.shape[0]
        Q = as_matrix(Q, n, what="Q")
        _require_symmetric_psd(Q, "Q")
        q = as_vector(np.zeros(n) if q is None else q, n, what="q")
        return cls(BifunctionKind.BILINEAR, P, Q, q, regularizer or Regularizer.zero())

    @classmethod
    def rotation(cls, regularizer: Optional[Regularizer] = None) -> "Bifunction":
        return cls(
            BifunctionKind.ROTATION,
            ROTATION_MATRIX,
            _zeros(2),
            as_vector(np.zeros(2)),
            regularizer or Regularizer.zero(),
        )

    @property
    def dimension(self) -> int:
        return self.P.shape[0]

    @property
    def A(self) -> Matrix:
        """The affine operator F(x) = Ax + b of an MVI-type bifunction."""
        assert self.kind != BifunctionKind.BILINEAR, "bilinear bifunctions have no A"
        return self.P

    @property
    def b(self) -> Vector:
        assert self.kind != BifunctionKind.BILINEAR, "bilinear bifunctions have no b"
        return self.q

    @property
    def linear_in_y(self) -> bool:
        """True when f(x, ·) is affine up to the weighted-l1 part of ϕ."""
        return (not np.any(self.Q)) and self.regularizer.curvature == 0.0

    def linear_y_coefficient(self, x: Vector) -> Vector:
        """c with f(x, y) = ⟨c, y − x⟩ + l1(y) − l1(x), valid when `linear_in_y`."""
        assert self.linear_in_y, "f(x, .) has curvature"
        c = self.P @ x + self.q
        if self.regularizer.kind == RegularizerKind.QUADRATIC:
            c = c + self.regularizer.h
        return c

    @property
    def y_hessian(self) -> Matrix:
        H = self.Q + self.Q.T
        if self.regularizer.kind == RegularizerKind.QUADRATIC:
            H = H + self.regularizer.H
        return H

    @property
    def monotonicity_matrix(self) -> Matrix:
        """S with f(x, y) + f(y, x) = −(x − y)ᵀ S (x − y)."""
        return sym(self.P - self.Q)

    @property
    def lipschitz_matrix(self) -> Matrix:
        """D with f(u, v) + f(v, w) − f(u, w) = ⟨D(u − v), v − w⟩."""
        return self.P - self.Q.T

    @property
    def y_curvature(self) -> float:
        """Upper bound on the Hessian of y ↦ f(x, y) (its smooth part)."""
        return spectral_norm(self.y_hessian)

    def is_monotone(self) -> bool:
        return bool(np.linalg.eigvalsh(self.monotonicity_matrix)[0] >= -PSD_TOL)

    def check_point(self, x: VectorLike) -> Vector:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.size != self.dimension:
            raise DimensionMismatchError(self.dimension, x.shape[-1] if x.ndim else 0)
        return x

    def operator(self, x: Vector, y: Vector) -> Vector:
        return self.P @ x + self.Q @ y + self.q

    def evaluate(self, x: VectorLike, y: VectorLike) -> float:
        x, y = self.check_point(x), self.check_point(y)
        phi = float(np.dot(self.operator(x, y), y - x))
        return phi + self.regularizer.value(y) - self.regularizer.value(x)

    def evaluate_batch(
        self, X: npt.NDArray[np.float64], Y: npt.NDArray[np.float64]
    ) -> npt.NDArray[np.float64]:
        """Row-wise f(X[i], Y[i])."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
        if X.shape != Y.shape or X.shape[1] != self.dimension:
            raise DimensionMismatchError(self.dimension, Y.shape[1], "sample rows")
        V = X @ self.P.T + Y @ self.Q.T + self.q
        phi = np.einsum("ij,ij->i", V, Y - X)
        return phi + self.regularizer.value_batch(Y) - self.regularizer.value_batch(X)

    def smooth_y_gradient(self, x: Vector, y: Vector) -> Vector:
        """Gradient in y of φ(x, y) plus the quadratic part of ϕ, l1 excluded."""
        g = self.operator(x, y) + self.Q.T @ (y - x)
        if self.regularizer.kind == RegularizerKind.QUADRATIC:
            g = g + self.regularizer.subgradient(y)
        return g

    def y_subgradient(self, x: VectorLike, y: VectorLike) -> Vector:
        x, y = self.check_point(x), self.check_point(y)
        return self.operator(x, y) + self.Q.T @ (y - x) + self.regularizer.subgradient(y)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == BifunctionKind.MVI_AFFINE:
            return {"kind": self.kind.value, "A": self.P.tolist(), "b": self.q.tolist()}
        if self.kind == BifunctionKind.BILINEAR:
            return {
                "kind": self.kind.value,
                "P": self.P.tolist(),
                "Q": self.Q.tolist(),
                "q": self.q.tolist(),
            }
        return {"kind": self.kind.value}

    @classmethod
    def from_dict(
        cls,
        data: Dict[str, Any],
        regularizer: Optional[Regularizer] = None,
        dimension: Optional[int] = None,
        path: str = "bifunction",
    ) -> "Bifunction":
        allowed = {
            BifunctionKind.MVI_AFFINE.value: {"kind", "A", "b"},
            BifunctionKind.BILINEAR.value: {"kind", "P", "Q", "q"},
            BifunctionKind.ROTATION.value: {"kind"},
        }
        kind = _check_keys(data, allowed, path)
        try:
            if kind == BifunctionKind.MVI_AFFINE.value:
                f = cls.mvi_affine(_field(data, "A", path), data.get("b"), regularizer)
            elif kind == BifunctionKind.BILINEAR.value:
                f = cls.bilinear(
                    _field(data, "P", path), _field(data, "Q", path), data.get("q"), regularizer
                )
            else:
                f = cls.rotation(regularizer)
        except ProblemFormatError:
            raise
        except (ValueError, TypeError) as err:
            raise ProblemFormatError(path, str(err)) from err
        if dimension is not None and f.dimension != dimension:
            raise ProblemFormatError(
                path, f"bifunction dimension {f.dimension} does not match problem dimension {dimension}"
            )
        return f

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Bifunction):
            return NotImplemented
        return (
            self.to_dict() == other.to_dict()
            and self.regularizer.to_dict() == other.regularizer.to_dict()
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class BifunctionProfile:
    """Monotonicity and Lipschitz-type constants of a bifunction.

    `lipschitz_F` is the Lipschitz constant of the operator F of an
    MVI-type bifunction and is None for bilinear ones.
    """

    tau: float
    L1: float
    L2: float
    M: float
    lipschitz_F: Optional[float] = None
    cocoercivity: float = 0.0
    source: ProfileSource = ProfileSource.CLOSED_FORM

    def __post_init__(self):
        for name in ("tau", "L1", "L2", "M", "cocoercivity"):
            value = getattr(self, name)
            assert value >= 0 and math.isfinite(value), f"profile.{name} = {value}"

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["source"] = self.source.value
        return d


def evaluate(f: Bifunction, x: VectorLike, y: VectorLike) -> float:
    return f.evaluate(x, y)


def evaluate_batch(
    f: Bifunction, X: npt.NDArray[np.float64], Y: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    return f.evaluate_batch(X, Y)


def y_subgradient(f: Bifunction, x: VectorLike, y: VectorLike) -> Vector:
    return f.y_subgradient(x, y)


def cocoercivity_modulus(A: MatrixLike) -> float:
    """Largest δ with ⟨Ax − Ay, x − y⟩ ≥ δ‖Ax − Ay‖² when it has a closed form.

    Symmetric PSD A gives 1/λ_max(A). For nonsymmetric A with a positive
    definite symmetric part τ/‖A‖² is a valid (not always tight) modulus.
    Anything else reports 0.
    """
    A = as_matrix(A, what="A")
    if is_symmetric(A):
        eigs = np.linalg.eigvalsh(sym(A))
        if eigs[0] < -PSD_TOL or eigs[-1] <= 0:
            return 0.0
        return float(1.0 / eigs[-1])
    tau = float(np.linalg.eigvalsh(sym(A))[0])
    if tau <= 0:
        return 0.0
    return tau / spectral_norm(A) ** 2


def closed_form_profile(f: Bifunction) -> BifunctionProfile:
    tau = max(float(np.linalg.eigvalsh(f.monotonicity_matrix)[0]), 0.0)
    d = spectral_norm(f.lipschitz_matrix)
    if f.kind == BifunctionKind.BILINEAR:
        lipschitz_F, cocoercivity = None, 0.0
    else:
        lipschitz_F, cocoercivity = spectral_norm(f.A), cocoercivity_modulus(f.A)
    return BifunctionProfile(
        tau=tau,
        L1=d / 2,
        L2=d / 2,
        M=d * d,
        lipschitz_F=lipschitz_F,
        cocoercivity=cocoercivity,
    )


def _zeros(n: int) -> Matrix:
    z = np.zeros((n, n))
    z.setflags(write=False)
    return z


def _check_keys(data: Any, allowed: Dict[str, set], path: str) -> str:
    if not isinstance(data, dict):
        raise ProblemFormatError(path, "expected an object")
    kind = data.get("kind")
    if kind not in allowed:
        raise ProblemFormatError(f"{path}.kind", f"expected one of {sorted(allowed)}, got {kind!r}")
    unknown = set(data) - allowed[kind]
    if unknown:
        raise ProblemFormatError(f"{path}.{sorted(unknown)[0]}", "unknown key")
    return kind


def _field(data: Dict[str, Any], key: str, path: str) -> Any:
    if key not in data:
        raise ProblemFormatError(f"{path}.{key}", "missing")
    return data[key]
