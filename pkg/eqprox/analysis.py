# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
"""Sampled checks of monotonicity, Lipschitz-type and mapping properties.

Every check draws uniform samples from the SampleSpec box, projects them
onto the set when one is given, drops degenerate tuples, and then refines
the worst samples with a coordinate search. A report is violated only when
its witness re-evaluates above the check's tolerance.
"""
import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import bounds
from .bifunction import (
    Bifunction,
    BifunctionKind,
    BifunctionProfile,
    MatrixLike,
    ProfileSource,
    as_matrix,
    closed_form_profile,
    cocoercivity_modulus,
)
from .errors import InvalidParameterError, NotAFixedPointError
from .geometry import ConvexSet, SetKind, Vector, VectorLike, as_vector
from .global_params import (
    ANALYSIS_MAP_TOL,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
    DEGENERATE_DISTANCE,
    EXACT_TOL,
    FIXED_POINT_CERT_TOL,
    IDENTITY_TOL,
    LOW_CONFIDENCE_SAMPLES,
    MAX_RESAMPLE_ROUNDS,
    MODULUS_CLASS_TOL,
    REFINE_ROUNDS,
    REFINE_STEP,
    REFINE_WORST,
    SAMPLE_HIGH,
    SAMPLE_LOW,
    SOLVER_TOL,
)
from .proxmaps import MapKind, evaluate_map, evaluate_map_rows


__all__ = [
    "Arity",
    "Verdict",
    "SampleSpec",
    "PropertyReport",
    "check_monotone",
    "estimate_strong_monotonicity",
    "check_pseudomonotone",
    "estimate_lipschitz_type",
    "estimate_map_expansion",
    "check_quasicontraction",
    "check_firmly_nonexpansive",
    "check_cocoercive",
    "check_epsilon_nonexpansive",
    "check_contraction",
    "check_strongly_lipschitz_mvi",
    "estimate_profile",
    "classify_modulus",
]


Points = List[np.ndarray]
Evaluator = Callable[[Points], Tuple[np.ndarray, Optional[np.ndarray]]]


class Arity(str, enum.Enum):
    SINGLE = "single"
    PAIR = "pair"
    TRIPLE = "triple"

    @property
    def size(self) -> int:
        return {"single": 1, "pair": 2, "triple": 3}[self.value]


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    VIOLATED = "violated"


@dataclass(frozen=True)
class SampleSpec:
    """Sampling box, count and seed.

    `arity` is informational; each check draws the tuples it needs.
    `refine` is how many of the worst samples get a local search.
    """

    count: int = DEFAULT_SAMPLE_COUNT
    lower: Union[float, Sequence[float]] = SAMPLE_LOW
    upper: Union[float, Sequence[float]] = SAMPLE_HIGH
    seed: int = DEFAULT_SEED
    arity: Optional[Arity] = None
    refine: int = REFINE_WORST

    def __post_init__(self):
        if not (isinstance(self.count, (int, np.integer)) and self.count >= 1):
            raise InvalidParameterError(f"sample count must be >= 1, got {self.count!r}")
        if not (isinstance(self.refine, (int, np.integer)) and self.refine >= 0):
            raise InvalidParameterError(f"refine must be >= 0, got {self.refine!r}")
        lo, hi = np.asarray(self.lower, dtype=np.float64), np.asarray(self.upper, dtype=np.float64)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(lo < hi)):
            raise InvalidParameterError(
                f"sampling region needs finite bounds with lower < upper, got {self.lower}, {self.upper}"
            )

    def bounds(self, dimension: int) -> Tuple[Vector, Vector]:
        lo = np.broadcast_to(np.asarray(self.lower, dtype=np.float64), (dimension,))
        hi = np.broadcast_to(np.asarray(self.upper, dtype=np.float64), (dimension,))
        return lo, hi


@dataclass
class PropertyReport:
    property: str
    verdict: Verdict
    worst_violation: float
    worst_witness: Optional[List[Vector]]
    estimated_modulus: Optional[float]
    samples_used: int
    seed: int
    tolerance: float
    classification: Optional[str] = None
    low_confidence: bool = False
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.HOLDS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "property": self.property,
            "verdict": self.verdict.value,
            "worst_violation": _finite_or_none(self.worst_violation),
            "worst_witness": None
            if self.worst_witness is None
            else [w.tolist() for w in self.worst_witness],
            "estimated_modulus": _finite_or_none(self.estimated_modulus),
            "samples_used": self.samples_used,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "classification": self.classification,
            "low_confidence": self.low_confidence,
            "details": self.details,
        }


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def classify_modulus(modulus: float) -> str:
    if modulus < 1.0 - MODULUS_CLASS_TOL:
        return "contraction"
    if modulus <= 1.0 + MODULUS_CLASS_TOL:
        return "nonexpansive"
    return "epsilon-expansive"


# Sampling


class _Sampler:
    def __init__(self, spec: SampleSpec, dimension: int, S: Optional[ConvexSet]):
        self.spec = spec
        self.lo, self.hi = spec.bounds(dimension)
        self.S = None if S is None or S.kind == SetKind.WHOLE_SPACE else S
        self.rng = np.random.default_rng(spec.seed)

    def place(self, row: Vector) -> Vector:
        row = np.clip(row, self.lo, self.hi)
        return row if self.S is None else self.S.project(row)

    def draw(self, m: int) -> np.ndarray:
        X = self.rng.uniform(self.lo, self.hi, size=(m, self.lo.size))
        return X if self.S is None else self.S.project_rows(X)

    def sample(self, arity: int, valid: Callable[[Points], np.ndarray]) -> Points:
        points = [self.draw(self.spec.count) for _ in range(arity)]
        for _ in range(MAX_RESAMPLE_ROUNDS):
            bad = ~valid(points)
            if not bad.any():
                break
            for p in points:
                p[bad] = self.draw(int(bad.sum()))
        keep = valid(points)
        return [p[keep] for p in points]


def _pair_distinct(points: Points) -> np.ndarray:
    return np.linalg.norm(points[0] - points[1], axis=1) >= DEGENERATE_DISTANCE


def _triple_distinct(points: Points) -> np.ndarray:
    u, v, w = points
    return (np.linalg.norm(u - v, axis=1) >= DEGENERATE_DISTANCE) & (
        np.linalg.norm(v - w, axis=1) >= DEGENERATE_DISTANCE
    )


def _away_from(center: Vector) -> Callable[[Points], np.ndarray]:
    return lambda points: np.linalg.norm(points[0] - center, axis=1) >= DEGENERATE_DISTANCE


def _take(points: Points, i: int) -> Points:
    return [p[i : i + 1].copy() for p in points]


def _refine(
    evaluate: Evaluator,
    which: int,
    start: Points,
    sampler: _Sampler,
    valid: Callable[[Points], np.ndarray],
) -> Points:
    """Coordinate search maximizing evaluate(.)[which]; halves the step when stuck."""
    cur = start
    best = evaluate(cur)[which][0]
    step = REFINE_STEP * float(np.max(sampler.hi - sampler.lo))
    for _ in range(REFINE_ROUNDS):
        improved = False
        for j in range(len(cur)):
            for i in range(cur[j].shape[1]):
                for sign in (1.0, -1.0):
                    cand = [p.copy() for p in cur]
                    row = cand[j][0].copy()
                    row[i] += sign * step
                    cand[j][0] = sampler.place(row)
                    if not valid(cand)[0]:
                        continue
                    score = evaluate(cand)[which][0]
                    if score > best:
                        cur, best, improved = cand, score, True
        if not improved:
            step *= 0.5
    return cur


def _run_check(
    name: str,
    spec: SampleSpec,
    sampler: _Sampler,
    arity: int,
    valid: Callable[[Points], np.ndarray],
    evaluate: Evaluator,
    tol: float,
    modulus: Optional[Callable[[float], float]] = None,
    refine_ratio: bool = False,
    details: Optional[Dict[str, Any]] = None,
) -> PropertyReport:
    points = sampler.sample(arity, valid)
    used = points[0].shape[0]
    details = dict(details or {})
    if used == 0:
        return PropertyReport(
            name, Verdict.HOLDS, 0.0, None, None, 0, spec.seed, tol,
            low_confidence=True, details=details,
        )
    violation, ratio = evaluate(points)

    if spec.refine:
        starts = [(0, i) for i in np.argsort(-violation, kind="stable")[: spec.refine]]
        if refine_ratio and ratio is not None:
            starts += [(1, i) for i in np.argsort(-ratio, kind="stable")[: spec.refine]]
        refined = [_refine(evaluate, w, _take(points, i), sampler, valid) for w, i in starts]
        extra = [np.concatenate([r[j] for r in refined]) for j in range(arity)]
        extra_violation, extra_ratio = evaluate(extra)
        points = [np.concatenate([p, e]) for p, e in zip(points, extra)]
        violation = np.concatenate([violation, extra_violation])
        if ratio is not None:
            ratio = np.concatenate([ratio, extra_ratio])
        details["refined"] = len(refined)

    w = int(np.argmax(violation))
    witness = _take(points, w)
    worst = float(evaluate(witness)[0][0])
    estimated = None
    if modulus is not None and ratio is not None:
        finite = ratio[np.isfinite(ratio)]
        estimated = modulus(float(finite.max())) if finite.size else None
    return PropertyReport(
        property=name,
        verdict=Verdict.VIOLATED if worst > tol else Verdict.HOLDS,
        worst_violation=worst,
        worst_witness=[p[0] for p in witness],
        estimated_modulus=estimated,
        samples_used=used,
        seed=spec.seed,
        tolerance=tol,
        low_confidence=used < LOW_CONFIDENCE_SAMPLES,
        details=details,
    )


def _sq_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", a - b, a - b)


def _pair_sum(f: Bifunction, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise f(x, y) + f(y, x) as −(x − y)ᵀ sym(P − Q) (x − y).

    The regularizer terms cancel, so a skew P − Q gives exactly 0.
    """
    D = X - Y
    return 0.0 - np.einsum("ij,jk,ik->i", D, f.monotonicity_matrix, D)


# Bifunction properties


def check_monotone(
    f: Bifunction, spec: SampleSpec = SampleSpec(), S: Optional[ConvexSet] = None
) -> PropertyReport:
    """max f(x, y) + f(y, x) over sampled pairs; holds when ≤ 1e-9."""

    def evaluate(p: Points):
        return _pair_sum(f, p[0], p[1]), None

    sampler = _Sampler(spec, f.dimension, S)
    return _run_check("monotone", spec, sampler, 2, _pair_distinct, evaluate, EXACT_TOL)


def estimate_strong_monotonicity(
    f: Bifunction,
    spec: SampleSpec = SampleSpec(),
    S: Optional[ConvexSet] = None,
    tau: Optional[float] = None,
) -> PropertyReport:
    """Estimates min −(f(x,y) + f(y,x))/‖x − y‖² and checks it against `tau`.

    `tau` defaults to the closed-form modulus.
    """
    tau = closed_form_profile(f).tau if tau is None else float(tau)

    def evaluate(p: Points):
        total = _pair_sum(f, p[0], p[1])
        d2 = _sq_dist(p[0], p[1])
        return total + tau * d2, total / d2

    sampler = _Sampler(spec, f.dimension, S)
    return _run_check(
        "strong-monotone", spec, sampler, 2, _pair_distinct, evaluate, EXACT_TOL,
        modulus=lambda best: max(-best, 0.0),
        refine_ratio=True,
        details={"required_modulus": tau},
    )


def check_pseudomonotone(
    f: Bifunction, spec: SampleSpec = SampleSpec(), S: Optional[ConvexSet] = None
) -> PropertyReport:
    """Among pairs with f(x, y) ≥ 0, max f(y, x); holds when ≤ 1e-9.

    The estimated modulus is the strong pseudomonotonicity constant
    min −f(y, x)/‖x − y‖² over the same pairs, clipped at 0.
    """

    def evaluate(p: Points):
        forward = f.evaluate_batch(p[0], p[1])
        backward = f.evaluate_batch(p[1], p[0])
        eligible = forward >= 0
        violation = np.where(eligible, backward, -np.inf)
        ratio = np.where(eligible, backward / _sq_dist(p[0], p[1]), -np.inf)
        return violation, ratio

    sampler = _Sampler(spec, f.dimension, S)
    report = _run_check(
        "pseudomonotone", spec, sampler, 2, _pair_distinct, evaluate, EXACT_TOL,
        modulus=lambda best: max(-best, 0.0),
    )
    if not math.isfinite(report.worst_violation):
        # no sampled pair had f(x, y) >= 0
        report.worst_violation = 0.0
        report.worst_witness = None
    return report


def estimate_lipschitz_type(
    f: Bifunction,
    spec: SampleSpec = SampleSpec(),
    S: Optional[ConvexSet] = None,
    L1: Optional[float] = None,
    L2: Optional[float] = None,
) -> PropertyReport:
    """Smallest symmetric L with f(u,v) + f(v,w) ≥ f(u,w) − L‖u−v‖² − L‖v−w‖² on samples.

    The verdict uses (L1, L2), which default to the closed-form constants.
    """
    profile = closed_form_profile(f)
    L1 = profile.L1 if L1 is None else float(L1)
    L2 = profile.L2 if L2 is None else float(L2)

    def evaluate(p: Points):
        u, v, w = p
        excess = f.evaluate_batch(u, w) - f.evaluate_batch(u, v) - f.evaluate_batch(v, w)
        a2, b2 = _sq_dist(u, v), _sq_dist(v, w)
        return excess - L1 * a2 - L2 * b2, excess / (a2 + b2)

    sampler = _Sampler(spec, f.dimension, S)
    return _run_check(
        "lipschitz-type", spec, sampler, 3, _triple_distinct, evaluate, EXACT_TOL,
        modulus=lambda best: max(best, 0.0),
        refine_ratio=True,
        details={"L1": L1, "L2": L2},
    )


def check_strongly_lipschitz_mvi(
    f: Bifunction, spec: SampleSpec = SampleSpec(), S: Optional[ConvexSet] = None
) -> PropertyReport:
    """Checks f(x,y) + f(y,z) − f(x,z) = ⟨F(x) − F(y), y − z⟩ for F(x) = Ax + b.

    This is the decomposition α(x, y) = F(x) − F(y), β = identity with a
    single term. Violations are residuals relative to 1 + Σ|f| and must stay
    within 1e-12. The estimated modulus is the sampled Lipschitz constant of F.
    """
    if f.kind == BifunctionKind.BILINEAR:
        raise InvalidParameterError("the strongly Lipschitz decomposition needs an MVI bifunction")
    A = f.A

    def evaluate(p: Points):
        x, y, z = p
        fxy, fyz, fxz = f.evaluate_batch(x, y), f.evaluate_batch(y, z), f.evaluate_batch(x, z)
        rhs = np.einsum("ij,ij->i", (x - y) @ A.T, y - z)
        scale = 1.0 + np.abs(fxy) + np.abs(fyz) + np.abs(fxz)
        lipschitz = np.linalg.norm((x - y) @ A.T, axis=1) / np.linalg.norm(x - y, axis=1)
        return np.abs(fxy + fyz - fxz - rhs) / scale, lipschitz

    sampler = _Sampler(spec, f.dimension, S)
    return _run_check(
        "strongly-lipschitz-mvi", spec, sampler, 3, _triple_distinct, evaluate, IDENTITY_TOL,
        modulus=lambda best: best,
    )


def check_cocoercive(
    A: MatrixLike,
    b: Optional[VectorLike] = None,
    spec: SampleSpec = SampleSpec(),
    delta: Optional[float] = None,
) -> PropertyReport:
    """Estimates min ⟨F(x) − F(y), x − y⟩/‖F(x) − F(y)‖² for F(x) = Ax + b.

    The verdict checks ⟨ΔF, Δx⟩ ≥ δ‖ΔF‖² with δ defaulting to the
    closed-form modulus. Pairs with ΔF = 0 carry no information and are
    skipped by the estimate.
    """
    A = as_matrix(A, what="A")
    n = A.shape[0]
    if b is not None:
        as_vector(b, n, what="b")  # F(x) − F(y) does not depend on b
    delta = cocoercivity_modulus(A) if delta is None else float(delta)

    def evaluate(p: Points):
        dx = p[0] - p[1]
        dF = dx @ A.T
        inner = np.einsum("ij,ij->i", dF, dx)
        norm2 = np.einsum("ij,ij->i", dF, dF)
        informative = norm2 > 1e-24
        ratio = np.where(informative, -inner / np.where(informative, norm2, 1.0), -np.inf)
        return delta * norm2 - inner, ratio

    sampler = _Sampler(spec, n, None)
    report = _run_check(
        "cocoercive", spec, sampler, 2, _pair_distinct, evaluate, EXACT_TOL,
        modulus=lambda best: max(-best, 0.0),
        refine_ratio=True,
        details={"required_modulus": delta},
    )
    return report


def estimate_profile(
    f: Bifunction, spec: SampleSpec = SampleSpec(), S: Optional[ConvexSet] = None
) -> BifunctionProfile:
    """Profile assembled from sampled estimates instead of closed forms."""
    tau = estimate_strong_monotonicity(f, spec, S).estimated_modulus or 0.0
    L = estimate_lipschitz_type(f, spec, S).estimated_modulus or 0.0
    lipschitz_F, cocoercivity = None, 0.0
    if f.kind != BifunctionKind.BILINEAR:
        lipschitz_F = check_strongly_lipschitz_mvi(f, spec, S).estimated_modulus
        cocoercivity = check_cocoercive(f.A, f.b, spec).estimated_modulus or 0.0
    return BifunctionProfile(
        tau=tau,
        L1=L,
        L2=L,
        M=(2 * L) ** 2,
        lipschitz_F=lipschitz_F,
        cocoercivity=cocoercivity,
        source=ProfileSource.ESTIMATED,
    )


# Mapping properties


def _pair_map_values(kind, f, S, lam, tol):
    def images(p: Points):
        return (
            evaluate_map_rows(kind, f, S, p[0], lam, tol),
            evaluate_map_rows(kind, f, S, p[1], lam, tol),
        )

    return images


def estimate_map_expansion(
    kind: Union[MapKind, str],
    lam: float,
    f: Bifunction,
    S: ConvexSet,
    spec: SampleSpec = SampleSpec(),
    bound: float = 1.0,
    tol: float = ANALYSIS_MAP_TOL,
) -> PropertyReport:
    """Sampled sup of ‖Map(x) − Map(y)‖/‖x − y‖.

    Holds when the modulus stays within `bound` + 1e-6; the default bound
    of 1 makes this a nonexpansiveness check.
    """
    kind = MapKind(kind)
    images = _pair_map_values(kind, f, S, lam, tol)

    def evaluate(p: Points):
        mx, my = images(p)
        ratio = np.linalg.norm(mx - my, axis=1) / np.linalg.norm(p[0] - p[1], axis=1)
        return ratio - bound, ratio

    sampler = _Sampler(spec, f.dimension, S)
    report = _run_check(
        f"expansion({kind.value})", spec, sampler, 2, _pair_distinct, evaluate,
        MODULUS_CLASS_TOL,
        modulus=lambda best: best,
        details={"map": kind.value, "lambda": lam, "bound": bound},
    )
    if report.estimated_modulus is not None:
        report.classification = classify_modulus(report.estimated_modulus)
        report.details["epsilon"] = max(report.estimated_modulus**2 - 1.0, 0.0)
    return report


def check_contraction(
    kind: Union[MapKind, str],
    lam: float,
    f: Bifunction,
    S: ConvexSet,
    spec: SampleSpec = SampleSpec(),
    tol: float = ANALYSIS_MAP_TOL,
) -> PropertyReport:
    """Holds when the sampled expansion modulus is below 1 − 1e-6."""
    report = estimate_map_expansion(kind, lam, f, S, spec, bound=1.0 - MODULUS_CLASS_TOL, tol=tol)
    report.property = f"contraction({MapKind(kind).value})"
    report.tolerance = 0.0
    report.verdict = Verdict.VIOLATED if report.worst_violation > 0.0 else Verdict.HOLDS
    return report


def check_epsilon_nonexpansive(
    f: Bifunction,
    S: ConvexSet,
    lam: float,
    spec: SampleSpec = SampleSpec(),
    eps: Optional[float] = None,
    kind: Union[MapKind, str] = MapKind.B,
    tol: float = ANALYSIS_MAP_TOL,
) -> PropertyReport:
    """‖Map(x) − Map(y)‖² ≤ (1 + ε)‖x − y‖² with ε defaulting to λ²M.

    `details["lambda_max"]` is the largest λ whose λ²M stays within ε
    (None when M = 0).
    """
    kind = MapKind(kind)
    profile = closed_form_profile(f)
    eps = bounds.epsilon_bound(profile, lam) - 1.0 if eps is None else float(eps)
    if eps > 0:
        lam_max = bounds.lambda_for_epsilon(profile, eps)
    else:
        lam_max = math.inf if profile.M == 0 else 0.0
    images = _pair_map_values(kind, f, S, lam, tol)

    def evaluate(p: Points):
        mx, my = images(p)
        ratio = _sq_dist(mx, my) / _sq_dist(p[0], p[1])
        return ratio - (1.0 + eps), ratio

    sampler = _Sampler(spec, f.dimension, S)
    return _run_check(
        f"epsilon-nonexpansive({kind.value})", spec, sampler, 2, _pair_distinct, evaluate,
        SOLVER_TOL,
        modulus=lambda best: best,
        details={
            "map": kind.value,
            "lambda": lam,
            "epsilon": eps,
            "bound": 1.0 + eps,
            "lambda_max": None if math.isinf(lam_max) else lam_max,
        },
    )


def check_quasicontraction(
    kind: Union[MapKind, str],
    lam: float,
    f: Bifunction,
    S: ConvexSet,
    x_star: VectorLike,
    rho: float,
    spec: SampleSpec = SampleSpec(),
    tol: float = ANALYSIS_MAP_TOL,
) -> PropertyReport:
    """max ‖Map(y) − x*‖ − ρ‖y − x*‖ over sampled y; holds when ≤ 1e-6.

    Raises NotAFixedPointError unless ‖x* − Map(x*)‖ ≤ 1e-8.
    """
    kind = MapKind(kind)
    x_star = as_vector(x_star, f.dimension, what="x_star")
    fixed = float(np.linalg.norm(evaluate_map(kind, f, S, x_star, lam, tol).output - x_star))
    if fixed > FIXED_POINT_CERT_TOL:
        raise NotAFixedPointError(fixed, FIXED_POINT_CERT_TOL)

    def evaluate(p: Points):
        mapped = evaluate_map_rows(kind, f, S, p[0], lam, tol)
        dist_in = np.linalg.norm(p[0] - x_star, axis=1)
        dist_out = np.linalg.norm(mapped - x_star, axis=1)
        return dist_out - rho * dist_in, dist_out / dist_in

    sampler = _Sampler(spec, f.dimension, S)
    return _run_check(
        f"quasicontraction({kind.value})", spec, sampler, 1, _away_from(x_star), evaluate,
        SOLVER_TOL,
        modulus=lambda best: best,
        details={"map": kind.value, "lambda": lam, "rho": rho, "x_star": x_star.tolist()},
    )


def check_firmly_nonexpansive(
    kind: Union[MapKind, str],
    lam: float,
    f: Bifunction,
    S: ConvexSet,
    spec: SampleSpec = SampleSpec(),
    tol: float = ANALYSIS_MAP_TOL,
) -> PropertyReport:
    """max ‖ΔMap‖² − ‖Δx‖² + ‖Δx − ΔMap‖² over sampled pairs; holds when ≤ 1e-6."""
    kind = MapKind(kind)
    images = _pair_map_values(kind, f, S, lam, tol)

    def evaluate(p: Points):
        mx, my = images(p)
        d_in = p[0] - p[1]
        d_out = mx - my
        lhs = np.einsum("ij,ij->i", d_out, d_out) + _sq_dist(d_in, d_out)
        d2 = np.einsum("ij,ij->i", d_in, d_in)
        return lhs - d2, lhs / d2

    sampler = _Sampler(spec, f.dimension, S)
    return _run_check(
        f"firmly-nonexpansive({kind.value})", spec, sampler, 2, _pair_distinct, evaluate,
        SOLVER_TOL,
        modulus=lambda best: best,
        details={"map": kind.value, "lambda": lam},
    )
