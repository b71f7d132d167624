# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
"""λ ranges and contraction constants derived from a BifunctionProfile.

Ranges are open-closed pairs (low, high); an empty range is returned as
(0.0, 0.0).
"""
import math
from typing import Dict, Optional, Tuple

from .bifunction import BifunctionProfile
from .errors import InvalidParameterError


Range = Tuple[float, float]
EMPTY: Range = (0.0, 0.0)


def _positive(lam: float) -> float:
    if not (math.isfinite(lam) and lam > 0):
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    return float(lam)


def _half_inverse(c: float) -> float:
    return math.inf if c == 0 else 1.0 / (2.0 * c)


def quasicontraction_lambda_range(profile: BifunctionProfile) -> Range:
    return (0.0, _half_inverse(profile.L2))


def quasicontraction_factor(profile: BifunctionProfile, lam: float) -> Optional[float]:
    """√(1 − 2λ(τ − L1)) when τ > 0, L1 + L2 > τ and λ < 1/(2 L2); else None."""
    lam = _positive(lam)
    tau, L1, L2 = profile.tau, profile.L1, profile.L2
    if tau <= 0 or L1 + L2 <= tau or lam >= quasicontraction_lambda_range(profile)[1]:
        return None
    radicand = 1.0 - 2.0 * lam * (tau - L1)
    if radicand <= 0:
        return None
    return math.sqrt(radicand)


def contraction_lambda_range(profile: BifunctionProfile) -> Range:
    if profile.tau <= 0:
        return EMPTY
    if profile.M == 0:
        return (0.0, math.inf)
    return (0.0, 2.0 * profile.tau / profile.M)


def epsilon_bound(profile: BifunctionProfile, lam: float) -> float:
    """1 + λ²M, the squared expansion bound of B_λ."""
    lam = _positive(lam)
    return 1.0 + lam * lam * profile.M


def lambda_for_epsilon(profile: BifunctionProfile, eps: float) -> float:
    """Largest λ with λ²M ≤ ε (inf when M = 0)."""
    if not eps > 0:
        raise InvalidParameterError(f"epsilon must be positive, got {eps}")
    if profile.M == 0:
        return math.inf
    return math.sqrt(eps / profile.M)


def composite_lambda_range(profile: BifunctionProfile) -> Range:
    return (0.0, min(_half_inverse(profile.L1), _half_inverse(profile.L2)))


def nonexpansive_lambda_ranges(profile: BifunctionProfile) -> Dict[str, Range]:
    """Cocoercive ranges for B_λ of an MVI.

    "derived" is (0, 2δ], which the contraction argument supports; "stated"
    is the wider (0, 1/(2δ)] that is reported but not relied on.
    """
    delta = profile.cocoercivity
    if delta <= 0:
        return {"derived": EMPTY, "stated": EMPTY}
    return {"derived": (0.0, 2.0 * delta), "stated": (0.0, 1.0 / (2.0 * delta))}


def in_range(lam: float, r: Range, closed: bool = False) -> bool:
    low, high = r
    return low < lam < high or (closed and lam == high and high > low)
