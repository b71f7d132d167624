# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import math

import pytest

from eqprox import bounds
from eqprox.bifunction import BifunctionProfile
from eqprox.errors import InvalidParameterError
from eqprox.problems import builtin


@pytest.fixture
def strong():
    # tau = 2, L1 = L2 = 1.5, M = 9
    return builtin("bilinear-strong").profile


def test_quasicontraction(strong):
    low, high = bounds.quasicontraction_lambda_range(strong)
    assert low == 0.0 and high == pytest.approx(1.0 / 3.0)
    assert bounds.quasicontraction_factor(strong, 0.3) == pytest.approx(math.sqrt(0.7))
    assert bounds.quasicontraction_factor(strong, 0.4) is None


def test_quasicontraction_needs_hypotheses():
    assert bounds.quasicontraction_factor(builtin("rotation").profile, 0.1) is None
    # L1 + L2 <= tau
    easy = BifunctionProfile(tau=1.0, L1=0.2, L2=0.3, M=1.0)
    assert bounds.quasicontraction_factor(easy, 0.1) is None


def test_contraction_range(strong):
    assert bounds.contraction_lambda_range(strong) == pytest.approx((0.0, 4.0 / 9.0))
    assert bounds.contraction_lambda_range(builtin("rotation").profile) == bounds.EMPTY
    flat = BifunctionProfile(tau=1.0, L1=0.0, L2=0.0, M=0.0)
    assert bounds.contraction_lambda_range(flat) == (0.0, math.inf)


def test_epsilon(strong):
    assert bounds.epsilon_bound(strong, 0.5) == pytest.approx(3.25)
    assert bounds.lambda_for_epsilon(strong, 1.0) == pytest.approx(1.0 / 3.0)
    flat = BifunctionProfile(tau=0.0, L1=0.0, L2=0.0, M=0.0)
    assert bounds.lambda_for_epsilon(flat, 0.1) == math.inf
    with pytest.raises(InvalidParameterError, match="epsilon"):
        bounds.lambda_for_epsilon(strong, 0.0)


def test_composite_range(strong):
    assert bounds.composite_lambda_range(strong) == pytest.approx((0.0, 1.0 / 3.0))
    rot = builtin("rotation").profile
    assert bounds.composite_lambda_range(rot) == pytest.approx((0.0, 1.0))


def test_nonexpansive_ranges():
    ranges = bounds.nonexpansive_lambda_ranges(builtin("mvi-cocoercive").profile)
    assert ranges["derived"] == pytest.approx((0.0, 0.5))
    assert ranges["stated"] == pytest.approx((0.0, 2.0))
    empty = bounds.nonexpansive_lambda_ranges(builtin("rotation").profile)
    assert empty == {"derived": bounds.EMPTY, "stated": bounds.EMPTY}


@pytest.mark.parametrize("lam", [0.0, -1.0, float("nan"), float("inf")])
def test_rejects_bad_lambda(strong, lam):
    with pytest.raises(InvalidParameterError, match="lambda"):
        bounds.epsilon_bound(strong, lam)
    with pytest.raises(InvalidParameterError, match="lambda"):
        bounds.quasicontraction_factor(strong, lam)


def test_in_range():
    r = (0.0, 0.5)
    assert bounds.in_range(0.25, r)
    assert not bounds.in_range(0.5, r)
    assert bounds.in_range(0.5, r, closed=True)
    assert not bounds.in_range(0.0, r, closed=True)
    assert not bounds.in_range(0.0, bounds.EMPTY, closed=True)
