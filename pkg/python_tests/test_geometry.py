# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pytest_utils import assert_close

from eqprox.errors import (
    DimensionMismatchError,
    InvalidParameterError,
    ProblemFormatError,
    UnboundedSubproblemError,
)
from eqprox.geometry import ConvexSet, SetKind, as_vector, inner, norm, project

finite = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False, allow_infinity=False)
vectors3 = st.lists(finite, min_size=3, max_size=3).map(np.array)

SETS = [
    ConvexSet.whole_space(3),
    ConvexSet.box([-1.0, 0.0, -2.0], [1.0, 0.5, 3.0]),
    ConvexSet.ball([0.5, -0.5, 0.0], 1.5),
    ConvexSet.simplex(3),
]


def test_as_vector_is_read_only_copy():
    src = [1.0, 2.0]
    v = as_vector(src)
    assert v.dtype == np.float64
    with pytest.raises(ValueError):
        v[0] = 3.0


def test_as_vector_rejects_bad_input():
    with pytest.raises(InvalidParameterError, match="non-finite"):
        as_vector([1.0, float("nan")])
    with pytest.raises(InvalidParameterError, match="one-dimensional"):
        as_vector([[1.0, 2.0]])
    with pytest.raises(DimensionMismatchError, match="expected 3, got 2"):
        as_vector([1.0, 2.0], 3)


def test_inner_and_norm():
    assert inner([1.0, 2.0], [3.0, -1.0]) == 1.0
    assert norm([3.0, 4.0]) == 5.0
    with pytest.raises(DimensionMismatchError):
        inner([1.0], [1.0, 2.0])


@pytest.mark.parametrize("S", SETS, ids=lambda s: s.kind.value)
@settings(max_examples=60, deadline=None)
@given(x=vectors3)
def test_projection_lands_in_set_and_is_idempotent(S, x):
    p = S.project(x)
    assert S.contains(p, 1e-9)
    assert_close(S.project(p), p, atol=1e-12)


@pytest.mark.parametrize("S", SETS, ids=lambda s: s.kind.value)
@settings(max_examples=60, deadline=None)
@given(x=vectors3, y=vectors3)
def test_projection_is_firmly_nonexpansive(S, x, y):
    px, py = S.project(x), S.project(y)
    lhs = float(np.dot(px - py, px - py))
    rhs = float(np.dot(px - py, x - y))
    assert lhs <= rhs + 1e-9 * max(1.0, abs(rhs))


@pytest.mark.parametrize("S", SETS, ids=lambda s: s.kind.value)
def test_projection_of_member_is_identity(S):
    x = np.array([0.2, 0.3, 0.5])
    assert S.contains(x)
    assert_close(project(S, x), x, atol=0.0)


def test_box_projection_is_clip():
    S = ConvexSet.box([0.0, 0.0], [1.0, 2.0])
    assert_close(S.project([-1.0, 5.0]), [0.0, 2.0])


def test_ball_projection_is_radial():
    S = ConvexSet.ball([1.0, 1.0], 2.0)
    assert_close(S.project([1.0, 5.0]), [1.0, 3.0])


def test_simplex_projection():
    S = ConvexSet.simplex(3)
    assert_close(S.project([2.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    assert_close(S.project([0.5, 0.5, 0.5]), [1 / 3, 1 / 3, 1 / 3], atol=1e-12)
    assert_close(S.project([0.0, 0.0, 0.0]), [1 / 3, 1 / 3, 1 / 3], atol=1e-12)


def test_constructors_validate():
    with pytest.raises(InvalidParameterError, match="lower <= upper"):
        ConvexSet.box([1.0, 0.0], [0.0, 1.0])
    with pytest.raises(InvalidParameterError, match="radius must be positive"):
        ConvexSet.ball([0.0], 0.0)
    with pytest.raises(InvalidParameterError, match="positive integer"):
        ConvexSet.whole_space(0)
    with pytest.raises(DimensionMismatchError):
        ConvexSet.box([0.0, 0.0], [1.0])


def test_boundedness_and_diameter():
    assert not ConvexSet.whole_space(2).is_bounded
    assert math.isinf(ConvexSet.whole_space(2).diameter)
    assert ConvexSet.box([0.0, 0.0], [3.0, 4.0]).diameter == 5.0
    assert ConvexSet.ball([0.0, 0.0], 2.0).diameter == 4.0
    assert ConvexSet.simplex(3).diameter == pytest.approx(math.sqrt(2.0))


def test_dimension_mismatch_on_project():
    with pytest.raises(DimensionMismatchError):
        ConvexSet.box([0.0, 0.0], [1.0, 1.0]).project([0.0, 0.0, 0.0])


def test_prox_weighted_l1():
    box = ConvexSet.box([-1.0, -1.0], [1.0, 1.0])
    assert_close(box.prox_weighted_l1([3.0, 0.2], [0.5, 0.5]), [1.0, 0.0])
    whole = ConvexSet.whole_space(2)
    assert_close(whole.prox_weighted_l1([3.0, -0.2], [0.5, 0.5]), [2.5, 0.0])
    simplex = ConvexSet.simplex(2)
    assert_close(simplex.prox_weighted_l1([1.0, 0.5], [0.1, 0.1]), [0.75, 0.25])
    with pytest.raises(InvalidParameterError, match="ball"):
        ConvexSet.ball([0.0, 0.0], 1.0).prox_weighted_l1([1.0, 1.0], [0.1, 0.1])


def test_minimize_linear_l1():
    box = ConvexSet.box([-1.0, -2.0], [1.0, 2.0])
    z, value = box.minimize_linear_l1([1.0, -1.0])
    assert_close(z, [-1.0, 2.0])
    assert value == -3.0
    # weight dominates the coefficient, so 0 wins
    z, value = box.minimize_linear_l1([0.5, -1.0], [1.0, 0.0])
    assert_close(z, [0.0, 2.0])
    assert value == -2.0

    ball = ConvexSet.ball([0.0, 0.0], 2.0)
    z, value = ball.minimize_linear_l1([3.0, 4.0])
    assert_close(z, [-1.2, -1.6])
    assert value == pytest.approx(-10.0)

    simplex = ConvexSet.simplex(3)
    z, value = simplex.minimize_linear_l1([2.0, -1.0, 0.0])
    assert_close(z, [0.0, 1.0, 0.0])
    assert value == -1.0

    whole = ConvexSet.whole_space(2)
    assert whole.minimize_linear_l1([0.1, 0.0], [0.5, 0.5])[1] == 0.0
    with pytest.raises(UnboundedSubproblemError, match="bounded set"):
        whole.minimize_linear_l1([1.0, 0.0])


@pytest.mark.parametrize("S", SETS, ids=lambda s: s.kind.value)
def test_dict_round_trip(S):
    assert ConvexSet.from_dict(S.to_dict(), 3) == S


def test_from_dict_errors():
    with pytest.raises(ProblemFormatError, match="set.kind"):
        ConvexSet.from_dict({"kind": "cone"})
    with pytest.raises(ProblemFormatError, match="set.color"):
        ConvexSet.from_dict({"kind": "box", "lower": [0.0], "upper": [1.0], "color": 1})
    with pytest.raises(ProblemFormatError, match="set.upper: missing"):
        ConvexSet.from_dict({"kind": "box", "lower": [0.0]})
    with pytest.raises(ProblemFormatError, match="does not match"):
        ConvexSet.from_dict({"kind": "ball", "center": [0.0, 0.0], "radius": 1.0}, 3)
    assert ConvexSet.from_dict({"kind": "whole-space"}, 4).kind == SetKind.WHOLE_SPACE


@pytest.mark.parametrize("S", SETS, ids=lambda s: s.kind.value)
@settings(max_examples=60, deadline=None)
@given(x=vectors3, z=vectors3)
def test_projection_variational_inequality(S, x, z):
    # ⟨x − P(x), w − P(x)⟩ ≤ 0 for every w in the set
    px = S.project(x)
    w = S.project(z)
    value = float(np.dot(x - px, w - px))
    assert value <= 1e-10 * max(1.0, norm(x - px) * norm(w - px))


@pytest.mark.parametrize("S", SETS, ids=lambda s: s.kind.value)
@settings(max_examples=40, deadline=None)
@given(rows=st.lists(vectors3, min_size=1, max_size=6))
def test_project_rows_matches_project(S, rows):
    X = np.stack(rows)
    P = S.project_rows(X)
    assert P.shape == X.shape
    for x, p in zip(X, P):
        assert_close(p, S.project(x), atol=1e-12)


def test_project_rows_keeps_members():
    S = ConvexSet.simplex(3)
    X = np.array([[0.2, 0.3, 0.5], [2.0, 0.0, 0.0]])
    assert_close(S.project_rows(X), [[0.2, 0.3, 0.5], [1.0, 0.0, 0.0]], atol=0.0)
    with pytest.raises(DimensionMismatchError):
        S.project_rows(np.zeros((2, 2)))
