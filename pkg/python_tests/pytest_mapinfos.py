# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

from pytest_core import MapInfo
from pytest_input_generators import (
    prox_map_error_generator,
    prox_map_generator,
    reference_B,
    reference_R,
    reference_T,
)

from eqprox.proxmaps import MapKind, prox_B, prox_R, prox_T

ALL_INSTANCES = (
    "rotation",
    "bilinear-strong",
    "mvi-cocoercive",
    "mvi-l1",
    "mvi-monotone-skew",
)

prox_b_mapinfo = MapInfo(
    prox_B,
    "prox_B",
    MapKind.B,
    instances=ALL_INSTANCES,
    sample_input_generator=prox_map_generator,
    error_input_generator=prox_map_error_generator,
    reference=reference_B,
)

prox_t_mapinfo = MapInfo(
    prox_T,
    "prox_T",
    MapKind.T,
    instances=ALL_INSTANCES,
    sample_input_generator=prox_map_generator,
    error_input_generator=prox_map_error_generator,
    reference=reference_T,
)

# Every bundled instance is monotone. R is an inner Picard loop away from
# the whole space, so its reference is only met to the loop's tolerance.
prox_r_mapinfo = MapInfo(
    prox_R,
    "prox_R",
    MapKind.R,
    instances=ALL_INSTANCES,
    sample_input_generator=prox_map_generator,
    error_input_generator=prox_map_error_generator,
    reference=reference_R,
    atol=1e-7,
)

mapinfos = [prox_b_mapinfo, prox_t_mapinfo, prox_r_mapinfo]
