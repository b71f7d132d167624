# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
"""Proximal mappings and fixed-point iterations for equilibrium problems.

Bifunctions f: C x C -> R with f(x, x) = 0 are evaluated through three
prox maps (B, T and the resolvent R), driven by Picard, Krasnoselskii-Mann
or Halpern iterations, and checked against their theoretical contraction
properties by seeded sampling.
"""

import logging

from .bifunction import Bifunction, BifunctionKind, BifunctionProfile, Regularizer
from .errors import *  # noqa: F401,F403
from .geometry import ConvexSet, SetKind, project
from .iteration import IterationConfig, IterationTrace, Scheme, run_fixed_point
from .problems import ProblemInstance, builtin, load, registry
from .proxmaps import MapKind, ProxEvaluation, evaluate_map, prox_B, prox_R, prox_T
from .subproblem import gap_value, solve_prox_subproblem


logger = logging.getLogger("eqprox")
logger.addHandler(logging.NullHandler())


def version():
    r"""returns eqprox version in format of a string 'm.n.p+git[7d-sha]'.

    We strip the git[7d-sha] and convert the string to
    `packaging.version.Version` for comparison. e.g. you can use it as:
        import eqprox
        print(eqprox.version())              # 0.1.0+git1a2b3c4
        eqprox.version() < "0.2.0"           # True
        eqprox.version() == "0.1.0"          # True
    """
    from .eqprox_version import __version__

    return __version__
