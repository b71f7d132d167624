# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause

# Subproblem solver
SUBPROBLEM_TOL = 1e-10
MAX_INNER_ITERATIONS = 10**5

# Membership tolerance for projections and set checks
MEMBERSHIP_TOL = 1e-12
# x is accepted as a point of S for certification within this distance
IN_SET_TOL = 1e-9

# Regularized (resolvent) map: inner Picard on the prox map of the
# regularized bifunction, stopping when successive iterates differ by tol/10
RESOLVENT_STOP_FACTOR = 0.1
RESOLVENT_MAX_ITERATIONS = 10**4

# Fixed-point drivers
FIXED_POINT_TOL = 1e-8
FIXED_POINT_MAX_ITERATIONS = 1000
KM_ALPHA = 0.5
RATE_MIN_RESIDUALS = 10

# Certification
GAP_TOL = 1e-6
FIXED_POINT_CERT_TOL = 1e-8
FIXED_POINT_CERT_LAMBDA = 0.1

# Sampling
DEFAULT_SEED = 42
DEFAULT_SAMPLE_COUNT = 10**4
SAMPLE_LOW = -10.0
SAMPLE_HIGH = 10.0
DEGENERATE_DISTANCE = 1e-6
REFINE_WORST = 10
LOW_CONFIDENCE_SAMPLES = 1000

# Verdict tolerances
EXACT_TOL = 1e-9
IDENTITY_TOL = 1e-12
SOLVER_TOL = 1e-6
MODULUS_CLASS_TOL = 1e-6

# Matrix checks
PSD_TOL = 1e-10

# Bench acceptance matrix
COUNTEREXAMPLE_LAMBDAS = [0.1, 0.5, 1.0, 2.0]
COCOERCIVE_DERIVED_LAMBDAS = [0.1, 0.25, 0.4]
COCOERCIVE_STATED_LAMBDAS = [1.0, 2.0]
EPSILON_LAMBDAS = [0.1, 0.5, 1.0]
QUASICONTRACTION_LAMBDA = 0.3
COMPOSITE_LAMBDA = 0.5
RESOLVENT_LAMBDA = 0.5
BENCH_SAMPLES = 1000

# Prox maps inside sampled checks are solved to this tolerance; verdicts
# on maps use SOLVER_TOL
ANALYSIS_MAP_TOL = 1e-8
MAX_RESAMPLE_ROUNDS = 100
REFINE_ROUNDS = 16
REFINE_STEP = 0.05
