# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
from typing import Optional


__all__ = [
    "EqproxError",
    "DimensionMismatchError",
    "InvalidParameterError",
    "SubproblemError",
    "UnboundedSubproblemError",
    "NotMonotoneError",
    "NotAFixedPointError",
    "ProblemFormatError",
    "UnknownProblemError",
]


class EqproxError(Exception):
    """Base class of every error raised by eqprox."""


class DimensionMismatchError(EqproxError, ValueError):
    def __init__(self, expected: int, got: int, what: str = "vector"):
        super().__init__(f"Dimension mismatch for {what}: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class InvalidParameterError(EqproxError, ValueError):
    pass


class SubproblemError(EqproxError, RuntimeError):
    """The strongly convex prox subproblem could not be solved to tolerance.

    Carries the best optimality residual reached so callers can tell a
    slow solve from a broken instance.
    """

    def __init__(
        self,
        message: str,
        best_residual: float = float("inf"),
        iterations: int = 0,
    ):
        super().__init__(
            f"{message} (best residual {best_residual:.3e} after {iterations} iterations)"
        )
        self.best_residual = best_residual
        self.iterations = iterations


class UnboundedSubproblemError(SubproblemError):
    def __init__(self, message: str):
        super().__init__(
            message + "; use a bounded set (box, ball or simplex) for certification"
        )


class NotMonotoneError(EqproxError, ValueError):
    pass


class NotAFixedPointError(EqproxError, ValueError):
    def __init__(self, residual: float, threshold: float):
        super().__init__(
            f"x_star is not a fixed point of the map: residual {residual:.3e} > {threshold:.1e}"
        )
        self.residual = residual


class ProblemFormatError(EqproxError, ValueError):
    """Problem file is malformed or fails validation; `path` names the JSON field."""

    def __init__(self, path: str, message: str, source: Optional[str] = None):
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{path}: {message}")
        self.path = path


class UnknownProblemError(EqproxError, KeyError):
    def __init__(self, name: str, registry):
        self.name = name
        self.registry = sorted(registry)
        super().__init__(
            f"Unknown problem {name!r}; available: {', '.join(self.registry)}"
        )

    def __str__(self):
        # KeyError quotes its argument otherwise
        return self.args[0]
