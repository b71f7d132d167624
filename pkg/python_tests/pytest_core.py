# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

from eqprox.proxmaps import MapKind


@dataclass
class ErrorSample:
    kwargs: dict
    ex_str: str
    ex_type: Exception = ValueError


class SampleInput:
    """Represents sample inputs to a prox map."""

    __slots__ = [
        "args",
        "kwargs",
    ]

    def __init__(self, *args, **kwargs):
        self.args = args
        self.kwargs = kwargs

    def __repr__(self):
        return f"[SampleInput args={self.args} kwargs={self.kwargs}]"


@dataclass
class MapInfo:
    """Prox map information and helpers for exercising it."""

    op: Callable

    name: str

    map_kind: MapKind

    # Bundled instances the map is tested on
    instances: Tuple[str, ...] = ()

    # λ values every instance is tested at
    lambdas: Tuple[float, ...] = (0.1, 0.5, 1.0)

    # Generates (f, S, x, lam) samples for one instance
    sample_input_generator: Callable = None

    # Generates error inputs
    error_input_generator: Callable = None

    # reference(problem, x, lam) -> expected output, or None when the
    # instance has no closed form for this map
    reference: Optional[Callable] = None

    # Tolerance against the reference
    atol: float = 1e-8

    # Keyword arguments forwarded to the map
    map_kwargs: dict = field(default_factory=dict)
