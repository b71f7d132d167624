# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
# Owner(s): ["module: eqprox"]

import inspect
from typing import Callable

from pytest_utils import map_lambda_to_str


def _instantiate_map_test_template(
    template: Callable, *, mapinfo, instance: str, lam: float
) -> Callable:
    """Instantiates a test template for a prox map on one instance and λ."""

    def test():
        return template(mapinfo, instance, lam)

    name = "_".join(
        (template.__name__, mapinfo.name, instance.replace("-", "_"), map_lambda_to_str(lam))
    )
    test.__name__ = name
    return test


class create_map_test:
    def __init__(self, mapinfos, *, lambdas=None, scope=None):
        self.mapinfos = mapinfos
        # overrides each MapInfo's own λ values
        self.lambdas = lambdas

        # Acquires the caller's global scope
        if scope is None:
            previous_frame = inspect.currentframe().f_back
            scope = previous_frame.f_globals
        self.scope = scope

    def __call__(self, test_template):
        # NOTE Unlike a typical decorator, this __call__ does not return a function.
        #   Every (map, instance, λ) triple gets its own test, assigned directly
        #   to the requested scope (the caller's global scope by default).
        for mapinfo in self.mapinfos:
            for instance in mapinfo.instances:
                for lam in self.lambdas or mapinfo.lambdas:
                    test = _instantiate_map_test_template(
                        test_template, mapinfo=mapinfo, instance=instance, lam=lam
                    )
                    # Adds the instantiated test to the requested scope
                    self.scope[test.__name__] = test
