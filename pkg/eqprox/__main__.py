# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
import sys

from .cli import main

sys.exit(main())
