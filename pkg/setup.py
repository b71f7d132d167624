# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
#
# build argument:
#
#   -version-tag=TAG
#     Specify the tag for the eqprox version, used for nightly wheels where
#     we might want to add a date tag
#     eqprox-VERSION.TAG-....-whl
#
#   -install_requires=pkg0[,pkg1...]
#     extra packages required at install time
#
#   -wheel-name=NAME
#     Specify the wheel name
#

import glob
import os
import shutil
import sys

import setuptools
from setuptools import setup

# pick args used by this script
OVERWRITE_VERSION = False
VERSION_TAG = None
WHEEL_NAME = "eqprox"
INSTALL_REQUIRES = ["numpy>=1.22", "packaging"]
forward_args = []
for i, arg in enumerate(sys.argv):
    if arg.startswith("-install_requires="):
        INSTALL_REQUIRES += arg.split("=")[1].split(",")
        continue
    if arg.startswith("-version-tag="):
        OVERWRITE_VERSION = True
        VERSION_TAG = arg.split("=")[1]
        continue
    if arg.startswith("-wheel-name="):
        WHEEL_NAME = arg.split("=")[1]
        continue
    forward_args.append(arg)
sys.argv = forward_args


class clean(setuptools.Command):
    user_options = []

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        for pattern in ["build", "dist", "*.egg-info", "eqprox/version.py"]:
            for filename in glob.glob(pattern):
                print("removing: ", filename)
                try:
                    os.remove(filename)
                except OSError:
                    shutil.rmtree(filename, ignore_errors=True)


def version_tag():
    from tools.gen_eqprox_version import get_version

    version = get_version()
    if OVERWRITE_VERSION:
        version = version.split("+")[0]
        if len(VERSION_TAG) != 0:
            # use "." to be pypi friendly
            version = ".".join([version, VERSION_TAG])
    return version


def stamp_version(version: str):
    with open(os.path.join("eqprox", "version.py"), "w") as f:
        f.write("_version_str = '{}'\n".format(version))


def main():
    version = version_tag()
    if "clean" not in sys.argv:
        stamp_version(version)

    setup(
        name=WHEEL_NAME,
        version=version,
        description="Proximal mappings and fixed-point iterations for equilibrium problems",
        packages=["eqprox"],
        python_requires=">=3.8",
        cmdclass={"clean": clean},
        install_requires=INSTALL_REQUIRES,
        extras_require={
            "test": ["pytest>=7", "pytest-benchmark", "hypothesis"],
        },
        entry_points={
            "console_scripts": [
                "eqprox = eqprox.cli:main",
            ],
        },
        license="BSD-3-Clause",
    )


if __name__ == "__main__":
    main()
