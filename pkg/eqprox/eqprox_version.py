# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
from pathlib import Path
from typing import Any

__all__ = ["EqproxVersion", "Version", "__version__"]


def _read_version_str() -> str:
    # version.py is stamped by tools/gen_eqprox_version.py at build time
    try:
        from .version import _version_str  # type: ignore[import]

        return _version_str
    except ImportError:
        version_txt = Path(__file__).resolve().parent.parent / "version.txt"
        try:
            return version_txt.read_text().strip()
        except OSError:
            return "0.0.0"


class _LazyVersion:
    """packaging.version.Version, imported on first use."""

    @staticmethod
    def get_cls():
        import packaging.version

        return packaging.version.Version

    def __call__(self, *args, **kwargs):
        return self.get_cls()(*args, **kwargs)

    def __instancecheck__(self, obj):
        return isinstance(obj, self.get_cls())


Version = _LazyVersion()


class EqproxVersion(str):
    """A version string that compares by release, ignoring the local +tag."""

    @staticmethod
    def _as_version(ver: Any):
        if isinstance(ver, str):
            return Version(ver.split("+")[0])
        if isinstance(ver, Version.get_cls()):
            return ver
        raise ValueError(f"can't convert {ver!r} to Version")

    def _cmp(self, other: Any, method: str) -> bool:
        return getattr(self._as_version(self), method)(self._as_version(other))

    __hash__ = str.__hash__


for _method in ["__gt__", "__lt__", "__eq__", "__ge__", "__le__"]:
    setattr(EqproxVersion, _method, lambda x, y, m=_method: x._cmp(y, m))

__version__ = EqproxVersion(_read_version_str())
