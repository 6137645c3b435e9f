"""Kernel backend selection.

The hot loops in :mod:`hiddenforest.kernels` exist twice: as numba ``@njit``
functions and as plain numpy code. ``HIDDENFOREST_BACKEND`` picks one at import
time (``numba``, ``numpy`` or ``auto``, the default). ``auto`` means numba when
it imports cleanly. ``set_backend`` switches at runtime, mainly for tests and
the benchmark.
"""
from __future__ import annotations

import contextlib
import os

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

ENV_VAR = "HIDDENFOREST_BACKEND"
_CHOICES = ("auto", "numba", "numpy")


def _resolve(name: str) -> str:
    name = name.strip().lower() or "auto"
    if name not in _CHOICES:
        raise ValueError(f"{ENV_VAR} must be one of {_CHOICES}, got {name!r}")
    if name == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba backend requested but numba is not installed")
    return name


_active = _resolve(os.environ.get(ENV_VAR, "auto"))


def get_backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Switch backend; returns the previous one."""
    global _active
    previous = _active
    _active = _resolve(name)
    return previous


@contextlib.contextmanager
def use_backend(name: str):
    previous = set_backend(name)
    try:
        yield _active
    finally:
        set_backend(previous)
