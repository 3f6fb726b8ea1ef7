"""Numeric kernels with selectable backends.

The hot loops (dense MST scans, beam search, pruning) run as numba-compiled
kernels by default. Setting ``TOPOPROJ_BACKEND=numpy`` (or running where numba
is not importable) switches to numpy/python fallbacks with the same semantics.
Both backends reduce squared distances in the same fixed order, so for equal
inputs they produce bit-identical results, just at very different speeds.
"""

import os
import warnings

_VALID = ("numba", "numpy")
_backend_name = None
_backend_mod = None


def _resolve_default() -> str:
    requested = os.environ.get("TOPOPROJ_BACKEND", "").strip().lower()
    if requested and requested not in _VALID:
        warnings.warn(f"unknown TOPOPROJ_BACKEND={requested!r}, using numba")
        requested = ""
    if requested == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if requested == "numba":
            warnings.warn("numba requested but not importable, using numpy")
        return "numpy"
    return "numba"


def set_backend(name: str) -> None:
    """Force a backend by name ('numba' or 'numpy'). Mainly for tests/benchmarks."""
    global _backend_name, _backend_mod
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba":
        import numba  # noqa: F401
    _backend_name = name
    _backend_mod = None


def backend_name() -> str:
    global _backend_name
    if _backend_name is None:
        _backend_name = _resolve_default()
    return _backend_name


def get_backend():
    """Return the active kernel module."""
    global _backend_mod
    if _backend_mod is None:
        if backend_name() == "numba":
            from . import numba_backend as mod
        else:
            from . import numpy_backend as mod
        _backend_mod = mod
    return _backend_mod
