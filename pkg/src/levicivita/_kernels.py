"""Selects the series kernels: compiled if available, else pure Python.

Set ``LEVICIVITA_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from levicivita import _pykernels

_BACKENDS = {"python": _pykernels}

try:
    from levicivita import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    _BACKENDS["cython"] = _ckernels

if _ckernels is not None and not os.environ.get("LEVICIVITA_PURE_PYTHON"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_active = _BACKENDS[BACKEND]


def available():
    return sorted(_BACKENDS)


def use_backend(name):
    """Switch the active kernels; returns the previous backend name."""
    global BACKEND, _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    prev = BACKEND
    BACKEND = name
    _active = _BACKENDS[name]
    return prev


def add_terms(xs, ys, cutoff):
    return _active.add_terms(xs, ys, cutoff)


def mul_terms(xs, ys, cutoff):
    return _active.mul_terms(xs, ys, cutoff)


def power_terms(eps, alpha, cutoff):
    return _active.power_terms(eps, alpha, cutoff)
