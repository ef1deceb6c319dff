"""Kernel backend selection.

The compiled extension is used when it imports; ``VNIDEALS_PURE_PYTHON=1``
forces the fallback. ``use()`` swaps backends at runtime (tests, benchmark).
"""
import os
import warnings

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError as exc:  # extension not built
    _compiled = None
    _import_error = exc
else:
    _import_error = None

COMPILED_AVAILABLE = _compiled is not None

if COMPILED_AVAILABLE and not os.environ.get("VNIDEALS_PURE_PYTHON"):
    kernels = _compiled
    BACKEND = "compiled"
else:
    kernels = _kernels_py
    BACKEND = "python"
    if not COMPILED_AVAILABLE and not os.environ.get("VNIDEALS_PURE_PYTHON"):
        warnings.warn(f"vnideals: compiled kernels unavailable ({_import_error}); using pure-Python fallback")


def use(name):
    """Select ``"compiled"`` or ``"python"`` kernels; returns the previous name."""
    global kernels, BACKEND
    previous = BACKEND
    if name == "compiled":
        if not COMPILED_AVAILABLE:
            raise RuntimeError("compiled kernels are not built")
        kernels = _compiled
    elif name == "python":
        kernels = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name
    return previous


def get(name):
    if name == "compiled":
        if not COMPILED_AVAILABLE:
            raise RuntimeError("compiled kernels are not built")
        return _compiled
    if name == "python":
        return _kernels_py
    raise ValueError(f"unknown backend {name!r}")
