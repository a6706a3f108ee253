"""Kernel backend selection.

The compiled extension is preferred when importable; ``FRACDRIFT_BACKEND``
forces a choice ("ext" or "python"). Arbitrary callable drifts always run
through the numpy loop, so they behave identically under both backends.
"""

import os

import numpy as np

from . import _kernels_py as _py

_forced = os.environ.get("FRACDRIFT_BACKEND", "").strip().lower()
if _forced not in ("", "ext", "python"):
    raise ImportError(f"FRACDRIFT_BACKEND must be 'ext' or 'python', "
                      f"got {_forced!r}")

_ext = None
if _forced != "python":
    try:
        from . import _kernels as _ext  # type: ignore[no-redef]
    except ImportError:
        _ext = None
        if _forced == "ext":
            raise ImportError("FRACDRIFT_BACKEND=ext but the compiled "
                              "kernel is not available")

USE_EXT = _ext is not None
BACKEND_NAME = "ext" if USE_EXT else "python"

DRIFT_ZERO = _py.DRIFT_ZERO
DRIFT_DIRAC = _py.DRIFT_DIRAC
DRIFT_STEP = _py.DRIFT_STEP
DRIFT_QUADRANT = _py.DRIFT_QUADRANT
DRIFT_LINEAR = _py.DRIFT_LINEAR
DRIFT_CONSTANT = _py.DRIFT_CONSTANT
NATIVE_KINDS = _py.NATIVE_KINDS


def eval_drift(kind, params, x):
    """Evaluate a native-kind drift at points of shape (..., d)."""
    x = np.asarray(x, dtype=np.float64)
    if not USE_EXT:
        return _py.eval_drift(kind, params, x)
    flat = np.ascontiguousarray(x.reshape(-1, x.shape[-1]))
    p = np.asarray(params, dtype=np.float64)
    out = _ext.eval_drift(int(kind), p, flat)
    return out.reshape(x.shape)


def euler_loop(kind, params, x0, increments, h):
    """Batched Euler loop for a native drift kind."""
    if not USE_EXT:
        return _py.euler_loop(kind, params, x0, increments, h)
    p = np.asarray(params, dtype=np.float64)
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    increments = np.ascontiguousarray(increments, dtype=np.float64)
    return _ext.euler_loop(int(kind), p, x0, increments, float(h))


def euler_loop_callable(drift_fn, x0, increments, h):
    """Batched Euler loop for an arbitrary vectorised drift callable."""
    return _py.euler_loop_callable(drift_fn, x0, increments, h)
