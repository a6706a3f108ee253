"""Numpy fallback kernels: drift evaluation and the Euler stepping loop.

The compiled extension (`fracdrift._kernels`) implements the same API with
identical operation ordering. Within one backend, evaluating a drift through
`eval_drift` and through the stepping loop yields bit-identical doubles; the
replay and unrolled-substitution oracles rely on this. Do not reorder the
arithmetic here without mirroring the change in ``_kernels.pyx``.

Drift parameter layouts (all precomputed Python floats, shared verbatim with
the compiled kernel so both backends consume identical constants):

  DIRAC:     [half_n, amp, alpha_0, ..., alpha_{d-1}]
             out_i = alpha_i * (amp * exp(-(half_n * sum_i x_i*x_i)))
  STEP:      [s]    with s = sqrt(n/2);  out = 0.5*(1 + erf(s*x))      (d=1)
  QUADRANT:  [s]    out_0 = out_1 = prod of the two 1-d step factors   (d=2)
  LINEAR:    [coef] out_i = coef * x_i
  CONSTANT:  [c_0, ..., c_{d-1}]
  ZERO:      []
"""

import numpy as np
from scipy.special import erf

BACKEND_NAME = "python"

DRIFT_ZERO = 0
DRIFT_DIRAC = 1
DRIFT_STEP = 2
DRIFT_QUADRANT = 3
DRIFT_LINEAR = 4
DRIFT_CONSTANT = 5

NATIVE_KINDS = (DRIFT_ZERO, DRIFT_DIRAC, DRIFT_STEP, DRIFT_QUADRANT,
                DRIFT_LINEAR, DRIFT_CONSTANT)


def eval_drift(kind, params, x):
    """Evaluate a native drift at points ``x`` of shape (..., d).

    Returns an array of the same shape.
    """
    x = np.asarray(x, dtype=np.float64)
    if kind == DRIFT_ZERO:
        return np.zeros_like(x)
    if kind == DRIFT_DIRAC:
        half_n, amp = params[0], params[1]
        alpha = params[2:]
        r2 = x[..., 0] * x[..., 0]
        for i in range(1, x.shape[-1]):
            r2 = r2 + x[..., i] * x[..., i]
        v = amp * np.exp(-(half_n * r2))
        return v[..., None] * alpha
    if kind == DRIFT_STEP:
        s = params[0]
        return 0.5 * (1.0 + erf(s * x))
    if kind == DRIFT_QUADRANT:
        s = params[0]
        u1 = 0.5 * (1.0 + erf(s * x[..., 0]))
        u2 = 0.5 * (1.0 + erf(s * x[..., 1]))
        v = u1 * u2
        out = np.empty_like(x)
        out[..., 0] = v
        out[..., 1] = v
        return out
    if kind == DRIFT_LINEAR:
        return params[0] * x
    if kind == DRIFT_CONSTANT:
        return np.broadcast_to(np.asarray(params, dtype=np.float64),
                               x.shape).copy()
    raise ValueError(f"unknown drift kind {kind}")


def euler_loop(kind, params, x0, increments, h):
    """Run the frozen-drift Euler recursion for a batch of noise paths.

    increments: (batch, n_steps, d) noise increments on the scheme grid.
    x0:         (d,) initial state, shared across the batch.
    Returns (x, k), each (batch, n_steps + 1, d), where k is the running
    drift accumulator (k[j] = sum of h*b(x[i]) for i < j).

    Step arithmetic, fixed and mirrored in the compiled kernel:
        t      = h * b(x_j)
        k_{j+1} = k_j + t
        x_{j+1} = (x_j + t) + dB_j
    """
    def drift(pts):
        return eval_drift(kind, params, pts)

    return euler_loop_callable(drift, x0, increments, h)


def euler_loop_callable(drift_fn, x0, increments, h):
    """Euler loop for an arbitrary vectorised drift callable.

    Same stepping arithmetic as ``euler_loop``; used by both backends when the
    drift has no native kind code.
    """
    increments = np.asarray(increments, dtype=np.float64)
    batch, n_steps, dim = increments.shape
    x = np.empty((batch, n_steps + 1, dim), dtype=np.float64)
    k = np.empty((batch, n_steps + 1, dim), dtype=np.float64)
    cur = np.broadcast_to(np.asarray(x0, dtype=np.float64),
                          (batch, dim)).copy()
    acc = np.zeros((batch, dim), dtype=np.float64)
    x[:, 0] = cur
    k[:, 0] = acc
    for j in range(n_steps):
        t = h * drift_fn(cur)
        acc = acc + t
        cur = (cur + t) + increments[:, j]
        x[:, j + 1] = cur
        k[:, j + 1] = acc
    return x, k
