# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernel and native drift evaluators.

Mirrors ``fracdrift._kernels_py`` operation for operation; see that module
for the parameter layouts and the fixed step arithmetic. Compiled with
-ffp-contract=off so no FMA fusion breaks bit-compatibility with the
unfused evaluation order.
"""

import numpy as np

from libc.math cimport exp, erf

BACKEND_NAME = "ext"

DEF MAX_DIM = 16

DRIFT_ZERO = 0
DRIFT_DIRAC = 1
DRIFT_STEP = 2
DRIFT_QUADRANT = 3
DRIFT_LINEAR = 4
DRIFT_CONSTANT = 5


cdef inline void _drift(int kind, const double* p, const double* x,
                        Py_ssize_t d, double* out) noexcept nogil:
    cdef double r2, v, u1, u2
    cdef Py_ssize_t i
    if kind == 1:  # dirac
        r2 = x[0] * x[0]
        for i in range(1, d):
            r2 = r2 + x[i] * x[i]
        v = p[1] * exp(-(p[0] * r2))
        for i in range(d):
            out[i] = v * p[2 + i]
    elif kind == 2:  # step
        out[0] = 0.5 * (1.0 + erf(p[0] * x[0]))
    elif kind == 3:  # quadrant
        u1 = 0.5 * (1.0 + erf(p[0] * x[0]))
        u2 = 0.5 * (1.0 + erf(p[0] * x[1]))
        v = u1 * u2
        out[0] = v
        out[1] = v
    elif kind == 4:  # linear
        for i in range(d):
            out[i] = p[0] * x[i]
    elif kind == 5:  # constant
        for i in range(d):
            out[i] = p[i]
    else:  # zero
        for i in range(d):
            out[i] = 0.0


def eval_drift(int kind, double[::1] params, double[:, ::1] x):
    """Evaluate a native drift at points ``x`` of shape (m, d)."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    if d > MAX_DIM:
        raise ValueError("dimension exceeds compiled kernel limit")
    out_arr = np.empty((m, d), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef const double* p = NULL
    if params.shape[0] > 0:
        p = &params[0]
    cdef Py_ssize_t j
    with nogil:
        for j in range(m):
            _drift(kind, p, &x[j, 0], d, &out[j, 0])
    return out_arr


def euler_loop(int kind, double[::1] params, double[::1] x0,
               double[:, :, ::1] increments, double h):
    """Frozen-drift Euler recursion for a batch of noise paths.

    Same contract as the fallback: returns (x, k) of shape
    (batch, n_steps + 1, d).
    """
    cdef Py_ssize_t batch = increments.shape[0]
    cdef Py_ssize_t n_steps = increments.shape[1]
    cdef Py_ssize_t d = increments.shape[2]
    if d > MAX_DIM:
        raise ValueError("dimension exceeds compiled kernel limit")
    if x0.shape[0] != d:
        raise ValueError("x0 dimension mismatch")

    x_arr = np.empty((batch, n_steps + 1, d), dtype=np.float64)
    k_arr = np.empty((batch, n_steps + 1, d), dtype=np.float64)
    cdef double[:, :, ::1] x = x_arr
    cdef double[:, :, ::1] k = k_arr

    cdef const double* p = NULL
    if params.shape[0] > 0:
        p = &params[0]

    cdef double cur[MAX_DIM]
    cdef double acc[MAX_DIM]
    cdef double bval[MAX_DIM]
    cdef double t
    cdef Py_ssize_t b, j, i

    with nogil:
        for b in range(batch):
            for i in range(d):
                cur[i] = x0[i]
                acc[i] = 0.0
                x[b, 0, i] = cur[i]
                k[b, 0, i] = 0.0
            for j in range(n_steps):
                _drift(kind, p, cur, d, bval)
                for i in range(d):
                    t = h * bval[i]
                    acc[i] = acc[i] + t
                    cur[i] = (cur[i] + t) + increments[b, j, i]
                    x[b, j + 1, i] = cur[i]
                    k[b, j + 1, i] = acc[i]
    return x_arr, k_arr
