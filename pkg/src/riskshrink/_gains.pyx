# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gain kernels for the per-bin shrinkage hot path.

Keep the arithmetic in lockstep with ``_gains_py.py`` (same expressions, same
evaluation order) so the two backends agree to rounding.
"""

from libc.math cimport exp, isinf, sqrt

cdef int MSE = 0
cdef int WE = 1
cdef int LOG_MSE = 2
cdef int IS = 3
cdef int IS_II = 4
cdef int COSH = 5
cdef int WCOSH = 6


cdef inline double _gain(int kind, double xi, double alpha) nogil:
    cdef double xi_eff, u, v, t, r
    if not xi > 0.0:
        return 0.0
    xi_eff = xi / alpha
    if xi_eff == 0.0:
        return 0.0
    u = 1.0 / xi_eff
    if isinf(u):
        return 0.0
    if kind == MSE:
        v = 1.0 - u
        return v if v > 0.0 else 0.0
    if kind == WE:
        return 1.0 / ((((360.0 * u + 48.0) * u - 1.0) * u + 1.0) * u + 1.0)
    if kind == LOG_MSE:
        t = ((((-210.0 * u - 10.0) * u - 0.75) * u + 0.5) * u)
        return exp(t) if t < 0.0 else 1.0
    if kind == IS:
        return 1.0 / ((840.0 * u + 60.0) * u * u * u + 1.0)
    if kind == IS_II:
        r = (((4200.0 * u + 360.0) * u - 3.0) * u + 1.0) * u + 1.0
        return 1.0 if r <= 1.0 else 1.0 / sqrt(r)
    if kind == COSH:
        r = (1.0 + u) / ((840.0 * u + 60.0) * u * u * u + 1.0)
        return 1.0 if r >= 1.0 else sqrt(r)
    if kind == WCOSH:
        r = (((8400.0 * u + 420.0) * u + 3.0) * u - 1.0) * u + 1.0
        return 1.0 if r <= 1.0 else 1.0 / sqrt(r)
    return -1.0


def gain_scalar(int kind, double xi, double alpha):
    if kind < 0 or kind > 6:
        raise ValueError(f"unknown kind id {kind}")
    return _gain(kind, xi, alpha)


def gain_into(int kind, double[::1] xi, double alpha, double[::1] out):
    cdef Py_ssize_t i, n = xi.shape[0]
    if kind < 0 or kind > 6:
        raise ValueError(f"unknown kind id {kind}")
    if out.shape[0] != n:
        raise ValueError("output buffer length mismatch")
    with nogil:
        for i in range(n):
            out[i] = _gain(kind, xi[i], alpha)
