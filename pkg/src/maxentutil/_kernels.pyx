# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror ``_kernels_py`` exactly."""

import numpy as np

from libc.math cimport exp, log, INFINITY


def trapezoid(const double[::1] f, double h):
    cdef Py_ssize_t n = f.shape[0], i
    cdef double s = 0.0
    if n < 2:
        return 0.0
    for i in range(1, n - 1):
        s += f[i]
    return h * (s + 0.5 * (f[0] + f[n - 1]))


def cumulative_trapezoid(const double[::1] f, double h):
    cdef Py_ssize_t n = f.shape[0], i
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double half = 0.5 * h
    for i in range(1, n):
        o[i] = o[i - 1] + half * (f[i - 1] + f[i])
    return out


def neg_xlogx_trapezoid(const double[::1] f, double h):
    cdef Py_ssize_t n = f.shape[0], i
    cdef double s = 0.0, v, c
    if n < 2:
        return 0.0
    for i in range(n):
        v = f[i]
        if v > 0.0:
            c = -v * log(v)
            if i == 0 or i == n - 1:
                c *= 0.5
            s += c
    return h * s


def kl_trapezoid(const double[::1] u, const double[::1] q, double h,
                 double support_tol):
    cdef Py_ssize_t n = u.shape[0], i
    cdef double s = 0.0, c
    for i in range(n):
        if u[i] > support_tol and q[i] <= 0.0:
            return INFINITY
    if n < 2:
        return 0.0
    for i in range(n):
        if u[i] > 0.0 and q[i] > 0.0:
            c = u[i] * (log(u[i]) - log(q[i]))
            if i == 0 or i == n - 1:
                c *= 0.5
            s += c
    return h * s


def expfamily_stats(const double[:, ::1] phi, const double[::1] logbase,
                    const double[::1] mu):
    """Log-partition, mean and covariance of the statistics ``phi``.

    The tilted weights are ``exp(logbase + mu @ phi)``; ``logbase`` already
    holds the log of quadrature weight times reference density.
    """
    cdef Py_ssize_t m = phi.shape[0], n = phi.shape[1], i, k, l
    expo_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] e = expo_arr
    cdef double top = -INFINITY, z = 0.0, wi
    for i in range(n):
        e[i] = logbase[i]
        for k in range(m):
            e[i] += mu[k] * phi[k, i]
        if e[i] > top:
            top = e[i]
    for i in range(n):
        e[i] = exp(e[i] - top)
        z += e[i]
    mean_arr = np.zeros(m, dtype=np.float64)
    cov_arr = np.zeros((m, m), dtype=np.float64)
    cdef double[::1] mean = mean_arr
    cdef double[:, ::1] cov = cov_arr
    for i in range(n):
        wi = e[i] / z
        for k in range(m):
            mean[k] += wi * phi[k, i]
    cdef double dk
    for i in range(n):
        wi = e[i] / z
        for k in range(m):
            dk = wi * (phi[k, i] - mean[k])
            for l in range(k, m):
                cov[k, l] += dk * (phi[l, i] - mean[l])
    for k in range(m):
        for l in range(k + 1, m):
            cov[l, k] = cov[k, l]
    return top + log(z), mean_arr, cov_arr


def cumulative_trapezoid_2d(const double[:, ::1] f, double hx, double hy):
    cdef Py_ssize_t nx = f.shape[0], ny = f.shape[1], i, j
    col = np.zeros((nx, ny), dtype=np.float64)
    out = np.zeros((nx, ny), dtype=np.float64)
    cdef double[:, ::1] c = col
    cdef double[:, ::1] o = out
    cdef double hxh = 0.5 * hx, hyh = 0.5 * hy
    for i in range(1, nx):
        for j in range(ny):
            c[i, j] = c[i - 1, j] + hxh * (f[i - 1, j] + f[i, j])
    for i in range(nx):
        for j in range(1, ny):
            o[i, j] = o[i, j - 1] + hyh * (c[i, j - 1] + c[i, j])
    return out
