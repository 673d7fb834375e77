"""Numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable; also the
reference the compiled versions are tested against.
"""
import numpy as np


def trapezoid(f, h):
    if f.shape[0] < 2:
        return 0.0
    return float(h * (f[1:-1].sum() + 0.5 * (f[0] + f[-1])))


def cumulative_trapezoid(f, h):
    out = np.zeros(f.shape[0])
    np.cumsum(0.5 * h * (f[1:] + f[:-1]), out=out[1:])
    return out


def neg_xlogx_trapezoid(f, h):
    if f.shape[0] < 2:
        return 0.0
    pos = f > 0.0
    c = np.zeros_like(f)
    c[pos] = -f[pos] * np.log(f[pos])
    return trapezoid(c, h)


def kl_trapezoid(u, q, h, support_tol):
    if np.any((u > support_tol) & (q <= 0.0)):
        return np.inf
    if u.shape[0] < 2:
        return 0.0
    ok = (u > 0.0) & (q > 0.0)
    c = np.zeros_like(u)
    c[ok] = u[ok] * (np.log(u[ok]) - np.log(q[ok]))
    return trapezoid(c, h)


def expfamily_stats(phi, logbase, mu):
    e = logbase + mu @ phi
    top = e.max()
    s = np.exp(e - top)
    z = s.sum()
    p = s / z
    mean = phi @ p
    centered = phi - mean[:, None]
    cov = (centered * p) @ centered.T
    return float(top + np.log(z)), mean, cov


def cumulative_trapezoid_2d(f, hx, hy):
    col = np.zeros_like(f)
    np.cumsum(0.5 * hx * (f[1:, :] + f[:-1, :]), axis=0, out=col[1:, :])
    out = np.zeros_like(f)
    np.cumsum(0.5 * hy * (col[:, 1:] + col[:, :-1]), axis=1, out=out[:, 1:])
    return out
