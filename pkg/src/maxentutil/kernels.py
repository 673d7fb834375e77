"""Backend selection for the numerical inner loops.

The compiled Cython module is used when it was built; otherwise the numpy
fallback is loaded; setting ``MAXENTUTIL_BACKEND=python`` forces the
fallback. ``BACKEND`` names the active implementation. Both are importable
directly as ``compiled`` (possibly ``None``) and ``fallback``.
"""
import os

import numpy as np

from maxentutil import _kernels_py as fallback

try:
    from maxentutil import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and os.environ.get("MAXENTUTIL_BACKEND", "").lower() != "python":
    _impl, BACKEND = compiled, "cython"
else:
    _impl, BACKEND = fallback, "python"


def _vec(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def trapezoid(f, h):
    """Composite trapezoid integral of samples ``f`` with spacing ``h``."""
    return float(_impl.trapezoid(_vec(f), float(h)))


def cumulative_trapezoid(f, h):
    """Running trapezoid integral, starting at exactly 0."""
    return _impl.cumulative_trapezoid(_vec(f), float(h))


def neg_xlogx_trapezoid(f, h):
    """Trapezoid integral of ``-f ln f`` with ``0 ln 0 = 0``."""
    return float(_impl.neg_xlogx_trapezoid(_vec(f), float(h)))


def kl_trapezoid(u, q, h, support_tol=1e-12):
    """Trapezoid integral of ``u ln(u/q)``; ``inf`` if ``q`` misses ``u``'s support."""
    return float(_impl.kl_trapezoid(_vec(u), _vec(q), float(h), float(support_tol)))


def expfamily_stats(phi, logbase, mu):
    """Return ``(log Z, E[phi], Cov[phi])`` under weights ``exp(logbase + mu @ phi)``."""
    return _impl.expfamily_stats(np.ascontiguousarray(phi, dtype=np.float64),
                                 _vec(logbase), _vec(mu))


def cumulative_trapezoid_2d(f, hx, hy):
    """Running 2-D trapezoid integral from the (min, min) corner."""
    return _impl.cumulative_trapezoid_2d(np.ascontiguousarray(f, dtype=np.float64),
                                         float(hx), float(hy))
