"""Entropy, KL-distance, conditional entropy and mutual preference.

All integrals use the trapezoid rule of the underlying grids, with the
convention ``0 ln 0 = 0``. Two-attribute measures use tensor-product
weights, and marginals are formed with those same weights, so the
conditional entropy never exceeds the marginal entropy beyond rounding.

Mutual preference is defined as the utility analog of mutual information,
``h(Y) - h(Y|X)``, measured in nats.
"""
from dataclasses import asdict, dataclass

import numpy as np

from maxentutil import kernels
from maxentutil.dominance import marginal_density
from maxentutil.errors import DegenerateMarginalError, DomainError
from maxentutil.grid import same_grid

SUPPORT_TOL = 1e-12
CLAMP_WINDOW = 1e-8


@dataclass(frozen=True)
class MetricsReport:
    entropy_x: float
    entropy_y: float = None
    joint_entropy: float = None
    conditional_entropy_y_given_x: float = None
    mutual_preference: float = None
    kl: float = None

    def as_dict(self):
        return asdict(self)


def differential_entropy(d):
    return kernels.neg_xlogx_trapezoid(d.values, d.grid.spacing)


def kl_distance(u, q):
    """KL-distance of ``u`` from ``q``; ``inf`` when ``q`` vanishes where ``u`` does not."""
    same_grid(u.grid, q.grid)
    return kernels.kl_trapezoid(u.values, q.values, u.grid.spacing, SUPPORT_TOL)


def joint_entropy(d):
    v = d.values
    w = np.outer(d.grid.x_grid.weights, d.grid.y_grid.weights)
    pos = v > 0.0
    return float(-np.sum(w[pos] * v[pos] * np.log(v[pos])))


def _marginal_for(d, conditioned):
    if conditioned == "y":
        m = marginal_density(d, "x")
        return m, m.values[:, None]
    if conditioned == "x":
        m = marginal_density(d, "y")
        return m, m.values[None, :]
    raise DomainError(f"conditioned axis must be 'x' or 'y', got {conditioned!r}")


def conditional_entropy(d, conditioned="y"):
    """Entropy of the ``conditioned`` attribute given the other one.

    Uses ``u(y|x) = u(x, y) / u_x(x)`` with ``u_x`` the marginal over x.
    """
    m, den = _marginal_for(d, conditioned)
    inner = m.values[1:-1]
    if inner.size and inner.min() <= 0.0:
        raise DegenerateMarginalError(
            "the conditioning marginal density vanishes inside the domain")
    v = d.values
    w = np.outer(d.grid.x_grid.weights, d.grid.y_grid.weights)
    den = np.broadcast_to(den, v.shape)
    ok = (v > 0.0) & (den > 0.0)
    return float(-np.sum(w[ok] * v[ok] * np.log(v[ok] / den[ok])))


def mutual_preference(d):
    """``h(Y) - h(Y|X)``; tiny negatives from rounding are clamped to 0."""
    h_y = differential_entropy(marginal_density(d, "y"))
    value = h_y - conditional_entropy(d, "y")
    if -CLAMP_WINDOW < value < 0.0:
        value = 0.0
    return value


def metrics_1d(d, reference=None):
    kl = None if reference is None else kl_distance(d, reference)
    return MetricsReport(entropy_x=differential_entropy(d), kl=kl)


def metrics_2d(d):
    return MetricsReport(
        entropy_x=differential_entropy(marginal_density(d, "x")),
        entropy_y=differential_entropy(marginal_density(d, "y")),
        joint_entropy=joint_entropy(d),
        conditional_entropy_y_given_x=conditional_entropy(d, "y"),
        mutual_preference=mutual_preference(d),
    )
