"""Utility assignment for K ordered prospects from the preference order alone.

With only the order known, the increment vector is taken as uniform on the
utility simplex, i.e. Dirichlet(1, ..., 1) with K - 1 components. Its
marginals are Beta distributions and their means give equal increments.
"""
from dataclasses import dataclass

import numpy as np

from maxentutil.errors import GridSizeError, OrderingError

_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class UtilityVector:
    """Utilities of K prospects from least to most preferred, pinned at 0 and 1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 2:
            raise GridSizeError("a utility vector needs at least two prospects")
        if abs(v[0]) > _TOL or abs(v[-1] - 1.0) > _TOL:
            raise OrderingError("utility vector must start at 0 and end at 1")
        if np.any(np.diff(v) < -_TOL):
            raise OrderingError("utility vector must be nondecreasing")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def K(self):
        return self.values.size

    def increments(self):
        return UtilityIncrementVector(np.diff(self.values))


@dataclass(frozen=True, eq=False)
class UtilityIncrementVector:
    """Consecutive utility differences: K - 1 nonnegative entries summing to 1."""

    increments: np.ndarray

    def __post_init__(self):
        d = np.array(self.increments, dtype=np.float64)
        if d.ndim != 1 or d.size < 1:
            raise GridSizeError("an increment vector needs at least one entry")
        if np.any(d < -_TOL):
            raise OrderingError("utility increments must be nonnegative")
        if abs(d.sum() - 1.0) > _TOL:
            raise OrderingError(f"utility increments sum to {d.sum()!r}, not 1")
        d.flags.writeable = False
        object.__setattr__(self, "increments", d)

    def utilities(self):
        return UtilityVector(np.concatenate([[0.0], np.cumsum(self.increments)]))


@dataclass(frozen=True)
class BetaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"Beta parameters must be positive, got ({self.alpha}, {self.beta})")

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)

    @property
    def variance(self):
        s = self.alpha + self.beta
        return self.alpha * self.beta / (s * s * (s + 1.0))


def maxent_utility_vector(K):
    """Equal-increment utilities ``j / (K - 1)``."""
    if K < 2:
        raise GridSizeError(f"need at least two ordered prospects, got K={K}")
    return UtilityVector(np.arange(K) / (K - 1))


def beta_marginal_of_value(j, K):
    """Marginal of the j-th utility value, Beta(j, K - j - 1), for interior j."""
    if K < 3:
        raise GridSizeError(f"interior utility values need K >= 3, got K={K}")
    if not 1 <= j <= K - 2:
        raise IndexError(f"interior prospect index must lie in 1..{K - 2}, got {j}")
    return BetaParams(float(j), float(K - j - 1))


def beta_marginal_of_increment(K):
    if K < 3:
        raise GridSizeError(f"increment marginals need K >= 3, got K={K}")
    return BetaParams(1.0, float(K - 2))


def sample_uniform_simplex(K, n, seed):
    """Draw ``n`` increment vectors uniformly from the utility simplex.

    Each row normalizes K - 1 independent unit exponentials, which is
    Dirichlet(1, ..., 1). The generator is numpy's PCG64 seeded with
    ``seed``, so a fixed ``(K, n, seed)`` always yields the same array.

    Returns
    -------
    numpy.ndarray
        Shape ``(n, K - 1)``; every row is a valid increment vector.
    """
    if K < 2:
        raise GridSizeError(f"need at least two ordered prospects, got K={K}")
    if n < 1:
        raise GridSizeError(f"need at least one sample, got n={n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    e = rng.standard_exponential((n, K - 1))
    return e / e.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class SimplexSampleReport:
    K: int
    samples: int
    seed: int
    value_mean: tuple
    value_variance: tuple
    value_analytic_mean: tuple
    value_analytic_variance: tuple
    increment_mean: tuple
    increment_variance: tuple
    increment_analytic_mean: tuple
    increment_analytic_variance: tuple

    @property
    def max_mean_deviation(self):
        dv = np.abs(np.subtract(self.value_mean, self.value_analytic_mean))
        di = np.abs(np.subtract(self.increment_mean, self.increment_analytic_mean))
        return float(max(dv.max(initial=0.0), di.max(initial=0.0)))

    def as_dict(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["max_mean_deviation"] = self.max_mean_deviation
        return d


def verify_propositions(K, n, seed):
    """Compare sampled utility values and increments with their Beta marginals."""
    if K < 3:
        raise GridSizeError(f"verification needs K >= 3, got K={K}")
    inc = sample_uniform_simplex(K, n, seed)
    # interior utility values u_1..u_{K-2}
    vals = np.cumsum(inc, axis=1)[:, :-1]
    value_beta = [beta_marginal_of_value(j, K) for j in range(1, K - 1)]
    inc_beta = beta_marginal_of_increment(K)
    return SimplexSampleReport(
        K=K,
        samples=n,
        seed=seed,
        value_mean=tuple(vals.mean(axis=0).tolist()),
        value_variance=tuple(vals.var(axis=0).tolist()),
        value_analytic_mean=tuple(b.mean for b in value_beta),
        value_analytic_variance=tuple(b.variance for b in value_beta),
        increment_mean=tuple(inc.mean(axis=0).tolist()),
        increment_variance=tuple(inc.var(axis=0).tolist()),
        increment_analytic_mean=(inc_beta.mean,) * (K - 1),
        increment_analytic_variance=(inc_beta.variance,) * (K - 1),
    )
