"""Uniform 1-D grids and the sampled functions that live on them.

Every density and utility curve in the package is a :class:`GridFunction`
on a :class:`Grid`. Quadrature is the composite trapezoid rule, which is
exact for affine integrands; derivatives are second-order finite
differences.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from maxentutil import kernels
from maxentutil.errors import (
    DomainError,
    GridMismatchError,
    GridSizeError,
    MonotonicityError,
    NegativeDensityError,
    NormalizationError,
    ZeroMassError,
)

DEFAULT_POINTS = 1001
NORMALIZATION_TOL = 1e-9
MONOTONE_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Evenly spaced nodes from ``lower`` to ``upper`` inclusive."""

    lower: float
    upper: float
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise DomainError(f"domain bounds must be finite, got [{self.lower}, {self.upper}]")
        if self.lower >= self.upper:
            raise DomainError(f"lower bound {self.lower} must be below upper bound {self.upper}")
        if int(self.points) != self.points or self.points < 3:
            raise GridSizeError(f"a grid needs an integer number of points >= 3, got {self.points}")
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        object.__setattr__(self, "points", int(self.points))

    @cached_property
    def nodes(self):
        x = np.linspace(self.lower, self.upper, self.points)
        x.flags.writeable = False
        return x

    @property
    def spacing(self):
        return (self.upper - self.lower) / (self.points - 1)

    @property
    def width(self):
        return self.upper - self.lower

    @cached_property
    def weights(self):
        """Trapezoid quadrature weights."""
        w = np.full(self.points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        w.flags.writeable = False
        return w

    def index_of(self, x, tol=1e-9):
        """Index of the node equal to ``x`` (relative tolerance ``tol``)."""
        i = int(round((x - self.lower) / self.spacing))
        if i < 0 or i >= self.points or abs(self.nodes[i] - x) > tol * self.width:
            raise DomainError(f"{x} is not a node of the grid [{self.lower}, {self.upper}]"
                              f" with {self.points} points")
        return i


def make_grid(lower, upper, points=DEFAULT_POINTS):
    return Grid(lower, upper, points)


def _frozen_values(values, grid):
    v = np.array(values, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != grid.points:
        raise GridMismatchError(f"expected {grid.points} values, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("grid function values must be finite")
    v.flags.writeable = False
    return v


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real values sampled at the nodes of ``grid``."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_values(self.values, self.grid))

    @property
    def nodes(self):
        return self.grid.nodes

    def __call__(self, x):
        """Linear interpolation between nodes."""
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < self.grid.lower - 1e-12 * self.grid.width) or np.any(
            x > self.grid.upper + 1e-12 * self.grid.width
        ):
            raise DomainError("evaluation point outside the grid domain")
        out = np.interp(x, self.grid.nodes, self.values)
        return float(out) if out.ndim == 0 else out

    def __len__(self):
        return self.grid.points


class UtilityDensity1D(GridFunction):
    """Nonnegative grid function with unit trapezoid integral."""

    def __post_init__(self):
        super().__post_init__()
        if np.any(self.values < 0.0):
            raise NegativeDensityError("a utility density must be nonnegative")
        mass = kernels.trapezoid(self.values, self.grid.spacing)
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"density integrates to {mass!r}, not 1")


class UtilityFunction1D(GridFunction):
    """Nondecreasing grid function running from 0 at ``lower`` to 1 at ``upper``."""

    def __post_init__(self):
        super().__post_init__()
        v = self.values
        if abs(v[0]) > NORMALIZATION_TOL or abs(v[-1] - 1.0) > NORMALIZATION_TOL:
            raise MonotonicityError(
                f"utility must run from 0 to 1, got endpoints {v[0]!r} and {v[-1]!r}")
        if np.any(np.diff(v) < -MONOTONE_TOL):
            raise MonotonicityError("utility function decreases somewhere")


def integrate(f):
    return kernels.trapezoid(f.values, f.grid.spacing)


def differentiate(U):
    """Central differences inside, second-order one-sided differences at the ends."""
    return GridFunction(U.grid, np.gradient(U.values, U.grid.spacing, edge_order=2))


def normalize_density(f):
    values = np.asarray(f.values, dtype=np.float64)
    if np.any(values < 0.0):
        raise NegativeDensityError("cannot normalize a function with negative values")
    mass = kernels.trapezoid(values, f.grid.spacing)
    if not mass > 0.0:
        raise ZeroMassError("cannot normalize a function with zero mass")
    return UtilityDensity1D(f.grid, values / mass)


def cumulative(d):
    """Utility function whose derivative is the density ``d``.

    The running integral is divided by its final value, so the upper
    endpoint utility is exactly 1 whatever the quadrature residual.
    """
    running = kernels.cumulative_trapezoid(d.values, d.grid.spacing)
    running /= running[-1]
    running[-1] = 1.0
    return UtilityFunction1D(d.grid, running)


def uniform_density(grid):
    return UtilityDensity1D(grid, np.full(grid.points, 1.0 / grid.width))


def linear_utility(grid):
    u = (grid.nodes - grid.lower) / grid.width
    u[0], u[-1] = 0.0, 1.0
    return UtilityFunction1D(grid, u)


def same_grid(a, b):
    if a != b:
        raise GridMismatchError(f"grids differ: {a} vs {b}")
