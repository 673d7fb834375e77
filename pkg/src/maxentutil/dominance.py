"""Multiattribute utility on rectangular grids.

An attribute dominance utility vanishes whenever any attribute sits at its
minimum and reaches 1 at the all-maximum corner. Such surfaces behave like
joint cumulative distributions: their mixed partial is a joint utility
density, slices normalized by the marginal give conditional utilities, and
Bayes' rule relates the two conditionals. General surfaces split into a sum
of scaled attribute dominance pieces (edges, faces, interior) by
inclusion-exclusion.

Surface values are indexed ``values[i, j] = U(x_i, y_j)`` (x major), and
``values[i, j, k] = U(x_i, y_j, z_k)`` in three dimensions.
"""
from dataclasses import dataclass, field

import numpy as np

from maxentutil import kernels
from maxentutil.errors import (
    DomainError,
    GridMismatchError,
    MonotonicityError,
    NegativeDensityError,
    NormalizationError,
    ZeroDenominatorError,
    ZeroMassError,
)
from maxentutil.grid import (
    Grid,
    UtilityDensity1D,
    UtilityFunction1D,
    linear_utility,
)

EDGE_TOL = 1e-9
MONOTONE_TOL = 1e-12
DENSITY_MASS_TOL = 1e-8
NEGATIVE_TOL = 1e-9
DENOMINATOR_TOL = 1e-12
DEGENERATE_WEIGHT = 1e-12

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class Grid2D:
    x_grid: Grid
    y_grid: Grid

    @property
    def shape(self):
        return (self.x_grid.points, self.y_grid.points)

    @property
    def grids(self):
        return (self.x_grid, self.y_grid)


@dataclass(frozen=True)
class Grid3D:
    x_grid: Grid
    y_grid: Grid
    z_grid: Grid

    @property
    def shape(self):
        return (self.x_grid.points, self.y_grid.points, self.z_grid.points)

    @property
    def grids(self):
        return (self.x_grid, self.y_grid, self.z_grid)


@dataclass(frozen=True, eq=False)
class Surface:
    """Values on a :class:`Grid2D` or :class:`Grid3D`."""

    grid: object
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise GridMismatchError(f"expected values of shape {self.grid.shape}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("surface values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def ndim(self):
        return self.values.ndim


def _check_monotone(v, what):
    for axis in range(v.ndim):
        if np.any(np.diff(v, axis=axis) < -MONOTONE_TOL):
            raise MonotonicityError(f"{what} decreases along axis {AXES[axis]}")


def _min_face(v, axis):
    return np.take(v, 0, axis=axis)


class AttributeDominanceUtility2D(Surface):
    """Zero on both minimum edges, one at the maximum corner, monotone."""

    def __post_init__(self):
        super().__post_init__()
        _check_dominance(self.values, "attribute dominance utility")


class AttributeDominanceUtility3D(Surface):
    def __post_init__(self):
        super().__post_init__()
        _check_dominance(self.values, "attribute dominance utility")


def _check_dominance(v, what):
    for axis in range(v.ndim):
        if np.abs(_min_face(v, axis)).max() > EDGE_TOL:
            raise MonotonicityError(f"{what} must vanish where {AXES[axis]} is at its minimum")
    if abs(v[(-1,) * v.ndim] - 1.0) > EDGE_TOL:
        raise MonotonicityError(f"{what} must equal 1 at the all-maximum corner")
    _check_monotone(v, what)


def _weights(grid):
    ws = [g.weights for g in grid.grids]
    out = ws[0]
    for w in ws[1:]:
        out = np.multiply.outer(out, w)
    return out


def integrate_surface(s):
    """Tensor-product trapezoid integral over the whole grid."""
    return float(np.sum(_weights(s.grid) * s.values))


class JointUtilityDensity2D(Surface):
    """Nonnegative surface with unit 2-D trapezoid integral."""

    def __post_init__(self):
        super().__post_init__()
        _check_joint_density(self)


class JointUtilityDensity3D(Surface):
    def __post_init__(self):
        super().__post_init__()
        _check_joint_density(self)


def _check_joint_density(s):
    if np.any(s.values < 0.0):
        raise NegativeDensityError("a joint utility density must be nonnegative")
    mass = integrate_surface(s)
    if abs(mass - 1.0) > DENSITY_MASS_TOL:
        raise NormalizationError(f"joint density integrates to {mass!r}, not 1")


# marginals, conditionals and Bayes' rule --------------------------------------

def marginal_utility(adu, axis="x"):
    """Utility over one attribute with every other attribute at its maximum."""
    v = adu.values
    k = AXES.index(axis)
    index = [-1] * v.ndim
    index[k] = slice(None)
    return UtilityFunction1D(adu.grid.grids[k], v[tuple(index)])


def conditional_utility(adu, given, conditioned_axis="y"):
    """Utility over ``conditioned_axis`` when the other attribute is fixed at ``given``.

    Only two-attribute surfaces are supported. The slice through ``given``
    is divided by the marginal utility there so it runs from 0 to 1.
    """
    v = adu.values
    if conditioned_axis == "y":
        i = adu.grid.x_grid.index_of(given)
        row, den = v[i, :], v[i, -1]
        target = adu.grid.y_grid
    elif conditioned_axis == "x":
        j = adu.grid.y_grid.index_of(given)
        row, den = v[:, j], v[-1, j]
        target = adu.grid.x_grid
    else:
        raise DomainError(f"conditioned axis must be 'x' or 'y', got {conditioned_axis!r}")
    if den < DENOMINATOR_TOL:
        raise ZeroDenominatorError(
            f"marginal utility at {given} is {den!r}; the conditional utility is undefined")
    return UtilityFunction1D(target, row / den)


def conditional_family(adu, conditioned_axis="y"):
    """Every conditional utility at once.

    For ``conditioned_axis='y'`` row ``i`` is the utility over y given
    ``x_i``; for ``'x'`` column ``j`` is the utility over x given ``y_j``.
    Entries are NaN where the normalizer is below the zero tolerance.
    """
    v = adu.values
    if conditioned_axis == "y":
        den = v[:, -1:]
    elif conditioned_axis == "x":
        den = v[-1:, :]
    else:
        raise DomainError(f"conditioned axis must be 'x' or 'y', got {conditioned_axis!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den >= DENOMINATOR_TOL, v / np.where(den > 0, den, 1.0), np.nan)
    return out


def bayes_infer(cond_y_given_x, U_x, U_y, at_y):
    """Utility over x given a guaranteed ``at_y`` via Bayes' rule for utilities.

    ``cond_y_given_x`` is the family from ``conditional_family(adu, 'y')``,
    shape ``(len(U_x), len(U_y))``. Rows where the conditional is undefined
    carry zero marginal utility and contribute zero.
    """
    cond = np.asarray(cond_y_given_x, dtype=np.float64)
    if cond.shape != (U_x.grid.points, U_y.grid.points):
        raise GridMismatchError("conditional family does not match the marginal grids")
    j = U_y.grid.index_of(at_y)
    den = U_y.values[j]
    if den < DENOMINATOR_TOL:
        raise ZeroDenominatorError(
            f"marginal utility at y={at_y} is {den!r}; nothing to condition on")
    ux = U_x.values
    col = np.where(ux > 0.0, np.nan_to_num(cond[:, j]), 0.0)
    return UtilityFunction1D(U_x.grid, col * ux / den)


# densities ------------------------------------------------------------------------

def _mixed_partial(v, grid):
    out = v
    for axis, g in enumerate(grid.grids):
        out = np.gradient(out, g.spacing, axis=axis, edge_order=2)
    return out


def _clean_density(raw, grid, cls):
    if raw.min() < -NEGATIVE_TOL:
        raise MonotonicityError(
            f"mixed partial reaches {raw.min():.3e}; the surface is not an attribute "
            "dominance utility with a nonnegative density")
    raw = np.where(raw < 0.0, 0.0, raw)
    mass = float(np.sum(_weights(grid) * raw))
    if not mass > 0.0:
        raise ZeroMassError("mixed partial has no mass")
    return cls(grid, raw / mass)


def joint_density(adu):
    """Joint utility density: the mixed second partial of the surface."""
    return _clean_density(_mixed_partial(adu.values, adu.grid), adu.grid, JointUtilityDensity2D)


def joint_density_3d(adu):
    return _clean_density(_mixed_partial(adu.values, adu.grid), adu.grid, JointUtilityDensity3D)


def _pin_corner(v):
    v = v / v[(-1,) * v.ndim]
    v[(-1,) * v.ndim] = 1.0
    return v


def integrate_density(d):
    """Attribute dominance utility obtained by integrating from the least preferred corner."""
    g = d.grid
    v = kernels.cumulative_trapezoid_2d(d.values, g.x_grid.spacing, g.y_grid.spacing)
    return AttributeDominanceUtility2D(g, _pin_corner(v))


def integrate_density_3d(d):
    v = np.asarray(d.values)
    for axis, g in enumerate(d.grid.grids):
        lead = np.take(v, [0], axis=axis) * 0.0
        half = 0.5 * g.spacing * (np.take(v, range(1, v.shape[axis]), axis=axis)
                                  + np.take(v, range(v.shape[axis] - 1), axis=axis))
        v = np.concatenate([lead, np.cumsum(half, axis=axis)], axis=axis)
    return AttributeDominanceUtility3D(d.grid, _pin_corner(v))


def marginal_density(d, axis="x"):
    """Integrate a 2-D joint density over the other attribute."""
    g = d.grid
    if axis == "x":
        return UtilityDensity1D(g.x_grid, d.values @ g.y_grid.weights)
    if axis == "y":
        return UtilityDensity1D(g.y_grid, g.x_grid.weights @ d.values)
    raise DomainError(f"axis must be 'x' or 'y', got {axis!r}")


def product_density(u_x, u_y):
    """Joint density ``u_x(x) u_y(y)`` of utility-independent attributes."""
    return JointUtilityDensity2D(Grid2D(u_x.grid, u_y.grid), np.outer(u_x.values, u_y.values))


# decomposition -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Decomposition2D:
    """``U = base + span (k_x C_x(x) + k_y C_y(y) + k_xy C_xy(x, y))``.

    ``C_x`` and ``C_y`` are the normalized minimum-edge utilities and
    ``C_xy`` the normalized interaction term, which equals an attribute
    dominance utility whenever the interaction is supermodular. Components
    whose weight falls below 1e-12 are placeholders (linear and product of
    linear utilities) with zero weight. ``base`` and ``span`` record the
    affine normalization applied to the input.
    """

    k_x: float
    k_y: float
    k_xy: float
    C_x: UtilityFunction1D
    C_y: UtilityFunction1D
    C_xy: Surface
    base: float = 0.0
    span: float = 1.0

    @property
    def grid(self):
        return self.C_xy.grid


@dataclass(frozen=True, eq=False)
class Decomposition3D:
    """Seven-term split of a three-attribute utility.

    ``U = base + span (k_x C_x + k_y C_y + k_z C_z + k_xy C_xy + k_xz C_xz
    + k_yz C_yz + k_xyz C_xyz)``, every term entering with a plus sign; the
    pair and triple weights are interaction sizes and may be negative.
    """

    k_x: float
    k_y: float
    k_z: float
    k_xy: float
    k_xz: float
    k_yz: float
    k_xyz: float
    C_x: UtilityFunction1D
    C_y: UtilityFunction1D
    C_z: UtilityFunction1D
    C_xy: Surface
    C_xz: Surface
    C_yz: Surface
    C_xyz: Surface
    base: float = 0.0
    span: float = 1.0

    @property
    def grid(self):
        return self.C_xyz.grid


def _normalized(values, what):
    v = np.asarray(values, dtype=np.float64)
    _check_monotone(v, what)
    base = float(v[(0,) * v.ndim])
    span = float(v[(-1,) * v.ndim]) - base
    if not span > 0.0:
        raise MonotonicityError(f"{what} is constant; nothing to decompose")
    return (v - base) / span, base, span


def _edge_component(edge, grid):
    k = float(edge[-1])
    if k < DEGENERATE_WEIGHT:
        return 0.0, linear_utility(grid)
    u = edge / k
    u[0], u[-1] = 0.0, 1.0
    return k, UtilityFunction1D(grid, u)


def _product_placeholder(grid):
    parts = [linear_utility(g).values for g in grid.grids]
    out = parts[0]
    for p in parts[1:]:
        out = np.multiply.outer(out, p)
    return Surface(grid, out)


def _interaction_component(inter, grid):
    k = float(inter[(-1,) * inter.ndim])
    if abs(k) < DEGENERATE_WEIGHT:
        return 0.0, _product_placeholder(grid)
    c = inter / k
    c[(-1,) * c.ndim] = 1.0
    return k, Surface(grid, c)


def _split_2d(w):
    """Edges and pure interaction of a surface that is 0 at its (min, min) corner."""
    ex, ey = w[:, 0], w[0, :]
    inter = w - ex[:, None] - ey[None, :] + w[0, 0]
    return ex, ey, inter


def decompose_general_2d(U):
    """Split a monotone surface into edge utilities and a normalized interaction."""
    w, base, span = _normalized(U.values, "utility surface")
    ex, ey, inter = _split_2d(w)
    gx, gy = U.grid.x_grid, U.grid.y_grid
    k_x, C_x = _edge_component(ex, gx)
    k_y, C_y = _edge_component(ey, gy)
    k_xy, C_xy = _interaction_component(inter, U.grid)
    return Decomposition2D(k_x, k_y, k_xy, C_x, C_y, C_xy, base, span)


def recompose_2d(d):
    v = (d.k_x * d.C_x.values[:, None] + d.k_y * d.C_y.values[None, :]
         + d.k_xy * d.C_xy.values)
    return Surface(d.grid, d.base + d.span * v)


def decompose_general_3d(U):
    """Split a monotone 3-attribute surface into edge, face and interior pieces.

    Each minimum face is split with the two-attribute routine; the interior
    term is the triple inclusion-exclusion difference, equal to the integral
    of the triple mixed partial.
    """
    w, base, span = _normalized(U.values, "utility surface")
    gx, gy, gz = U.grid.grids
    ex, ey, ez = w[:, 0, 0], w[0, :, 0], w[0, 0, :]
    _, _, i_xy = _split_2d(w[:, :, 0])
    _, _, i_xz = _split_2d(w[:, 0, :])
    _, _, i_yz = _split_2d(w[0, :, :])
    triple = (w - w[0:1, :, :] - w[:, 0:1, :] - w[:, :, 0:1]
              + ex[:, None, None] + ey[None, :, None] + ez[None, None, :] - w[0, 0, 0])
    k_x, C_x = _edge_component(ex, gx)
    k_y, C_y = _edge_component(ey, gy)
    k_z, C_z = _edge_component(ez, gz)
    k_xy, C_xy = _interaction_component(i_xy, Grid2D(gx, gy))
    k_xz, C_xz = _interaction_component(i_xz, Grid2D(gx, gz))
    k_yz, C_yz = _interaction_component(i_yz, Grid2D(gy, gz))
    k_xyz, C_xyz = _interaction_component(triple, U.grid)
    return Decomposition3D(k_x, k_y, k_z, k_xy, k_xz, k_yz, k_xyz,
                           C_x, C_y, C_z, C_xy, C_xz, C_yz, C_xyz, base, span)


def recompose_3d(d):
    v = (d.k_x * d.C_x.values[:, None, None]
         + d.k_y * d.C_y.values[None, :, None]
         + d.k_z * d.C_z.values[None, None, :]
         + d.k_xy * d.C_xy.values[:, :, None]
         + d.k_xz * d.C_xz.values[:, None, :]
         + d.k_yz * d.C_yz.values[None, :, :]
         + d.k_xyz * d.C_xyz.values)
    return Surface(d.grid, d.base + d.span * v)


# construction --------------------------------------------------------------------

def multilinear_combine(U_x, U_y, k_x, k_y):
    """``k_x U_x + k_y U_y + (1 - k_x - k_y) U_x U_y`` on the product grid.

    Raises :class:`MonotonicityError` when a negative interaction weight
    makes the combination decrease somewhere.
    """
    if k_x < 0 or k_y < 0:
        raise DomainError(f"scaling constants must be nonnegative, got k_x={k_x}, k_y={k_y}")
    k_xy = 1.0 - k_x - k_y
    ux, uy = U_x.values[:, None], U_y.values[None, :]
    v = k_x * ux + k_y * uy + k_xy * ux * uy
    _check_monotone(v, "multilinear utility")
    return Surface(Grid2D(U_x.grid, U_y.grid), v)


def maxent_joint_from_marginals(U_x, U_y):
    """Maximum-entropy attribute dominance utility with the given marginals.

    The joint density that maximizes entropy subject only to the marginal
    utilities is the product of the marginal densities, so the surface is
    ``U_x(x) U_y(y)``.
    """
    return AttributeDominanceUtility2D(Grid2D(U_x.grid, U_y.grid),
                                       np.outer(U_x.values, U_y.values))
