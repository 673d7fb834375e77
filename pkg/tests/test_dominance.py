import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxentutil import dominance as dm
from maxentutil import maxent as me
from maxentutil.errors import (
    DomainError,
    GridMismatchError,
    MonotonicityError,
    NormalizationError,
    ZeroDenominatorError,
)
from maxentutil.grid import Grid, UtilityFunction1D, cumulative, linear_utility


def square(points=51, upper=1.0):
    g = Grid(0.0, upper, points)
    return dm.Grid2D(g, g)


def mesh(grid):
    return np.meshgrid(*[g.nodes for g in grid.grids], indexing="ij")


def test_surface_shape_checked():
    grid = square(11)
    with pytest.raises(GridMismatchError):
        dm.Surface(grid, np.zeros((11, 10)))


def test_dominance_invariants():
    grid = square(11)
    x, y = mesh(grid)
    dm.AttributeDominanceUtility2D(grid, x * y)
    with pytest.raises(MonotonicityError):
        dm.AttributeDominanceUtility2D(grid, 0.5 * (x + y))
    with pytest.raises(MonotonicityError):
        dm.AttributeDominanceUtility2D(grid, x * y * (1.5 - x))


def test_joint_density_mass_checked():
    grid = square(11)
    with pytest.raises(NormalizationError):
        dm.JointUtilityDensity2D(grid, np.full(grid.shape, 2.0))


def test_marginal_and_conditional_utilities():
    grid = square(41)
    x, y = mesh(grid)
    U = dm.AttributeDominanceUtility2D(grid, x * y * (1 + x * y) / 2)
    Ux = dm.marginal_utility(U, "x")
    np.testing.assert_allclose(Ux.values, grid.x_grid.nodes * (1 + grid.x_grid.nodes) / 2)
    c = dm.conditional_utility(U, 0.5, "y")
    yy = grid.y_grid.nodes
    np.testing.assert_allclose(c.values, yy * (1 + 0.5 * yy) / 1.5, atol=1e-14)
    with pytest.raises(ZeroDenominatorError):
        dm.conditional_utility(U, 0.0, "y")
    with pytest.raises(DomainError):
        dm.conditional_utility(U, 0.5, "z")


def test_conditional_family_nan_on_min_face():
    grid = square(11)
    x, y = mesh(grid)
    fam = dm.conditional_family(dm.AttributeDominanceUtility2D(grid, x * y), "y")
    assert np.all(np.isnan(fam[0]))
    np.testing.assert_allclose(fam[1:], np.broadcast_to(grid.y_grid.nodes, (10, 11)))


def test_bayes_rule_on_dependent_surface():
    grid = square(61)
    x, y = mesh(grid)
    U = dm.AttributeDominanceUtility2D(grid, x * y * np.exp(x * y - 1.0) / 1.0)
    fam = dm.conditional_family(U, "y")
    Ux, Uy = dm.marginal_utility(U, "x"), dm.marginal_utility(U, "y")
    for j in range(1, 61):
        inferred = dm.bayes_infer(fam, Ux, Uy, grid.y_grid.nodes[j])
        np.testing.assert_allclose(inferred.values, U.values[:, j] / U.values[-1, j], atol=1e-12)
    with pytest.raises(ZeroDenominatorError):
        dm.bayes_infer(fam, Ux, Uy, 0.0)


def test_joint_density_of_product_surface():
    grid = square(201)
    x, y = mesh(grid)
    U = dm.AttributeDominanceUtility2D(grid, x ** 2 * y)
    d = dm.joint_density(U)
    np.testing.assert_allclose(d.values, 2 * x, atol=1e-10)


def test_non_supermodular_surface_rejected():
    grid = square(51)
    x, y = mesh(grid)
    # increasing in both attributes with a negative mixed partial
    v = x * y * (3.0 - x * y) / 2.0
    with pytest.raises(MonotonicityError):
        dm.joint_density(dm.Surface(grid, v))


def test_marginal_density_and_product():
    g = Grid(0.0, 1.0, 101)
    ux = me.exponential_reference_density(2.0, g)
    uy = me.exponential_reference_density(-1.0, g)
    d = dm.product_density(ux, uy)
    np.testing.assert_allclose(dm.marginal_density(d, "x").values, ux.values, rtol=1e-12)
    np.testing.assert_allclose(dm.marginal_density(d, "y").values, uy.values, rtol=1e-12)
    U = dm.integrate_density(d)
    np.testing.assert_allclose(U.values, np.outer(cumulative(ux).values, cumulative(uy).values),
                               atol=1e-12)


def test_multilinear_constants_recovered():
    g = Grid(0.0, 1.0, 101)
    Ux = UtilityFunction1D(g, np.sqrt(g.nodes))
    Uy = cumulative(me.exponential_reference_density(3.0, g))
    S = dm.multilinear_combine(Ux, Uy, 0.3, 0.5)
    dec = dm.decompose_general_2d(S)
    assert (dec.k_x, dec.k_y) == pytest.approx((0.3, 0.5), abs=1e-12)
    assert dec.k_xy == pytest.approx(0.2, abs=1e-12)
    np.testing.assert_allclose(dec.C_x.values, Ux.values, atol=1e-12)
    np.testing.assert_allclose(dec.C_xy.values, np.outer(Ux.values, Uy.values), atol=1e-12)
    np.testing.assert_allclose(dm.recompose_2d(dec).values, S.values, atol=1e-14)


def test_multilinear_validation():
    g = Grid(0.0, 1.0, 21)
    Ux = Uy = linear_utility(g)
    with pytest.raises(DomainError):
        dm.multilinear_combine(Ux, Uy, -0.1, 0.5)
    # k_x + k_y > 1 is allowed while the surface stays monotone
    dm.multilinear_combine(Ux, Uy, 0.7, 0.6)
    with pytest.raises(MonotonicityError):
        dm.multilinear_combine(Ux, Uy, 0.0, 2.5)


def test_pure_additive_has_placeholder_interaction():
    grid = square(21)
    x, y = mesh(grid)
    dec = dm.decompose_general_2d(dm.Surface(grid, 2.0 + 3.0 * x + 1.0 * y))
    assert dec.k_xy == 0.0
    assert (dec.base, dec.span) == pytest.approx((2.0, 4.0))
    assert (dec.k_x, dec.k_y) == pytest.approx((0.75, 0.25))


def test_decompose_constant_rejected():
    grid = square(11)
    with pytest.raises(MonotonicityError):
        dm.decompose_general_2d(dm.Surface(grid, np.ones(grid.shape)))


def test_three_attribute_multilinear_constants():
    g = Grid(0.0, 1.0, 21)
    grid = dm.Grid3D(g, g, g)
    x, y, z = mesh(grid)
    k = dict(k_x=0.1, k_y=0.15, k_z=0.2, k_xy=0.05, k_xz=0.1, k_yz=0.15, k_xyz=0.25)
    ux, uy, uz = np.sqrt(x), y ** 2, np.sin(np.pi * z / 2)
    v = (k["k_x"] * ux + k["k_y"] * uy + k["k_z"] * uz + k["k_xy"] * ux * uy
         + k["k_xz"] * ux * uz + k["k_yz"] * uy * uz + k["k_xyz"] * ux * uy * uz)
    dec = dm.decompose_general_3d(dm.Surface(grid, v))
    for name, value in k.items():
        assert getattr(dec, name) == pytest.approx(value, abs=1e-12)
    np.testing.assert_allclose(dec.C_xyz.values, ux * uy * uz, atol=1e-12)
    np.testing.assert_allclose(dm.recompose_3d(dec).values, v, atol=1e-14)


def test_three_attribute_density_round_trip():
    g = Grid(0.0, 1.0, 41)
    grid = dm.Grid3D(g, g, g)
    x, y, z = mesh(grid)
    U = dm.AttributeDominanceUtility3D(grid, x * y * z * (1 + x + y * z) / 3.0)
    d = dm.joint_density_3d(U)
    np.testing.assert_allclose(dm.integrate_density_3d(d).values, U.values, atol=1e-3)


def test_maxent_joint_is_product():
    g = Grid(0.0, 1.0, 31)
    Ux = cumulative(me.exponential_reference_density(1.0, g))
    Uy = linear_utility(g)
    adu = dm.maxent_joint_from_marginals(Ux, Uy)
    np.testing.assert_allclose(adu.values, np.outer(Ux.values, Uy.values))
    np.testing.assert_allclose(dm.marginal_utility(adu, "x").values, Ux.values)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_random_multilinear_round_trip(kx, ky):
    g = Grid(0.0, 1.0, 31)
    Ux = UtilityFunction1D(g, g.nodes ** 1.5)
    Uy = cumulative(me.exponential_reference_density(-2.0, g))
    scale = max(1.0, kx + ky)
    kx, ky = kx / scale, ky / scale
    S = dm.multilinear_combine(Ux, Uy, kx, ky)
    back = dm.recompose_2d(dm.decompose_general_2d(S))
    # weights below the degeneracy threshold are dropped
    np.testing.assert_allclose(back.values, S.values, atol=dm.DEGENERATE_WEIGHT + 1e-13)
