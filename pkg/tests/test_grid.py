import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxentutil.errors import (
    DomainError,
    GridMismatchError,
    GridSizeError,
    MonotonicityError,
    NegativeDensityError,
    NormalizationError,
    ZeroMassError,
)
from maxentutil.grid import (
    Grid,
    GridFunction,
    UtilityDensity1D,
    UtilityFunction1D,
    cumulative,
    differentiate,
    integrate,
    linear_utility,
    make_grid,
    normalize_density,
    same_grid,
    uniform_density,
)


def test_grid_nodes_and_weights():
    g = Grid(0.0, 2.0, 5)
    np.testing.assert_allclose(g.nodes, [0.0, 0.5, 1.0, 1.5, 2.0])
    np.testing.assert_allclose(g.weights, [0.25, 0.5, 0.5, 0.5, 0.25])
    assert g.spacing == 0.5
    assert g.width == 2.0
    assert make_grid(0, 1).points == 1001


def test_grid_arrays_are_read_only():
    g = Grid(0.0, 1.0, 11)
    with pytest.raises(ValueError):
        g.nodes[0] = 5.0


@pytest.mark.parametrize("lower,upper,points,err", [
    (1.0, 0.0, 11, DomainError),
    (0.0, 0.0, 11, DomainError),
    (0.0, np.inf, 11, DomainError),
    (0.0, 1.0, 2, GridSizeError),
    (0.0, 1.0, 10.5, GridSizeError),
])
def test_grid_validation(lower, upper, points, err):
    with pytest.raises(err):
        Grid(lower, upper, points)


def test_index_of():
    g = Grid(0.0, 1.0, 11)
    assert g.index_of(0.3) == 3
    with pytest.raises(DomainError):
        g.index_of(0.35)
    with pytest.raises(DomainError):
        g.index_of(1.5)


def test_grid_function_interpolates():
    g = Grid(0.0, 1.0, 3)
    f = GridFunction(g, [0.0, 1.0, 4.0])
    np.testing.assert_allclose(f([0.25, 0.75]), [0.5, 2.5])
    with pytest.raises(GridMismatchError):
        GridFunction(g, [1.0, 2.0])


def test_trapezoid_exact_for_affine():
    g = Grid(-1.0, 3.0, 17)
    f = GridFunction(g, 2.0 * g.nodes + 1.0)
    assert integrate(f) == pytest.approx(12.0, abs=1e-13)


def test_density_invariants():
    g = Grid(0.0, 1.0, 11)
    with pytest.raises(NegativeDensityError):
        UtilityDensity1D(g, np.r_[-0.1, np.ones(10)])
    with pytest.raises(NormalizationError):
        UtilityDensity1D(g, np.full(11, 2.0))
    with pytest.raises(ZeroMassError):
        normalize_density(GridFunction(g, np.zeros(11)))
    with pytest.raises(NegativeDensityError):
        normalize_density(GridFunction(g, np.r_[-1.0, np.ones(10)]))


def test_utility_invariants():
    g = Grid(0.0, 1.0, 5)
    with pytest.raises(MonotonicityError):
        UtilityFunction1D(g, [0.0, 0.5, 0.4, 0.8, 1.0])
    with pytest.raises(MonotonicityError):
        UtilityFunction1D(g, [0.1, 0.2, 0.4, 0.8, 1.0])


def test_cumulative_of_uniform_is_linear():
    g = Grid(2.0, 7.0, 101)
    U = cumulative(uniform_density(g))
    np.testing.assert_allclose(U.values, linear_utility(g).values, atol=1e-15)
    assert U.values[0] == 0.0 and U.values[-1] == 1.0


def test_differentiate_inverts_cumulative():
    g = Grid(0.0, 1.0, 401)
    d = normalize_density(GridFunction(g, np.exp(-2.0 * g.nodes)))
    back = differentiate(cumulative(d))
    np.testing.assert_allclose(back.values, d.values, atol=1e-4)


def test_differentiate_exact_for_quadratic():
    g = Grid(0.0, 2.0, 21)
    U = GridFunction(g, g.nodes ** 2)
    np.testing.assert_allclose(differentiate(U).values, 2 * g.nodes, atol=1e-12)


def test_same_grid():
    same_grid(Grid(0, 1, 11), Grid(0.0, 1.0, 11))
    with pytest.raises(GridMismatchError):
        same_grid(Grid(0, 1, 11), Grid(0, 1, 12))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 10.0), min_size=3, max_size=60),
       st.floats(-5.0, 5.0), st.floats(0.1, 10.0))
def test_normalized_density_has_unit_mass(values, lower, width):
    g = Grid(lower, lower + width, len(values))
    d = normalize_density(GridFunction(g, values))
    assert integrate(d) == pytest.approx(1.0, abs=1e-12)
    U = cumulative(d)
    assert np.all(np.diff(U.values) >= 0.0)
