import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as si
from scipy import optimize

from maxentutil import maxent as me
from maxentutil import metrics as mt
from maxentutil.errors import (
    ConvergenceError,
    DomainError,
    GridMismatchError,
    ImpulseLimitError,
    InfeasibleError,
    OrderingError,
    SpecError,
    ZeroMassError,
)
from maxentutil.grid import (
    Grid,
    GridFunction,
    UtilityDensity1D,
    UtilityFunction1D,
    cumulative,
    integrate,
)


def moment(d, k):
    return integrate(GridFunction(d.grid, d.grid.nodes ** k * d.values))


def solve(grid, *pairs, reference=None):
    cons = tuple(me.MomentConstraint(k, v) for k, v in pairs)
    return me.solve_maxent_density(me.MaxEntProblem(grid, cons, reference=reference))


def exp_mean(gamma):
    # mean of gamma e^{-gamma x} / (1 - e^{-gamma}) on [0, 1]
    return 1.0 / gamma - 1.0 / math.expm1(gamma)


# closed forms -------------------------------------------------------------------

def test_exponential_density_at_origin():
    v = me.exponential_utility_density(0.0, 2.0, 0.0, 1.0)
    assert abs(v - 2.0 / (1.0 - math.exp(-2.0))) <= 1e-9


@pytest.mark.parametrize("gamma", [-30.0, -4.0, -0.5, 0.0, 1.0, 8.0, 200.0])
def test_exponential_density_integrates_to_one(gamma):
    f = lambda x: float(me.exponential_utility_density(x, gamma, -1.0, 2.0))
    mass, _ = si.quad(f, -1.0, 2.0, points=[-1.0, 2.0], epsabs=1e-13, limit=200)
    assert mass == pytest.approx(1.0, abs=1e-9)


def test_impulse_limit():
    with pytest.raises(ImpulseLimitError):
        me.exponential_utility_density(0.5, 800.0, 0.0, 1.0)


def test_reference_density_on_grid_and_mean_oracle():
    grid = Grid(0.0, 1.0)
    d = me.exponential_reference_density(2.0, grid)
    assert integrate(d) == pytest.approx(1.0, abs=1e-12)
    oracle, _ = si.quad(lambda x: x * 2 * math.exp(-2 * x) / (1 - math.exp(-2)), 0, 1, epsabs=1e-14)
    assert moment(d, 1) == pytest.approx(oracle, abs=1e-6)
    assert oracle == pytest.approx(exp_mean(2.0), abs=1e-13)


def test_jeffreys_needs_positive_domain():
    with pytest.raises(DomainError):
        me.jeffreys_density(Grid(0.0, 1.0))


# dual solver ---------------------------------------------------------------------

@pytest.mark.parametrize("gamma", [-4.0, 2.0, 4.0])
def test_raw_closed_form_deviation_is_quadrature_residual(gamma):
    """Against the unnormalized closed form the gap is the trapezoid residual."""
    grid = Grid(0.0, 1.0, 1001)
    target = me.exponential_reference_density(gamma, grid)
    d, _ = solve(grid, (1, moment(target, 1)))
    raw = me.exponential_utility_density(grid.nodes, gamma, 0.0, 1.0)
    residual = abs(integrate(GridFunction(grid, raw)) - 1.0)
    assert residual == pytest.approx(grid.spacing ** 2 * gamma ** 2 / 12, rel=1e-3)
    gap = np.abs(d.values - raw).max()
    assert gap <= 1.01 * residual * raw.max() + 1e-10
    fine = Grid(0.0, 1.0, 8001)
    d_fine, _ = solve(fine, (1, exp_mean(gamma)))
    raw_fine = me.exponential_utility_density(fine.nodes, gamma, 0.0, 1.0)
    assert np.abs(d_fine.values - raw_fine).max() <= 1e-6


def test_mean_recovers_risk_aversion():
    grid = Grid(0.0, 1.0)
    d, sol = solve(grid, (1, 0.34348))
    g_star = optimize.brentq(lambda g: moment(me.exponential_reference_density(g, grid), 1) - 0.34348,
                             0.5, 5.0, xtol=1e-14)
    assert -sol.multipliers[0] == pytest.approx(g_star, abs=1e-7)
    assert g_star == pytest.approx(2.0, abs=1e-3)


def test_centred_mean_gives_uniform():
    grid = Grid(-2.0, 4.0, 301)
    d, sol = solve(grid, (1, 1.0))
    np.testing.assert_allclose(d.values, 1.0 / 6.0, atol=1e-12)
    assert abs(sol.multipliers[0]) < 1e-10


def test_entropy_matches_oracle():
    grid = Grid(0.0, 1.0)
    d, _ = solve(grid, (1, exp_mean(2.0)))
    f = lambda x: 2 * math.exp(-2 * x) / (1 - math.exp(-2))
    oracle, _ = si.quad(lambda x: -f(x) * math.log(f(x)), 0, 1, epsabs=1e-14)
    assert mt.differential_entropy(d) == pytest.approx(oracle, abs=1e-6)


def test_non_contiguous_orders():
    grid = Grid(-1.0, 1.0, 401)
    d, sol = solve(grid, (2, 0.2))
    assert moment(d, 2) == pytest.approx(0.2, abs=1e-10)
    assert abs(moment(d, 1)) < 1e-12
    d, sol = solve(Grid(10.0, 30.0, 401), (1, 18.0), (3, 7000.0))
    assert moment(d, 1) == pytest.approx(18.0, rel=1e-12)
    assert moment(d, 3) == pytest.approx(7000.0, rel=1e-12)


def test_three_moments():
    grid = Grid(0.0, 1.0, 501)
    x = grid.nodes
    src = UtilityDensity1D(grid, (1 + x - 0.8 * x ** 2) / integrate(GridFunction(grid, 1 + x - 0.8 * x ** 2)))
    targets = [(k, moment(src, k)) for k in (1, 2, 3)]
    d, sol = solve(grid, *targets)
    for k, v in targets:
        assert moment(d, k) == pytest.approx(v, abs=1e-10)
    assert sol.max_residual <= 1e-10


def test_objective_history_is_monotone():
    grid = Grid(0.0, 1.0)
    _, sol = solve(grid, (1, 0.5), (2, 0.26))
    h = np.array(sol.objective_history)
    slack = 64 * np.finfo(float).eps * (1 + np.abs(h[:-1]))
    assert np.all(np.diff(h) <= slack)


@pytest.mark.parametrize("pairs", [
    [(1, 1.0)],
    [(1, -0.1)],
    [(1, 0.5), (2, 0.25)],
    [(1, 0.5), (2, 0.6)],
    [(2, 1.2)],
])
def test_infeasible(pairs):
    with pytest.raises(InfeasibleError):
        solve(Grid(0.0, 1.0, 201), *pairs)


def test_convergence_error():
    with pytest.raises(ConvergenceError) as info:
        me.solve_maxent_density(me.MaxEntProblem(Grid(0.0, 1.0), (me.MomentConstraint(1, 0.02),)),
                                max_iter=1)
    assert info.value.iterations == 1
    assert info.value.exit_code == 4


def test_problem_validation():
    g = Grid(0.0, 1.0, 11)
    with pytest.raises(SpecError):
        me.MaxEntProblem(g, (me.MomentConstraint(1, 0.3), me.MomentConstraint(1, 0.4)))
    with pytest.raises(SpecError):
        me.MomentConstraint(0, 0.3)
    with pytest.raises(DomainError):
        me.MaxEntProblem(g, utility_points=(me.UtilityPointConstraint(1.5, 0.5),))
    with pytest.raises(GridMismatchError):
        me.MaxEntProblem(g, reference=me.exponential_reference_density(1.0, Grid(0.0, 1.0, 12)))
    with pytest.raises(SpecError):
        me.solve_maxent_density(me.MaxEntProblem(g, utility_points=(me.UtilityPointConstraint(0.5, 0.5),)))


# minimum cross-entropy ----------------------------------------------------------------

def test_reference_with_its_own_mean_is_returned():
    grid = Grid(0.0, 1.0)
    ref = me.exponential_reference_density(-3.0, grid)
    d, sol = solve(grid, (1, moment(ref, 1)), reference=ref)
    np.testing.assert_allclose(d.values, ref.values, rtol=1e-9)
    assert abs(sol.multipliers[0]) < 1e-8


def test_cross_entropy_tilts_reference():
    grid = Grid(1.0, math.e)
    ref = me.jeffreys_density(grid)
    d, sol = me.min_cross_entropy_density(me.MaxEntProblem(grid, (me.MomentConstraint(1, 2.0),),
                                                           reference=ref))
    tilt = d.values / ref.values
    lam = sol.multipliers[0]
    np.testing.assert_allclose(tilt / tilt[0], np.exp(lam * (grid.nodes - 1.0)), rtol=1e-9)
    assert mt.kl_distance(d, ref) > 0


def test_cross_entropy_needs_positive_reference():
    grid = Grid(0.0, 1.0, 11)
    v = np.r_[0.0, np.full(10, 1.0)]
    ref = UtilityDensity1D(grid, v / integrate(GridFunction(grid, v)))
    with pytest.raises(ZeroMassError):
        me.min_cross_entropy_density(me.MaxEntProblem(grid, reference=ref))
    with pytest.raises(SpecError):
        me.min_cross_entropy_density(me.MaxEntProblem(grid))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.03, 0.97))
def test_any_interior_mean_is_met(frac):
    grid = Grid(0.0, 1.0, 201)
    d, sol = solve(grid, (1, frac))
    assert moment(d, 1) == pytest.approx(frac, abs=1e-10)
    assert d.values.min() > 0


# known utility points ------------------------------------------------------------------

def test_knots_levels_and_entropy():
    grid = Grid(0.0, 1.0)
    pts = (me.UtilityPointConstraint(0.6, 0.7), me.UtilityPointConstraint(0.2, 0.5))
    xs, levels = me.knot_density_levels(grid, pts)
    np.testing.assert_allclose(xs, [0.0, 0.2, 0.6, 1.0])
    np.testing.assert_allclose(levels, [2.5, 0.5, 0.75])
    dv = me.knot_density_values(grid, pts)
    assert dv(0.1) == pytest.approx(2.5)
    assert dv.values[grid.index_of(0.2)] == pytest.approx(0.5)


@pytest.mark.parametrize("pts", [
    [(0.2, 0.5), (0.6, 0.4)],
    [(0.3, 0.5), (0.3, 0.6)],
])
def test_knots_must_be_ordered(pts):
    grid = Grid(0.0, 1.0, 101)
    with pytest.raises(OrderingError):
        me.maxent_utility_from_points(grid, [me.UtilityPointConstraint(x, u) for x, u in pts])


def test_utility_point_value_range():
    with pytest.raises(OrderingError):
        me.UtilityPointConstraint(0.5, 1.0)


# shape -------------------------------------------------------------------------------

@pytest.mark.parametrize("f,shape,n_infl", [
    (lambda x: x, "linear", 0),
    (lambda x: x ** 2, "convex", 0),
    (lambda x: np.sqrt(x), "concave", 0),
    (lambda x: 3 * x ** 2 - 2 * x ** 3, "convex-concave", 1),
    (lambda x: 0.5 + 4 * (x - 0.5) ** 3, "concave-convex", 1),
    (lambda x: x + 0.02 * np.sin(6 * np.pi * x), "mixed", 5),
])
def test_shape_diagnostics(f, shape, n_infl):
    grid = Grid(0.0, 1.0, 201)
    v = np.array(f(grid.nodes), dtype=float)
    v[0], v[-1] = 0.0, 1.0
    rep = me.shape_diagnostics(UtilityFunction1D(grid, v))
    assert rep.shape == shape
    assert len(rep.inflections) == n_infl
    assert rep.monotone


def test_s_shape_inflection_at_mode():
    grid = Grid(0.0, 1.0)
    d, _ = solve(grid, (1, 0.5), (2, 0.26))
    rep = me.shape_diagnostics(cumulative(d))
    assert rep.shape == "convex-concave"
    assert grid.nodes[rep.inflections[0]] == pytest.approx(0.5, abs=2 * grid.spacing)
