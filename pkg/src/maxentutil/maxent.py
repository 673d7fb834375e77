"""Maximum-entropy and minimum-cross-entropy utility densities on a bounded domain.

Moment constraints give densities of exponential-family form
``q(x) exp(sum_k lam_k x**k) / Z`` where ``q`` is the reference density
(uniform when absent). The multipliers minimize the strictly convex dual
``log Z(lam) - lam . targets``, solved here by damped Newton iteration with
a halving line search. Known utility points are handled in closed form:
the answer is the piecewise-linear interpolant through them.
"""
from dataclasses import dataclass, field
from math import comb

import numpy as np

from maxentutil import kernels
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
    GridFunction,
    UtilityDensity1D,
    UtilityFunction1D,
    normalize_density,
)

RESIDUAL_TOL = 1e-10
MAX_ITER = 100
MAX_HALVINGS = 60
IMPULSE_LIMIT = 700.0
SHAPE_ZERO_TOL = 1e-9


@dataclass(frozen=True)
class MomentConstraint:
    """Raw moment ``E[x**order] = value``."""

    order: int
    value: float

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise SpecError(f"moment order must be a positive integer, got {self.order!r}")
        if not np.isfinite(self.value):
            raise SpecError("moment value must be finite")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class UtilityPointConstraint:
    """A known utility value ``u`` at prospect ``x``."""

    x: float
    u: float

    def __post_init__(self):
        if not 0.0 < self.u < 1.0:
            raise OrderingError(f"a known utility must lie strictly inside (0, 1), got {self.u}")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "u", float(self.u))


@dataclass(frozen=True, eq=False)
class MaxEntProblem:
    grid: object
    moments: tuple = ()
    utility_points: tuple = ()
    reference: UtilityDensity1D = None

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(self.moments))
        object.__setattr__(self, "utility_points", tuple(self.utility_points))
        orders = [m.order for m in self.moments]
        if len(set(orders)) != len(orders):
            raise SpecError(f"moment orders must be distinct, got {orders}")
        for p in self.utility_points:
            if not self.grid.lower < p.x < self.grid.upper:
                raise DomainError(f"utility point x={p.x} is not inside the domain")
        if self.reference is not None and self.reference.grid != self.grid:
            raise GridMismatchError("reference density lives on a different grid")


@dataclass(frozen=True, eq=False)
class DualSolution:
    """Outcome of the dual Newton iteration.

    ``multipliers`` are in raw ``x`` coordinates, one per moment constraint in
    the order given; ``log_partition`` is the log of the trapezoid integral
    of ``q(x) exp(sum lam_k x**k)``.
    """

    multipliers: tuple
    orders: tuple
    log_partition: float
    residuals: tuple
    iterations: int
    objective_history: tuple = field(default=(), repr=False)

    @property
    def max_residual(self):
        return max((abs(r) for r in self.residuals), default=0.0)


# exponential-family machinery -------------------------------------------------

def _raw_moments(density, orders):
    x, w = density.grid.nodes, density.grid.weights
    return np.array([np.dot(w, density.values * x ** k) for k in orders])


def _check_feasible(grid, targets):
    x = grid.nodes
    for k, v in targets.items():
        xk = x ** k
        lo, hi = xk.min(), xk.max()
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        if not lo + slack < v < hi - slack:
            raise InfeasibleError(
                f"moment of order {k} = {v} is outside the attainable range ({lo}, {hi})")
    if 1 in targets and 2 in targets:
        m1, m2 = targets[1], targets[2]
        a, b = grid.lower, grid.upper
        scale = max(1.0, a * a, b * b)
        if m2 - m1 * m1 <= 1e-14 * scale:
            raise InfeasibleError(
                f"second moment {m2} implies a nonpositive variance for mean {m1}")
        if m2 >= (a + b) * m1 - a * b - 1e-14 * scale:
            raise InfeasibleError(
                f"second moment {m2} exceeds the largest attainable value "
                f"{(a + b) * m1 - a * b} for mean {m1} on [{a}, {b}]")


class _Coordinates:
    """Scaled statistics for a well-conditioned Newton system.

    With orders 1..n all present the statistics are powers of the centred and
    scaled variable; this spans the same family of densities. Otherwise only
    scaling is applied, which leaves each power's span unchanged.
    """

    def __init__(self, grid, orders):
        a, b = grid.lower, grid.upper
        self.orders = tuple(orders)
        if sorted(orders) == list(range(1, len(orders) + 1)):
            self.center, self.scale = 0.5 * (a + b), 0.5 * (b - a)
        else:
            self.center, self.scale = 0.0, max(abs(a), abs(b))
        t = (grid.nodes - self.center) / self.scale
        self.phi = np.vstack([t ** k for k in self.orders]) if orders else np.zeros((0, t.size))

    def targets(self, raw):
        c, s = self.center, self.scale
        if c == 0.0:
            return np.array([raw[k] / s ** k for k in self.orders])
        out = []
        for k in self.orders:
            acc = 0.0
            for j in range(k + 1):
                mj = 1.0 if j == 0 else raw[j]
                acc += comb(k, j) * mj * (-c) ** (k - j)
            out.append(acc / s ** k)
        return np.array(out)

    def to_raw(self, mu):
        """Convert scaled multipliers to raw ones; also return the constant term."""
        c, s = self.center, self.scale
        top = max(self.orders, default=0)
        coef = np.zeros(top + 1)
        for m, k in zip(mu, self.orders):
            for j in range(k + 1):
                coef[j] += m * comb(k, j) * (-c) ** (k - j) / s ** k
        return tuple(float(coef[k]) for k in self.orders), float(coef[0])


def _solve_dual(problem, base, tol, max_iter, max_halvings):
    grid = problem.grid
    orders = tuple(m.order for m in problem.moments)
    raw_targets = {m.order: m.value for m in problem.moments}
    if orders:
        _check_feasible(grid, raw_targets)
    coords = _Coordinates(grid, orders)
    tau = coords.targets(raw_targets)
    with np.errstate(divide="ignore"):
        logbase = np.log(grid.weights * base)
    reach = max(abs(grid.lower), abs(grid.upper))
    raw_tol = np.array([tol * max(1.0, reach ** k) for k in orders])
    target_vec = np.array([raw_targets[k] for k in orders])

    def evaluate(mu):
        logz, mean, cov = kernels.expfamily_stats(coords.phi, logbase, mu)
        return logz, mean, cov, logz - float(mu @ tau)

    def density_at(mu, logz):
        # logz carries the quadrature weights, so this already integrates to 1
        with np.errstate(under="ignore"):
            vals = base * np.exp(mu @ coords.phi - logz)
        return normalize_density(GridFunction(grid, vals))

    mu = np.zeros(len(orders))
    logz, mean, cov, F = evaluate(mu)
    history = [F]
    for it in range(max_iter + 1):
        dens = density_at(mu, logz)
        resid = _raw_moments(dens, orders) - target_vec
        if np.all(np.abs(resid) <= raw_tol):
            break
        if it == max_iter:
            raise ConvergenceError(
                f"dual Newton iteration did not converge in {max_iter} iterations "
                f"(max residual {np.abs(resid).max():.3e})",
                residuals=tuple(resid.tolist()), iterations=it)
        g = mean - tau
        try:
            step_dir = np.linalg.solve(cov, -g)
        except np.linalg.LinAlgError:
            step_dir = np.linalg.lstsq(cov, -g, rcond=None)[0]
        slope = float(g @ step_dir)
        floor = 64 * np.finfo(float).eps * (1.0 + abs(F))
        if abs(slope) <= floor:
            # predicted decrease is below the objective's rounding: Newton is
            # already quadratic here, so take the full step
            trial = mu + step_dir
            t_logz, t_mean, t_cov, t_F = evaluate(trial)
        else:
            step = 1.0
            for _ in range(max_halvings + 1):
                trial = mu + step * step_dir
                t_logz, t_mean, t_cov, t_F = evaluate(trial)
                if np.isfinite(t_F) and t_F <= F + 1e-4 * step * slope:
                    break
                step *= 0.5
            else:
                raise ConvergenceError(
                    "line search failed to decrease the dual objective "
                    f"(max residual {np.abs(resid).max():.3e})",
                    residuals=tuple(resid.tolist()), iterations=it)
        mu, logz, mean, cov, F = trial, t_logz, t_mean, t_cov, t_F
        history.append(F)

    raw_mult, const = coords.to_raw(mu)
    # trapezoid log-partition in raw coordinates: log sum w q exp(lam . x^k)
    log_partition = logz - const
    sol = DualSolution(
        multipliers=raw_mult,
        orders=orders,
        log_partition=float(log_partition),
        residuals=tuple(resid.tolist()),
        iterations=it,
        objective_history=tuple(history),
    )
    return dens, sol


def solve_maxent_density(problem, *, tol=RESIDUAL_TOL, max_iter=MAX_ITER,
                         max_halvings=MAX_HALVINGS):
    """Maximum-entropy density under the problem's moment constraints.

    Returns ``(density, DualSolution)``. A reference density, when present,
    turns this into the minimum-cross-entropy problem relative to it.
    """
    if problem.utility_points:
        raise SpecError("known utility points are solved by maxent_utility_from_points")
    if problem.reference is None:
        base = np.ones(problem.grid.points)
    else:
        base = np.asarray(problem.reference.values)
    return _solve_dual(problem, base, tol, max_iter, max_halvings)


def min_cross_entropy_density(problem, **kwargs):
    """Density closest in KL-distance to ``problem.reference`` meeting the moments."""
    if problem.reference is None:
        raise SpecError("minimum cross-entropy needs a reference density")
    if np.any(problem.reference.values <= 0.0):
        raise ZeroMassError("reference density vanishes on part of the grid")
    return solve_maxent_density(problem, **kwargs)


# closed-form families ---------------------------------------------------------

def exponential_utility_density(x, gamma, lower, upper):
    """``gamma exp(-gamma x) / (exp(-gamma a) - exp(-gamma b))`` evaluated stably."""
    x = np.asarray(x, dtype=np.float64)
    width = upper - lower
    if gamma == 0.0:
        return np.full_like(x, 1.0 / width)
    g = abs(gamma)
    if g * width > IMPULSE_LIMIT:
        raise ImpulseLimitError(
            f"|gamma| (b - a) = {g * width:.1f} exceeds {IMPULSE_LIMIT}; "
            "the density is effectively an impulse")
    norm = -np.expm1(-g * width)
    if gamma > 0:
        return g * np.exp(-g * (x - lower)) / norm
    return g * np.exp(-g * (upper - x)) / norm


def exponential_reference_density(gamma, grid):
    """Exponential utility density with risk aversion ``gamma`` on ``grid``.

    The closed form is normalized by the same trapezoid rule used
    everywhere else, so it is a valid density on the grid; gamma = 0 gives
    the uniform density.
    """
    vals = exponential_utility_density(grid.nodes, float(gamma), grid.lower, grid.upper)
    return normalize_density(GridFunction(grid, vals))


def jeffreys_density(grid):
    """Normalized ``1/x`` on ``[a, b]`` with ``a > 0``; its utility is logarithmic."""
    if grid.lower <= 0.0:
        raise DomainError(f"the 1/x density needs a positive domain, got lower={grid.lower}")
    vals = 1.0 / (grid.nodes * np.log(grid.upper / grid.lower))
    return normalize_density(GridFunction(grid, vals))


# known utility points ----------------------------------------------------------

def _knots(grid, points):
    pts = sorted(points, key=lambda p: p.x)
    xs = [grid.lower] + [p.x for p in pts] + [grid.upper]
    us = [0.0] + [p.u for p in pts] + [1.0]
    if np.any(np.diff(xs) <= 0.0):
        raise OrderingError("utility points must have distinct prospects inside the domain")
    if np.any(np.diff(us) <= 0.0):
        raise OrderingError("utility must strictly increase with the prospect between known points")
    return np.array(xs), np.array(us)


def maxent_utility_from_points(grid, points):
    """Piecewise-linear utility through ``(a, 0)``, the known points and ``(b, 1)``."""
    xs, us = _knots(grid, points)
    u = np.interp(grid.nodes, xs, us)
    u[0], u[-1] = 0.0, 1.0
    return UtilityFunction1D(grid, u)


def knot_density_levels(grid, points):
    """Height of the piecewise-constant density on each cell between knots.

    Returns ``(knot_x, levels)`` with ``len(levels) == len(knot_x) - 1``.
    """
    xs, us = _knots(grid, points)
    return xs, np.diff(us) / np.diff(xs)


def knot_density_values(grid, points):
    """Piecewise-constant density sampled at grid nodes, right-continuous at knots."""
    xs, levels = knot_density_levels(grid, points)
    cell = np.searchsorted(xs, grid.nodes, side="right") - 1
    cell = np.clip(cell, 0, levels.size - 1)
    return GridFunction(grid, levels[cell])


# shape --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ShapeReport:
    monotone: bool
    second_differences: np.ndarray = field(repr=False)
    signs: np.ndarray = field(repr=False)
    inflections: tuple
    shape: str


def shape_diagnostics(U, zero_tol=SHAPE_ZERO_TOL):
    """Curvature pattern of a utility function from its discrete second differences.

    ``inflections`` holds node indices where the sign of the second
    difference flips (differences below ``zero_tol`` count as zero and are
    skipped); each index is the midpoint of the zero run separating the two
    signs. ``shape`` is one of ``linear``, ``convex``, ``concave``,
    ``convex-concave``, ``concave-convex`` or ``mixed``.
    """
    v = np.asarray(U.values)
    d2 = v[2:] - 2.0 * v[1:-1] + v[:-2]
    signs = np.where(np.abs(d2) < zero_tol, 0, np.sign(d2)).astype(int)
    nz = np.flatnonzero(signs)
    inflections = []
    for i0, i1 in zip(nz[:-1], nz[1:]):
        if signs[i0] != signs[i1]:
            # d2[k] is centred on node k + 1
            inflections.append(int((i0 + i1) // 2) + 1)
    pattern = [int(signs[i]) for i in nz]
    runs = [s for k, s in enumerate(pattern) if k == 0 or s != pattern[k - 1]]
    names = {(): "linear", (1,): "convex", (-1,): "concave",
             (1, -1): "convex-concave", (-1, 1): "concave-convex"}
    shape = names.get(tuple(runs), "mixed")
    return ShapeReport(
        monotone=bool(np.all(np.diff(v) >= -1e-12)),
        second_differences=d2,
        signs=signs,
        inflections=tuple(inflections),
        shape=shape,
    )
