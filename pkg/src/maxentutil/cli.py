"""Command line front end.

Usage::

    maxentutil <subcommand> --spec FILE [--out FILE] [--format csv|json]
                            [--seed N] [--points N]

The subcommands are ``discrete``, ``verify``, ``maxent``, ``joint``,
``metrics`` and ``infer``. Problem specifications are JSON documents; see
the README for the schema. Errors go to standard error as one line::

    error code=<code> exit=<status>: <message>

with exit status 2 for specification errors, 3 for infeasible constraints,
4 for solver nonconvergence and 1 for I/O failures.
"""
import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from maxentutil import __version__, kernels
from maxentutil import dominance as dom
from maxentutil import maxent, metrics, prospects
from maxentutil.errors import DomainError, SpecError, UtilityError
from maxentutil.grid import (
    DEFAULT_POINTS,
    Grid,
    GridFunction,
    cumulative,
    differentiate,
    normalize_density,
    uniform_density,
)

KINDS = ("discrete", "verify", "maxent", "joint", "metrics", "infer")
JOINT_DEFAULT_POINTS = 201
DEFAULT_SAMPLES = 100000
_TOP_LEVEL = {
    "kind", "domain", "domain_y", "constraints", "constraints_y", "reference",
    "reference_y", "sampling", "multilinear", "given", "density", "joint_density",
    "surface",
}


class EmitError(UtilityError, OSError):
    code = "io_error"
    exit_code = 1


# specification -------------------------------------------------------------------

@dataclass(frozen=True)
class DomainSpec:
    lower: float
    upper: float
    points: int

    def grid(self):
        return Grid(self.lower, self.upper, self.points)


@dataclass(frozen=True)
class SourceSpec:
    """A density given by name: uniform, jeffreys, exponential(gamma) or a CSV file."""

    kind: str
    gamma: float = None
    path: str = None


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    domain: DomainSpec = None
    domain_y: DomainSpec = None
    moments: tuple = ()
    utility_points: tuple = ()
    moments_y: tuple = ()
    utility_points_y: tuple = ()
    reference: SourceSpec = None
    reference_y: SourceSpec = None
    sampling: dict = None
    multilinear: tuple = None
    given: tuple = None
    density: SourceSpec = None
    joint_density: str = None
    surface: str = None
    document: dict = field(default=None, compare=False, repr=False)

    @property
    def seed(self):
        return None if self.sampling is None else self.sampling["seed"]


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise SpecError(f"{where}: expected a finite number")
    return float(value)


def _integer(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"{where}: expected an integer, got {value!r}")
    return value


def _object(value, where, allowed):
    if not isinstance(value, dict):
        raise SpecError(f"{where}: expected an object, got {value!r}")
    extra = set(value) - set(allowed)
    if extra:
        raise SpecError(f"{where}: unknown field {sorted(extra)[0]!r}")
    return value


def _parse_domain(raw, where, default_points):
    raw = _object(raw, where, {"lower", "upper", "points"})
    for key in ("lower", "upper"):
        if key not in raw:
            raise SpecError(f"{where}.{key}: required field missing")
    lower = _number(raw["lower"], f"{where}.lower")
    upper = _number(raw["upper"], f"{where}.upper")
    points = _integer(raw.get("points", default_points), f"{where}.points")
    if lower >= upper:
        raise SpecError(f"{where}: lower ({lower}) must be below upper ({upper})")
    if points < 3:
        raise SpecError(f"{where}.points: need at least 3 points, got {points}")
    return DomainSpec(lower, upper, points)


def _scalar_or_value(raw, where):
    if isinstance(raw, dict):
        raw = _object(raw, where, {"value"})
        if "value" not in raw:
            raise SpecError(f"{where}.value: required field missing")
        raw = raw["value"]
    return _number(raw, where)


def _parse_constraints(raw, where):
    if raw is None:
        return (), ()
    if not isinstance(raw, list):
        raise SpecError(f"{where}: expected a list of constraint records")
    moments, points = {}, []
    mean = variance = None
    for i, rec in enumerate(raw):
        here = f"{where}[{i}]"
        if not isinstance(rec, dict) or len(rec) != 1:
            raise SpecError(f"{here}: each constraint is an object with exactly one tag")
        (tag, body), = rec.items()
        if tag == "moment":
            body = _object(body, f"{here}.moment", {"order", "value"})
            if "order" not in body or "value" not in body:
                raise SpecError(f"{here}.moment: needs 'order' and 'value'")
            order = _integer(body["order"], f"{here}.moment.order")
            if order < 1:
                raise SpecError(f"{here}.moment.order: must be a positive integer")
            if order in moments:
                raise SpecError(f"{here}: duplicate constraint on moment order {order}")
            moments[order] = _number(body["value"], f"{here}.moment.value")
        elif tag == "utility_point":
            body = _object(body, f"{here}.utility_point", {"x", "u"})
            if "x" not in body or "u" not in body:
                raise SpecError(f"{here}.utility_point: needs 'x' and 'u'")
            points.append((_number(body["x"], f"{here}.utility_point.x"),
                           _number(body["u"], f"{here}.utility_point.u")))
        elif tag == "mean":
            if mean is not None:
                raise SpecError(f"{here}: duplicate mean constraint")
            mean = _scalar_or_value(body, f"{here}.mean")
        elif tag == "variance":
            if variance is not None:
                raise SpecError(f"{here}: duplicate variance constraint")
            variance = _scalar_or_value(body, f"{here}.variance")
            if variance <= 0.0:
                raise SpecError(f"{here}.variance: must be positive")
        else:
            raise SpecError(f"{here}: unknown constraint tag {tag!r}")
    if mean is not None:
        if 1 in moments:
            raise SpecError(f"{where}: both 'mean' and a first-moment constraint given")
        moments[1] = mean
    if variance is not None:
        if 1 not in moments:
            raise SpecError(f"{where}: a variance constraint needs a mean")
        if 2 in moments:
            raise SpecError(f"{where}: both 'variance' and a second-moment constraint given")
        moments[2] = variance + moments[1] ** 2
    moment_list = tuple(maxent.MomentConstraint(k, moments[k]) for k in sorted(moments))
    try:
        point_list = tuple(maxent.UtilityPointConstraint(x, u) for x, u in points)
    except UtilityError as exc:
        raise SpecError(f"{where}: {exc}") from None
    return moment_list, point_list


def _parse_source(raw, where, base_dir):
    if isinstance(raw, str):
        raw = {raw: {}}
    if not isinstance(raw, dict) or len(raw) != 1:
        raise SpecError(f"{where}: expected 'uniform', 'jeffreys', "
                        "{'exponential': {'gamma': g}} or {'file': path}")
    (tag, body), = raw.items()
    if tag in ("uniform", "jeffreys"):
        _object(body, f"{where}.{tag}", set())
        return SourceSpec(tag)
    if tag == "exponential":
        body = _object(body, f"{where}.exponential", {"gamma"})
        if "gamma" not in body:
            raise SpecError(f"{where}.exponential.gamma: required field missing")
        return SourceSpec("exponential", gamma=_number(body["gamma"], f"{where}.exponential.gamma"))
    if tag == "file":
        return SourceSpec("file", path=_resolve(body, f"{where}.file", base_dir))
    raise SpecError(f"{where}: unknown density source {tag!r}")


def _resolve(path, where, base_dir):
    if not isinstance(path, str) or not path:
        raise SpecError(f"{where}: expected a file path")
    p = Path(path)
    if not p.is_absolute() and base_dir is not None:
        p = Path(base_dir) / p
    return str(p)


def parse_spec(text, base_dir=None, command=None, seed=None, points=None):
    """Parse and validate a JSON problem specification.

    ``command`` is the subcommand in use; ``seed`` and ``points`` override the
    document. Relative file paths resolve against ``base_dir``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SpecError("the specification must be a JSON object")
    unknown = set(doc) - _TOP_LEVEL
    if unknown:
        raise SpecError(f"unknown field {sorted(unknown)[0]!r}")
    kind = doc.get("kind", command)
    if kind not in KINDS:
        raise SpecError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    if command is not None and command != kind and {command, kind} != {"discrete", "verify"}:
        raise SpecError(f"kind: specification is for {kind!r} but the subcommand is {command!r}")
    if command in ("discrete", "verify"):
        kind = command

    joint_like = kind in ("joint", "infer")
    default_points = JOINT_DEFAULT_POINTS if joint_like else DEFAULT_POINTS
    out = {"kind": kind, "document": doc}

    def domain(key):
        if key not in doc:
            return None
        d = _parse_domain(doc[key], key, default_points)
        if points is not None:
            d = DomainSpec(d.lower, d.upper, _integer(points, "--points"))
            if d.points < 3:
                raise SpecError(f"--points: need at least 3 points, got {d.points}")
        return d

    out["domain"] = domain("domain")
    out["domain_y"] = domain("domain_y")
    out["moments"], out["utility_points"] = _parse_constraints(doc.get("constraints"), "constraints")
    out["moments_y"], out["utility_points_y"] = _parse_constraints(
        doc.get("constraints_y"), "constraints_y")
    for key in ("reference", "reference_y", "density"):
        if key in doc:
            out[key] = _parse_source(doc[key], key, base_dir)

    if "sampling" in doc:
        s = _object(doc["sampling"], "sampling", {"K", "n", "seed"})
        if "K" not in s:
            raise SpecError("sampling.K: required field missing")
        K = _integer(s["K"], "sampling.K")
        n = _integer(s.get("n", DEFAULT_SAMPLES), "sampling.n")
        sd = _integer(s.get("seed", 0), "sampling.seed")
        if seed is not None:
            sd = seed
        if K < 2:
            raise SpecError(f"sampling.K: need at least two prospects, got {K}")
        if n < 1:
            raise SpecError(f"sampling.n: need at least one sample, got {n}")
        out["sampling"] = {"K": K, "n": n, "seed": sd}

    if "multilinear" in doc:
        m = _object(doc["multilinear"], "multilinear", {"k_x", "k_y"})
        out["multilinear"] = (_number(m.get("k_x", 0.0), "multilinear.k_x"),
                              _number(m.get("k_y", 0.0), "multilinear.k_y"))
    if "given" in doc:
        g = _object(doc["given"], "given", {"axis", "value"})
        if g.get("axis") not in ("x", "y"):
            raise SpecError("given.axis: expected 'x' or 'y'")
        if "value" not in g:
            raise SpecError("given.value: required field missing")
        out["given"] = (g["axis"], _number(g["value"], "given.value"))
    for key in ("joint_density", "surface"):
        if key in doc:
            body = _object(doc[key], key, {"file"})
            out[key] = _resolve(body.get("file"), f"{key}.file", base_dir)

    spec = ProblemSpec(**out)
    _check_kind_fields(spec)
    return spec


def _check_kind_fields(spec):
    k = spec.kind
    if k in ("discrete", "verify"):
        if spec.sampling is None:
            raise SpecError("sampling: required for discrete and verify problems")
        if k == "verify" and spec.sampling["K"] < 3:
            raise SpecError("sampling.K: verification needs at least three prospects")
    if k in ("maxent", "joint") and spec.domain is None:
        raise SpecError("domain: required field missing")
    if k == "maxent" and spec.moments and spec.utility_points:
        raise SpecError("constraints: combine either moments or utility points, not both")
    if k == "maxent" and spec.utility_points and spec.reference is not None:
        raise SpecError("reference: not supported together with utility points")
    if k == "metrics":
        if spec.density is None and spec.joint_density is None:
            raise SpecError("density: a metrics problem needs 'density' or 'joint_density'")
        if spec.density is not None and spec.domain is None:
            raise SpecError("domain: required for a 1-D density")
    if k == "infer":
        if spec.given is None:
            raise SpecError("given: required for infer problems")
        if spec.surface is None and spec.domain is None:
            raise SpecError("domain: required unless a surface file is given")


# densities from sources ---------------------------------------------------------

def _read_table(path, columns):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            rows = list(reader)
    except OSError as exc:
        raise EmitError(f"cannot read {path}: {exc.strerror}") from None
    if header is None:
        raise SpecError(f"{path}: empty file")
    header = [h.strip() for h in header]
    missing = [c for c in columns if c not in header]
    if missing:
        raise SpecError(f"{path}: missing column {missing[0]!r}")
    idx = [header.index(c) for c in columns]
    try:
        data = np.array([[float(r[i]) for i in idx] for r in rows if r], dtype=np.float64)
    except (ValueError, IndexError):
        raise SpecError(f"{path}: non-numeric or short row") from None
    if data.shape[0] < 2 or not np.all(np.isfinite(data)):
        raise SpecError(f"{path}: need at least two finite rows")
    return data


def read_density_file(path, grid):
    """Read an ``x,density`` table and interpolate it linearly onto ``grid``."""
    data = _read_table(path, ("x", "density"))
    order = np.argsort(data[:, 0], kind="stable")
    x, f = data[order, 0], data[order, 1]
    slack = 1e-9 * grid.width
    if x[0] > grid.lower + slack or x[-1] < grid.upper - slack:
        raise DomainError(f"{path}: table covers [{x[0]}, {x[-1]}], not the domain "
                          f"[{grid.lower}, {grid.upper}]")
    return normalize_density(GridFunction(grid, np.interp(grid.nodes, x, f)))


def _grid_from_column(values, path, axis):
    u = np.unique(values)
    g = Grid(u[0], u[-1], u.size)
    if np.abs(g.nodes - u).max() > 1e-9 * g.width:
        raise SpecError(f"{path}: {axis} values are not evenly spaced")
    return g


def _read_surface_table(path, column):
    data = _read_table(path, ("x", "y", column))
    gx = _grid_from_column(data[:, 0], path, "x")
    gy = _grid_from_column(data[:, 1], path, "y")
    if data.shape[0] != gx.points * gy.points:
        raise SpecError(f"{path}: expected {gx.points * gy.points} rows for a full grid")
    order = np.lexsort((data[:, 1], data[:, 0]))
    return dom.Grid2D(gx, gy), data[order, 2].reshape(gx.points, gy.points)


def read_surface_file(path):
    grid, v = _read_surface_table(path, "utility")
    return dom.AttributeDominanceUtility2D(grid, v)


def read_joint_density_file(path):
    grid, v = _read_surface_table(path, "density")
    mass = dom.integrate_surface(dom.Surface(grid, v))
    if not mass > 0:
        raise SpecError(f"{path}: density has no mass")
    return dom.JointUtilityDensity2D(grid, v / mass)


def build_density(source, grid):
    if source is None or source.kind == "uniform":
        return uniform_density(grid)
    if source.kind == "jeffreys":
        return maxent.jeffreys_density(grid)
    if source.kind == "exponential":
        return maxent.exponential_reference_density(source.gamma, grid)
    return read_density_file(source.path, grid)


# running ----------------------------------------------------------------------------

@dataclass
class ResultBundle:
    kind: str
    columns: tuple
    rows: list
    metrics: dict = None
    diagnostics: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    report: dict = None


def _solve_axis(domain, moments, points, reference):
    """Return ``(density GridFunction, utility, diagnostics, DualSolution or None)``."""
    grid = domain.grid()
    if points:
        U = maxent.maxent_utility_from_points(grid, points)
        xs, levels = maxent.knot_density_levels(grid, points)
        diag = {"method": "piecewise_linear", "knots_x": xs.tolist(),
                "density_levels": levels.tolist()}
        return maxent.knot_density_values(grid, points), U, diag, None
    ref = None if reference is None else build_density(reference, grid)
    problem = maxent.MaxEntProblem(grid, moments, reference=ref)
    d, sol = maxent.solve_maxent_density(problem)
    diag = {
        "method": "dual_newton",
        "orders": list(sol.orders),
        "multipliers": list(sol.multipliers),
        "log_partition": sol.log_partition,
        "residuals": list(sol.residuals),
        "iterations": sol.iterations,
    }
    return d, cumulative(d), diag, sol


def _piecewise_entropy(diag):
    xs = np.asarray(diag["knots_x"])
    levels = np.asarray(diag["density_levels"])
    return float(-np.sum(np.diff(xs) * levels * np.log(levels)))


def _shape_diag(U):
    s = maxent.shape_diagnostics(U)
    return {"shape": s.shape, "monotone": s.monotone,
            "inflection_x": [float(U.grid.nodes[i]) for i in s.inflections]}


def _table_1d(d, U):
    return [(float(x), float(a), float(b)) for x, a, b in zip(U.grid.nodes, d.values, U.values)]


def _table_2d(grid, density, utility):
    x, y = np.meshgrid(grid.x_grid.nodes, grid.y_grid.nodes, indexing="ij")
    return list(zip(x.ravel().tolist(), y.ravel().tolist(),
                    np.asarray(density).ravel().tolist(), np.asarray(utility).ravel().tolist()))


def _run_discrete(spec):
    K = spec.sampling["K"]
    U = prospects.maxent_utility_vector(K)
    report = {"utilities": U.values.tolist(), "increments": U.increments().increments.tolist()}
    if K >= 3:
        report["value_marginals"] = [
            {"j": j, "alpha": b.alpha, "beta": b.beta, "mean": b.mean}
            for j, b in ((j, prospects.beta_marginal_of_value(j, K)) for j in range(1, K - 1))]
        inc = prospects.beta_marginal_of_increment(K)
        report["increment_marginal"] = {"alpha": inc.alpha, "beta": inc.beta, "mean": inc.mean}
    rows = [(j, float(u)) for j, u in enumerate(U.values)]
    return ResultBundle("discrete", ("j", "utility"), rows, report=report)


def _run_verify(spec):
    s = spec.sampling
    rep = prospects.verify_propositions(s["K"], s["n"], s["seed"])
    rows = []
    for j, vals in enumerate(zip(rep.value_mean, rep.value_analytic_mean,
                                 rep.value_variance, rep.value_analytic_variance), start=1):
        rows.append(("value", j) + tuple(vals))
    for j, vals in enumerate(zip(rep.increment_mean, rep.increment_analytic_mean,
                                 rep.increment_variance, rep.increment_analytic_variance), start=1):
        rows.append(("increment", j) + tuple(vals))
    columns = ("quantity", "index", "empirical_mean", "analytic_mean",
               "empirical_variance", "analytic_variance")
    return ResultBundle("verify", columns, rows, report=rep.as_dict())


def _run_maxent(spec):
    d, U, diag, _ = _solve_axis(spec.domain, spec.moments, spec.utility_points, spec.reference)
    diag.update(_shape_diag(U))
    if spec.utility_points:
        report = metrics.MetricsReport(entropy_x=_piecewise_entropy(diag))
    else:
        ref = None if spec.reference is None else build_density(spec.reference, d.grid)
        report = metrics.metrics_1d(d, ref)
    return ResultBundle("maxent", ("x", "density", "utility"), _table_1d(d, U),
                        metrics=report.as_dict(), diagnostics=diag)


def _joint_parts(spec):
    dy_dom = spec.domain_y or spec.domain
    ux, Ux, diag_x, _ = _solve_axis(spec.domain, spec.moments, spec.utility_points,
                                    spec.reference)
    uy, Uy, diag_y, _ = _solve_axis(dy_dom, spec.moments_y, spec.utility_points_y,
                                    spec.reference_y)
    return ux, Ux, uy, Uy, {"x": diag_x, "y": diag_y}


def _run_joint(spec):
    ux, Ux, uy, Uy, diag = _joint_parts(spec)
    grid = dom.Grid2D(Ux.grid, Uy.grid)
    outer = np.outer(ux.values, uy.values)
    if spec.multilinear is None:
        surface = dom.maxent_joint_from_marginals(Ux, Uy)
        k_xy = 1.0
    else:
        k_x, k_y = spec.multilinear
        surface = dom.multilinear_combine(Ux, Uy, k_x, k_y)
        k_xy = 1.0 - k_x - k_y
        diag["multilinear"] = {"k_x": k_x, "k_y": k_y, "k_xy": k_xy}
    density = k_xy * outer
    report = None
    if k_xy > 0.0 and np.all(outer >= 0.0):
        mass = dom.integrate_surface(dom.Surface(grid, outer))
        report = metrics.metrics_2d(dom.JointUtilityDensity2D(grid, outer / mass)).as_dict()
    return ResultBundle("joint", ("x", "y", "density", "utility"),
                        _table_2d(grid, density, surface.values),
                        metrics=report, diagnostics=diag)


def _run_metrics(spec):
    diag, rows, columns, report = {}, [], ("x", "density", "utility"), {}
    if spec.density is not None:
        grid = spec.domain.grid()
        d = build_density(spec.density, grid)
        ref = None if spec.reference is None else build_density(spec.reference, grid)
        report = metrics.metrics_1d(d, ref).as_dict()
        rows = _table_1d(d, cumulative(d))
    if spec.joint_density is not None:
        jd = read_joint_density_file(spec.joint_density)
        joint = metrics.metrics_2d(jd).as_dict()
        if spec.density is None:
            report = joint
            U = dom.integrate_density(jd)
            columns, rows = ("x", "y", "density", "utility"), _table_2d(jd.grid, jd.values, U.values)
        else:
            diag["joint"] = joint
    return ResultBundle("metrics", columns, rows, metrics=report, diagnostics=diag)


def _run_infer(spec):
    if spec.surface is not None:
        adu = read_surface_file(spec.surface)
    else:
        _, Ux, _, Uy, _ = _joint_parts(spec)
        adu = dom.maxent_joint_from_marginals(Ux, Uy)
    axis, value = spec.given
    U_x, U_y = dom.marginal_utility(adu, "x"), dom.marginal_utility(adu, "y")
    if axis == "y":
        fam = dom.conditional_family(adu, "y")
        result = dom.bayes_infer(fam, U_x, U_y, value)
        direct = adu.values[:, U_y.grid.index_of(value)] / U_y(value)
    else:
        # swap roles: infer the utility over y given x from the x-conditionals
        fam = dom.conditional_family(adu, "x").T
        result = dom.bayes_infer(fam, U_y, U_x, value)
        direct = adu.values[U_x.grid.index_of(value), :] / U_x(value)
    diag = {"given": {"axis": axis, "value": value},
            "identity_residual": float(np.abs(result.values - direct).max())}
    d = differentiate(result)
    return ResultBundle("infer", ("x", "density", "utility"), _table_1d(d, result),
                        diagnostics=diag)


_RUNNERS = {
    "discrete": _run_discrete,
    "verify": _run_verify,
    "maxent": _run_maxent,
    "joint": _run_joint,
    "metrics": _run_metrics,
    "infer": _run_infer,
}


def run(spec):
    bundle = _RUNNERS[spec.kind](spec)
    bundle.provenance = {
        "tool": "maxentutil",
        "version": __version__,
        "kernel_backend": kernels.BACKEND,
        "seed": spec.seed,
        "spec": spec.document,
    }
    return bundle


# output ------------------------------------------------------------------------------

def format_number(v):
    """Render a number with 12 significant digits; infinities become ``inf``/``-inf``."""
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    s = format(v, ".12g")
    return "0" if s == "-0" else s


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        s = format_number(obj)
        return s if s in ("inf", "-inf", "nan") else float(s)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render(bundle, fmt="csv"):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(bundle.columns)
        for row in bundle.rows:
            w.writerow([format_number(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "kind": bundle.kind,
            "columns": list(bundle.columns),
            "rows": bundle.rows,
            "metrics": bundle.metrics,
            "diagnostics": bundle.diagnostics,
            "report": bundle.report,
            "provenance": bundle.provenance,
        }
        return json.dumps(_jsonable(doc), sort_keys=True, separators=(",", ":")) + "\n"
    raise SpecError(f"unknown output format {fmt!r}")


def emit(bundle, fmt="csv", destination=None):
    text = render(bundle, fmt)
    if destination is None or destination == "-":
        sys.stdout.write(text)
        return
    try:
        with open(destination, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise EmitError(f"cannot write {destination}: {exc.strerror}") from None


def _parser():
    parser = argparse.ArgumentParser(
        prog="maxentutil",
        description="Maximum-entropy utility assignment and information measures.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "discrete": "equal-increment utilities for K ordered prospects",
        "verify": "Monte Carlo check of the Beta marginals on the utility simplex",
        "maxent": "maximum-entropy utility on a bounded domain",
        "joint": "two-attribute utility from marginal problems",
        "metrics": "entropy, KL-distance and dependence measures",
        "infer": "utility inference by Bayes' rule for utilities",
    }
    for name in KINDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--spec", required=True, help="JSON problem specification")
        p.add_argument("--out", default=None, help="output file (default: standard output)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=None, help="override the sampling seed")
        p.add_argument("--points", type=int, default=None, help="override grid resolution")
    return parser


def _fail(exc):
    message = " ".join(str(exc).split())
    sys.stderr.write(f"error code={exc.code} exit={exc.exit_code}: {message}\n")
    return exc.exit_code


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        try:
            text = Path(args.spec).read_text()
        except OSError as exc:
            raise SpecError(f"cannot read specification {args.spec}: {exc.strerror}") from None
        spec = parse_spec(text, base_dir=Path(args.spec).parent, command=args.command,
                          seed=args.seed, points=args.points)
        emit(run(spec), args.format, args.out)
    except UtilityError as exc:
        return _fail(exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
