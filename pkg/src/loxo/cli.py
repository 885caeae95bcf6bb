"""``loxo`` command line: projections, curves, field dumps, Gauss paths, verification.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 total evaluation failure.

Options are resolved as command-line flags, then the config file named by
``--config`` or ``$LOXO_CONFIG``, then built-in defaults. The config file is
a flat list of ``key = value`` lines (``#`` starts a comment)::

    R = 1.0
    phi0 = 0.0
    course = 1.0471975511965976
    t_end = 1.0
    dt = 0.01
    format = json
    sigma_min = 1.0
    mu_max_abs = 3.141592653589793
    tol.gauss = 1e-3
"""

import argparse
import configparser
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import gaussfam as gf
from .autoparallel import (
    CourseAngle,
    integrate_autoparallel,
    loxodrome_pseudosphere_curve,
    loxodrome_sphere_curve,
    project_curve,
)
from .errors import DomainError, NumericError, PreconditionError, QuadratureError, UnsupportedProjectionError
from .geometry import (
    ChartId,
    Point2,
    flattened_to_pseudosphere,
    mercator_forward,
    mercator_inverse,
    pseudosphere_to_flattened,
    pseudosphere_vielbein,
    riemann_curvature,
    sphere_vielbein,
    torsion,
    weizenbock_connection,
)
from .output import error_record, write_error, write_records
from .verification import CRITERIA, run_criteria

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE, EXIT_EVAL_FAILED = 0, 1, 2, 3
ZERO_CURVATURE = 1e-6

CHARTS = {
    "sphere": ChartId.SPHERE_GEOGRAPHIC,
    "mercator": ChartId.MERCATOR_PLANE,
    "pseudosphere": ChartId.PSEUDOSPHERE,
    "flattened": ChartId.FLATTENED_PLANE,
    "gauss": ChartId.GAUSS_NORMALIZED,
}


class UsageError(Exception):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    R: float = None
    phi0: float = None
    course: float = None
    t_end: float = 1.0
    dt: float = 0.01
    samples: int = None
    output_format: str = "csv"
    sigma_min: float = 1.0
    mu_max_abs: float = math.pi
    tolerances: dict = field(default_factory=dict)

    def radius(self, chart):
        if self.R is not None:
            return self.R
        return math.sqrt(2.0) if chart in (ChartId.PSEUDOSPHERE, ChartId.FLATTENED_PLANE) else 1.0

    def longitude(self, default=0.0):
        return default if self.phi0 is None else self.phi0

    def course_angle(self):
        if self.course is None:
            raise UsageError("--course is required", field="course")
        return CourseAngle(self.course)

    def t_grid(self):
        if self.samples is not None:
            if self.samples < 0:
                raise UsageError("--samples must be >= 0", field="samples")
            return np.linspace(0.0, self.t_end, self.samples)
        if not self.dt > 0:
            raise UsageError("dt must be > 0", field="dt")
        if not self.t_end > 0:
            raise UsageError("t_end must be > 0", field="t_end")
        n = int(math.floor(self.t_end / self.dt + 1e-9))
        return np.arange(n + 1) * self.dt


_CONFIG_KEYS = {
    "R": float,
    "phi0": float,
    "course": float,
    "t_end": float,
    "dt": float,
    "samples": int,
    "format": str,
    "sigma_min": float,
    "mu_max_abs": float,
}


def load_config(path):
    """Read a flat ``key = value`` config file into a dict of typed values."""
    # '=' only, so tolerance keys may hold "criterion:check name"
    parser = configparser.ConfigParser(delimiters=("=",), inline_comment_prefixes=("#",), interpolation=None)
    parser.optionxform = str
    with open(path, encoding="utf-8") as fh:
        try:
            parser.read_string("[loxo]\n" + fh.read(), source=str(path))
        except configparser.Error as exc:
            raise UsageError(f"config {path}: {exc}", field="config") from None
    out, tolerances = {}, {}
    for key, raw in parser["loxo"].items():
        conv = float if key.startswith("tol.") else _CONFIG_KEYS.get(key)
        if conv is None:
            raise UsageError(f"unknown config key {key!r}", field=key)
        try:
            value = conv(raw)
        except ValueError as exc:
            raise UsageError(f"config {key}: {exc}", field=key) from None
        if key.startswith("tol."):
            tolerances[key[4:]] = value
        else:
            out[key] = value
    if tolerances:
        out["tolerances"] = tolerances
    return out


def resolve_config(args):
    path = getattr(args, "config", None) or os.environ.get("LOXO_CONFIG")
    file_cfg = load_config(path) if path else {}
    cfg = RunConfig()
    for attr, key in (("R", "R"), ("phi0", "phi0"), ("course", "course"), ("t_end", "t_end"),
                      ("dt", "dt"), ("samples", "samples"), ("sigma_min", "sigma_min"),
                      ("mu_max_abs", "mu_max_abs")):
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(cfg, attr, flag)
        elif key in file_cfg:
            setattr(cfg, attr, file_cfg[key])
    fmt = getattr(args, "format", None) or file_cfg.get("format")
    if fmt is not None:
        if fmt not in ("csv", "json"):
            raise UsageError(f"unknown output format {fmt!r}", field="format")
        cfg.output_format = fmt
    cfg.tolerances = file_cfg.get("tolerances", {})
    return cfg


def _parse_points(specs, name="point"):
    points = []
    for spec in specs or ():
        for chunk in spec.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = chunk.split(",")
            try:
                if len(parts) != 2:
                    raise ValueError
                points.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise UsageError(f"malformed {name} {chunk!r}; expected 'a,b'", field=name) from None
    return points


# -- commands -------------------------------------------------------------------


def _map_point(src, dst, p, R, phi0):
    if (src, dst) == (ChartId.SPHERE_GEOGRAPHIC, ChartId.MERCATOR_PLANE):
        return mercator_forward(p, R, phi0)
    if (src, dst) == (ChartId.MERCATOR_PLANE, ChartId.SPHERE_GEOGRAPHIC):
        return mercator_inverse(p, R, phi0)
    if (src, dst) == (ChartId.PSEUDOSPHERE, ChartId.FLATTENED_PLANE):
        return pseudosphere_to_flattened(p, R)
    if (src, dst) == (ChartId.FLATTENED_PLANE, ChartId.PSEUDOSPHERE):
        return flattened_to_pseudosphere(p, R)
    if (src, dst) == (ChartId.GAUSS_NORMALIZED, ChartId.PSEUDOSPHERE):
        return gf.to_pseudosphere(p)
    if (src, dst) == (ChartId.PSEUDOSPHERE, ChartId.GAUSS_NORMALIZED):
        return gf.from_pseudosphere(p)
    if (src, dst) == (ChartId.GAUSS_NORMALIZED, ChartId.FLATTENED_PLANE):
        return gf.to_flattened(p)
    raise UnsupportedProjectionError(f"no chart map from {src.value} to {dst.value}")


def cmd_project(args, cfg, out, err):
    src, dst = CHARTS[args.chart], CHARTS[args.to]
    if args.invert:
        src, dst = dst, src
    points = _parse_points(args.point)
    if not points:
        raise UsageError("at least one --point is required", field="point")
    R = cfg.radius(src if src is not ChartId.MERCATOR_PLANE else dst)
    src_names, dst_names = src.coordinate_names, dst.coordinate_names
    if src is dst:
        dst_names = tuple(f"to_{n}" for n in dst_names)
    rows = []
    for a, b in points:
        q = _map_point(src, dst, Point2(src, a, b), R, cfg.longitude())
        rows.append([a, b, q.a, q.b])
    write_records(out, [*src_names, *dst_names], rows, cfg.output_format)
    return EXIT_OK


def _loxodrome_curve(args, cfg, chart, R):
    angle = cfg.course_angle()
    if args.integrate:
        if chart is ChartId.SPHERE_GEOGRAPHIC:
            conn = weizenbock_connection(sphere_vielbein(R))
            q0, v0 = (cfg.longitude(), 0.0), (angle.tan / R, 1.0 / R)
        else:
            conn = weizenbock_connection(pseudosphere_vielbein(R))
            q0, v0 = (cfg.longitude() + angle.tan, 0.0), (angle.tan / R, 1.0)
        if not cfg.t_end > 0 or not cfg.dt > 0:
            raise UsageError("--integrate needs t_end > 0 and dt > 0", field="dt")
        return integrate_autoparallel(conn, q0, v0, cfg.t_end, cfg.dt)
    t = cfg.t_grid()
    if chart is ChartId.SPHERE_GEOGRAPHIC:
        return loxodrome_sphere_curve(angle, cfg.longitude(), R, t, args.parametrization)
    return loxodrome_pseudosphere_curve(angle, cfg.longitude(), R, t)


def cmd_loxodrome(args, cfg, out, err):
    chart = CHARTS[args.chart]
    if chart not in (ChartId.SPHERE_GEOGRAPHIC, ChartId.PSEUDOSPHERE):
        raise UsageError("loxodromes are defined on --chart sphere or pseudosphere", field="chart")
    R = cfg.radius(chart)
    curve = _loxodrome_curve(args, cfg, chart, R)
    if curve.exited:
        write_error(err, "warning", "t", "trajectory left the chart domain; output truncated")
    columns = ["t", "a", "b"]
    projected = None
    if args.project:
        target = ChartId.MERCATOR_PLANE if chart is ChartId.SPHERE_GEOGRAPHIC else ChartId.FLATTENED_PLANE
        projected = project_curve(curve, target, R, cfg.longitude())
        columns += ["proj_a", "proj_b"]
    rows = []
    for k in range(len(curve)):
        row = [float(curve.t[k]), float(curve.points[k, 0]), float(curve.points[k, 1])]
        if projected is not None:
            row += [float(projected.points[k, 0]), float(projected.points[k, 1])]
        rows.append(row)
    write_records(out, columns, rows, cfg.output_format)
    if args.plot:
        from .plotting import plot_loxodrome

        plot_loxodrome(args.plot, curve, projected)
    return EXIT_OK


def _component_labels(prefix, names, rank):
    labels = []
    for idx in itertools.product(range(2), repeat=rank):
        upper, lower = names[idx[0]], "_".join(names[i] for i in idx[1:])
        labels.append(f"{prefix}^{upper}_{lower}")
    return labels


def cmd_fields(args, cfg, out, err):
    chart = CHARTS[args.chart]
    if chart is ChartId.SPHERE_GEOGRAPHIC:
        vielbein = sphere_vielbein(cfg.radius(chart))
    elif chart is ChartId.PSEUDOSPHERE:
        vielbein = pseudosphere_vielbein(cfg.radius(chart))
    else:
        raise UsageError("fields are available for --chart sphere or pseudosphere", field="chart")
    grid = _parse_points(args.grid, "grid")
    if not grid:
        raise UsageError("--grid needs at least one point", field="grid")
    conn = weizenbock_connection(vielbein, args.method)
    tors = torsion(conn)
    names = chart.coordinate_names
    gamma_cols = _component_labels("Gamma", names, 3)
    torsion_cols = _component_labels("T", names, 3)
    riemann_cols = _component_labels("R", names, 4)
    columns = ["a", "b", *gamma_cols, *torsion_cols, *riemann_cols, "curvature_max", "curvature_flag", "error"]
    n_numeric = len(gamma_cols) + len(torsion_cols) + len(riemann_cols) + 2
    rows, failures = [], 0
    for a, b in grid:
        try:
            Point2(chart, a, b)
            q = np.array([a, b])
            G = conn(q)
            T = tors(q)
            Riem = riemann_curvature(conn, q)
        except DomainError as exc:
            failures += 1
            rows.append([a, b, *([None] * n_numeric), error_record("domain", exc.field, str(exc))])
            continue
        cmax = float(np.max(np.abs(Riem)))
        rows.append([
            a, b,
            *map(float, G.ravel()), *map(float, T.ravel()), *map(float, Riem.ravel()),
            cmax, "ZERO" if cmax < ZERO_CURVATURE else "NONZERO", None,
        ])
    write_records(out, columns, rows, cfg.output_format)
    return EXIT_EVAL_FAILED if failures == len(grid) else EXIT_OK


def cmd_gauss(args, cfg, out, err):
    box = gf.NormalizationBox(cfg.sigma_min, cfg.mu_max_abs)
    angle = cfg.course_angle()
    # unset phi0 starts the path at (mu, sigma) = (0, sigma_min)
    path = gf.gauss_family_along_loxodrome(angle, box, cfg.t_grid(), phi0=cfg.phi0)
    if path.exited:
        write_error(err, "warning", "t", "path left the admitted region |mu~| <= pi; output truncated")
    columns = ["t", "mu", "sigma", "mu_n", "sigma_n", "phi", "u", "x_f", "y_f"]
    rows = [
        [float(t), p.mu, p.sigma, n.a, n.b, s.a, s.b, f.a, f.b]
        for t, p, n, s, f in zip(path.t, path.params, path.normalized, path.pseudosphere, path.flattened)
    ]
    write_records(out, columns, rows, cfg.output_format)
    if args.plot:
        from .plotting import plot_gauss_path

        plot_gauss_path(args.plot, path)
    return EXIT_OK


def cmd_verify(args, cfg, out, err):
    only = []
    for spec in args.only or ():
        only += [s.strip() for s in spec.split(",") if s.strip()]
    unknown = [s for s in only if s not in CRITERIA]
    if unknown:
        raise UsageError(f"unknown criterion {unknown[0]!r}; choose from {', '.join(CRITERIA)}", field="only")
    report = run_criteria(only or None, cfg.tolerances)
    all_ok = all(chk.passed for checks in report.values() for chk in checks)
    if cfg.output_format == "json":
        records = [
            {
                "criterion": name,
                "passed": all(c.passed for c in checks),
                "checks": [
                    {"name": c.name, "measured": c.measured, "relation": c.relation,
                     "tolerance": c.tolerance, "passed": c.passed}
                    for c in checks
                ],
            }
            for name, checks in report.items()
        ]
        out.write(json.dumps(records))
        out.write("\n")
    else:
        for name, checks in report.items():
            verdict = "PASS" if all(c.passed for c in checks) else "FAIL"
            out.write(f"{verdict}  {name}\n")
            for c in checks:
                measured = "-" if c.measured is None else f"{c.measured:.3e}"
                out.write(f"    {'ok  ' if c.passed else 'FAIL'}  {c.name}: {measured} {c.relation} {c.tolerance:g}\n")
        out.write(f"{'ALL PASS' if all_ok else 'FAILURES'}\n")
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


# -- argument parsing ---------------------------------------------------------------


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key=value config file (or $LOXO_CONFIG)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.add_argument("--R", type=float, help="sphere radius or pseudoradius")
    common.add_argument("--phi0", type=float, help="central meridian / longitude offset (radians)")

    curve = _Parser(add_help=False)
    curve.add_argument("--course", type=float, help="course angle in (0, pi), not pi/2")
    curve.add_argument("--t-end", dest="t_end", type=float)
    curve.add_argument("--dt", type=float)
    curve.add_argument("--samples", type=int, help="number of samples on [0, t_end] (overrides --dt)")
    curve.add_argument("--plot", metavar="FILE", help="also render a figure to FILE")

    parser = _Parser(prog="loxo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("project", parents=[common], help="map points between charts")
    p.add_argument("--chart", choices=CHARTS, default="sphere")
    p.add_argument("--to", choices=CHARTS, default="mercator")
    p.add_argument("--invert", action="store_true", help="swap --chart and --to")
    p.add_argument("--point", action="append", help="'a,b' (repeatable, or ';'-separated)")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("loxodrome", parents=[common, curve], help="sample a loxodrome")
    p.add_argument("--chart", choices=("sphere", "pseudosphere"), default="sphere")
    p.add_argument("--parametrization", choices=("map", "frame"), default="map")
    p.add_argument("--integrate", action="store_true", help="RK4 auto-parallel instead of the closed form")
    p.add_argument("--project", action="store_true", help="add the Mercator / flattened image")
    p.set_defaults(func=cmd_loxodrome)

    p = sub.add_parser("fields", parents=[common], help="dump connection, torsion and curvature")
    p.add_argument("--chart", choices=("sphere", "pseudosphere"), default="sphere")
    p.add_argument("--grid", action="append", help="'a,b;a,b;...' evaluation points")
    p.add_argument("--method", choices=("auto", "analytic", "fd"), default="auto")
    p.set_defaults(func=cmd_fields)

    p = sub.add_parser("gauss", parents=[common, curve], help="Gaussians along a pseudosphere loxodrome")
    p.add_argument("--sigma-min", dest="sigma_min", type=float)
    p.add_argument("--mu-max", dest="mu_max_abs", type=float)
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    p.add_argument("--only", action="append", help=f"criterion name(s): {', '.join(CRITERIA)}")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, stdout=None, stderr=None):
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        return args.func(args, cfg, out, err)
    except UsageError as exc:
        write_error(err, "usage", exc.field, str(exc))
        return EXIT_USAGE
    except (DomainError, PreconditionError) as exc:
        write_error(err, "domain", exc.field, str(exc))
        return EXIT_USAGE
    except UnsupportedProjectionError as exc:
        write_error(err, "usage", "to", str(exc))
        return EXIT_USAGE
    except (NumericError, QuadratureError) as exc:
        write_error(err, "numeric", None, str(exc))
        return EXIT_EVAL_FAILED
    except OSError as exc:
        write_error(err, "io", getattr(exc, "filename", None), str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
