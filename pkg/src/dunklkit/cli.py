"""Command-line front end.

Exit codes: 0 success or passing verdict, 2 failing mathematical verdict,
1 operational error (bad arguments, I/O, numerical breakdown).
"""

import argparse
import csv
import datetime as _dt
import io
import json
import re
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .core import LaplaceDunkl, MeasureSpec, SquaredArgument, dunkl_kernel, dunkl_kernel_osc
from .errors import DunklError
from .grammar import parse_spec
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2

# options whose values may start with '-' (negative numbers, ranges)
_VALUE_OPTIONS = {"--grid", "--points", "--y", "--x-grid", "--sign"}


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def parse_grid(text):
    m = re.fullmatch(r"\s*([^:]+):([^:]+):(\d+)\s*", text or "")
    if not m:
        raise _ArgumentError(f"grid must look like lo:hi:count, got {text!r}")
    lo, hi, count = float(m.group(1)), float(m.group(2)), int(m.group(3))
    if count < 1:
        raise _ArgumentError("grid count must be >= 1")
    return np.linspace(lo, hi, count)


def parse_points(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise _ArgumentError(f"bad point list {text!r}") from exc


def _as_function(spec):
    return LaplaceDunkl(spec) if isinstance(spec, MeasureSpec) else spec


def _table(columns, rows):
    return {"columns": columns, "rows": [[float(v) for v in row] for row in rows]}


def _complex_table(name, xs, vals):
    vals = np.asarray(vals, dtype=complex)
    return _table([name, "re", "im"], zip(xs, vals.real, vals.imag))


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, exit code, csv table)


def cmd_eval_kernel(args, cfg):
    xs = parse_grid(args.grid)
    real = np.atleast_1d(dunkl_kernel(args.k, xs, args.y))
    osc = np.atleast_1d(dunkl_kernel_osc(args.k, xs, args.y))
    table = _table(["x", "kernel", "osc_re", "osc_im"], zip(xs, real, osc.real, osc.imag))
    return table, EXIT_OK, table


def cmd_transform(args, cfg):
    from .transform import dunkl_transform

    xs = parse_grid(args.grid)
    spec = _as_function(parse_spec(args.spec))
    table = _complex_table("xi", xs, np.atleast_1d(dunkl_transform(args.k, spec, xs, cfg)))
    return table, EXIT_OK, table


def cmd_translate(args, cfg):
    from .transform import dunkl_translate

    xs = parse_grid(args.grid)
    spec = _as_function(parse_spec(args.spec))
    vals = dunkl_translate(args.k, spec, args.y, xs, cfg, sign=args.sign, method=args.method, real=False)
    table = _complex_table("x", xs, np.atleast_1d(vals))
    return table, EXIT_OK, table


def _cm_table(rep):
    return _table(["n", "min", "tol"], [(n, m, t) for n, (m, t) in enumerate(zip(rep.per_order_min, rep.tolerances))])


def cmd_check_cm(args, cfg):
    from .monotonicity import check_dunkl_cm

    spec = _as_function(parse_spec(args.spec))
    mode = args.mode
    if mode == "auto":
        mode = "exact" if spec.structured else "numeric"
    orders = args.orders if args.orders is not None else (10 if mode == "exact" else 4)
    rep = check_dunkl_cm(args.k, spec, args.sigma, orders, args.grid_size, mode, cfg)
    return rep.to_dict(), EXIT_OK if rep.passed else EXIT_FAIL, _cm_table(rep)


def _gram_table(rep):
    return _table(["index", "eigenvalue"], enumerate(rep.eigenvalues))


def cmd_check_pd(args, cfg):
    from .monotonicity import check_dunkl_pd

    spec = parse_spec(args.spec)
    if isinstance(spec, MeasureSpec):
        spec = SquaredArgument(LaplaceDunkl(spec))
    rep = check_dunkl_pd(args.k, spec, parse_points(args.points), cfg, sign=args.sign, method=args.method)
    return rep.to_dict(), EXIT_OK if rep.passed else EXIT_FAIL, _gram_table(rep)


def cmd_schoenberg(args, cfg):
    from .monotonicity import check_schoenberg

    mu = parse_spec(args.spec)
    if not isinstance(mu, MeasureSpec):
        raise _ArgumentError("schoenberg needs a measure spec (atom-measure or density-measure)")
    orders = 10 if args.orders is None else args.orders
    rep = check_schoenberg(args.k, mu, args.sigma, orders, parse_points(args.points), cfg, args.grid_size)
    table = _cm_table(rep.cm)
    return rep.to_dict(), EXIT_OK if rep.consistent else EXIT_FAIL, table


SONINE_TOL = 1e-8


def cmd_sonine(args, cfg):
    from .kummer import sonine_classical, sonine_quadrature

    xs = parse_grid(args.grid)
    closed = np.atleast_1d(sonine_classical(args.k, args.p, xs))
    quad = np.atleast_1d(sonine_quadrature(args.k, args.p, xs, cfg))
    denom = np.where(closed == 0, 1.0, np.abs(closed))
    rel = np.abs(quad - closed) / denom
    table = _table(["x", "closed", "quadrature", "rel_error"], zip(xs, closed, quad, rel))
    payload = dict(table, max_rel_error=float(np.max(rel)), tolerance=SONINE_TOL)
    return payload, EXIT_OK if np.max(rel) <= SONINE_TOL else EXIT_FAIL, table


def cmd_theorem6(args, cfg):
    from .kummer import adjudicate_theorem6

    xs = parse_grid(args.grid)
    orders = 8 if args.orders is None else args.orders
    rep = adjudicate_theorem6([args.k], [args.p], xs, cfg, cm_sigma=args.sigma, cm_orders=orders)
    rows = []
    for i, rec in enumerate(rep.records):
        for j, err in enumerate(rec.max_rel_error.values()):
            rows.append((i, j, err))
    table = _table(["closed_form", "combination", "max_rel_error"], rows)
    return rep.to_dict(), EXIT_OK if rep.passed else EXIT_FAIL, table


def cmd_convexity(args, cfg):
    from .monotonicity import check_convexity_theorem

    spec = _as_function(parse_spec(args.spec))
    ys = parse_grid(args.grid)
    xg = parse_grid(args.x_grid) if args.x_grid else None
    rep = check_convexity_theorem(args.k, spec, ys, cfg, exponent=args.exponent, x_grid=xg)
    table = _table(["y", "weighted_transform"], zip(ys, rep.weighted_transform))
    return rep.to_dict(), EXIT_FAIL if rep.status == "violated" else EXIT_OK, table


COMMANDS = {
    "eval-kernel": cmd_eval_kernel,
    "transform": cmd_transform,
    "translate": cmd_translate,
    "check-cm": cmd_check_cm,
    "check-pd": cmd_check_pd,
    "schoenberg": cmd_schoenberg,
    "sonine": cmd_sonine,
    "theorem6": cmd_theorem6,
    "convexity": cmd_convexity,
}

SCHEMAS = {
    "eval-kernel": "table",
    "transform": "table",
    "translate": "table",
    "check-cm": "cm_report",
    "check-pd": "gram_report",
    "schoenberg": "schoenberg_report",
    "sonine": "sonine_report",
    "theorem6": "adjudication_report",
    "convexity": "convexity_report",
}


def load_schema(command):
    """The shipped JSON schema for the report of ``command``."""
    from importlib.resources import files

    name = f"{SCHEMAS[command]}.schema.json"
    return json.loads(files("dunklkit").joinpath("schemas", name).read_text())


def build_parser():
    parser = _Parser(prog="dunklkit", description="Rank-one Dunkl analysis checks.")
    parser.add_argument("--version", action="version", version=f"dunklkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--k", type=float, default=0.0, help="multiplicity parameter (>= 0)")
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
        p.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp (byte-stable output)")

    p = sub.add_parser("eval-kernel", help="E_k(x, y) and E_k(-ix, y) on a grid")
    common(p)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--grid", required=True, help="lo:hi:count")

    p = sub.add_parser("transform", help="Dunkl transform on a grid")
    common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--grid", required=True)

    p = sub.add_parser("translate", help="generalized translation tau_y f on a grid")
    common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--method", choices=("auto", "transform", "product"), default="auto")

    p = sub.add_parser("check-cm", help="Dunkl complete monotonicity test")
    common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--orders", type=int)
    p.add_argument("--grid-size", type=int, default=41)
    p.add_argument("--mode", choices=("auto", "exact", "numeric"), default="auto")

    p = sub.add_parser("check-pd", help="Dunkl positive definiteness Gram test")
    common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--points", required=True, help="comma-separated distinct reals")
    p.add_argument("--sign", type=int, choices=(1, -1), default=-1)
    p.add_argument("--method", choices=("auto", "transform", "product"), default="auto")

    p = sub.add_parser("schoenberg", help="CM of phi together with PD of phi(x^2)")
    common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--orders", type=int)
    p.add_argument("--grid-size", type=int, default=41)
    p.add_argument("--points", required=True)

    p = sub.add_parser("sonine", help="Sonine integral: closed form against quadrature")
    common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--grid", required=True)

    p = sub.add_parser("theorem6", help="adjudicate the Kummer closed forms against the oracle")
    common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--sigma", type=float, default=3.0)
    p.add_argument("--orders", type=int)

    p = sub.add_parser("convexity", help="convexity criterion for W_k phi >= 0")
    common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--grid", required=True, help="y grid for the convexity test")
    p.add_argument("--x-grid", help="x grid for W_k phi (default: the y grid)")
    p.add_argument("--exponent", type=float, help="power of |y| (default 2k+1)")
    return parser


def _normalize_argv(argv):
    """Join '--opt value' into '--opt=value' for options whose values may start with '-'."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _config(args):
    base = QuadratureConfig.from_env()
    changes = {}
    if args.abs_tol is not None:
        changes["abs_tol"] = args.abs_tol
    if args.rel_tol is not None:
        changes["rel_tol"] = args.rel_tol
    return base.with_(**changes) if changes else base


def _header(args, cfg):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "format", "no_timestamp")}
    head = {"tool": "dunklkit", "version": __version__, "command": args.command, "config": config, "quadrature": asdict(cfg)}
    if not args.no_timestamp:
        head["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    return head


def _render_csv(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table["columns"])
    for row in table["rows"]:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def run(argv):
    """Run one request; returns the exit status."""
    try:
        args = build_parser().parse_args(_normalize_argv(list(argv)))
        if args.k < 0:
            raise _ArgumentError("--k must be >= 0")
        cfg = _config(args)
        payload, status, table = COMMANDS[args.command](args, cfg)
        header = _header(args, cfg)
        if args.format == "json":
            text = _dump({"header": header, "report": payload, "status": status})
        else:
            text = _render_csv(table)
        if args.output:
            path = Path(args.output)
            with open(path, "w", newline="") as fh:
                fh.write(text)
            if args.format == "csv":
                meta = Path(str(path) + ".meta.json")
                meta.write_text(_dump({"header": header, "status": status}))
        else:
            sys.stdout.write(text)
        return status
    except _ArgumentError as exc:
        print(f"dunklkit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (DunklError, ValueError, ArithmeticError, OSError) as exc:
        print(f"dunklkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)
