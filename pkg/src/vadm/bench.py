"""Iteration tables, mesh-convergence data and the 1D demo, as CSV/JSON.

Usage::

    bench table --problem test1 --sizes 8,16,32,64,128 --tol 1e-10 --out tables/t1.csv
    bench conv --problem test2 --sizes 16,32,64,128 --out conv/t2.csv
    bench demo1d --x 0.5 --mmax 30
    bench solve --problem test4 --n 64 --method adm --dump-field field.csv

Exit status is 2 when any cell fails to converge, unless
``--allow-nonconverged`` is given.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .demo1d import adm_modes_1d, convergence_order_1d, picard_iterates_1d
from .mesh import build_unit_square_mesh
from .problems import get_problem
from .solvers import ADM, PICARD, SolverConfig, solve

log = logging.getLogger("vadm.bench")

METHODS = (ADM, PICARD)
DEFAULT_SIZES = (8, 16, 32, 64, 128)
TABLE_COLUMNS = ["n_elements_per_side", "method", "iterations", "converged",
                 "final_residual_inf", "l2_error", "wall_ms", "linear_solves", "plateau"]
CONV_COLUMNS = ["n_elements_per_side", "method", "h", "element_area", "l2_error", "converged", "note"]

REPORT_SCHEMA = {
    "type": "object",
    "required": ["tool", "version", "environment", "runs"],
    "properties": {
        "tool": {"const": "vadm"},
        "version": {"type": "string"},
        "environment": {"type": "object"},
        "runs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["problem", "n_elements_per_side", "method", "iterations",
                             "converged", "tol", "residual_history"],
                "properties": {
                    "problem": {"type": "string"},
                    "n_elements_per_side": {"type": "integer", "minimum": 1},
                    "method": {"enum": list(METHODS)},
                    "iterations": {"type": "integer", "minimum": 0},
                    "converged": {"type": "boolean"},
                    "tol": {"type": "number", "exclusiveMinimum": 0},
                    "linear_solves": {"type": "integer"},
                    "final_residual_inf": {"type": ["number", "null"]},
                    "l2_error": {"type": ["number", "null"]},
                    "wall_time": {"type": ["number", "null"]},
                    "plateau": {"type": ["number", "null"]},
                    "residual_history": {"type": "array", "items": {"type": ["number", "null"]}},
                },
            },
        },
    },
}


@dataclass
class BenchRun:
    """One (problem, mesh, method) cell and its result."""

    problem: str
    n: int
    method: str
    tol: float = 1e-10
    max_iter: int = 200
    report: object = field(default=None, repr=False)


def _run_cell(problem: str, n: int, method: str, tol: float, max_iter: int):
    prob = get_problem(problem)
    sys_ = prob.assemble(build_unit_square_mesh(n))
    cfg = SolverConfig(method=method, tol=tol, max_iter=max_iter)
    kw = {"raise_on_divergence": False} if method == PICARD else {}
    return solve(sys_, prob.reaction, cfg, prob.exact, **kw)


def run_cells(problem: str, sizes, methods=METHODS, tol=1e-10, max_iter=200, jobs=1):
    """Solve every (n, method) cell; result order is canonical (n, then method)."""
    cells = [BenchRun(problem, int(n), m, tol, max_iter) for n in sorted(sizes) for m in methods]
    args = [(c.problem, c.n, c.method, c.tol, c.max_iter) for c in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_cell, *zip(*args)))
    else:
        reports = [_run_cell(*a) for a in args]
    for c, r in zip(cells, reports):
        c.report = r
    return cells


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def table_rows(runs, deterministic=False):
    rows = []
    for c in runs:
        r = c.report
        rows.append({
            "n_elements_per_side": c.n,
            "method": c.method,
            "iterations": r.iterations if r.converged else c.max_iter,
            "converged": r.converged,
            "final_residual_inf": r.final_residual,
            "l2_error": r.l2_error,
            "wall_ms": None if deterministic else round(1e3 * r.wall_time, 3),
            "linear_solves": r.linear_solves,
            "plateau": r.plateau,
        })
    return rows


def write_csv(rows, columns, out=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(k)) for k in columns])
    text = buf.getvalue()
    if out is not None:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    return text


def run_table(problem: str, sizes=DEFAULT_SIZES, tol=1e-10, max_iter=200, out=None,
              deterministic=False, jobs=1):
    """Iteration-count table for ADM and Picard; returns (runs, csv_text)."""
    runs = run_cells(problem, sizes, tol=tol, max_iter=max_iter, jobs=jobs)
    for c in runs:
        if not c.report.converged:
            log.warning("%s n=%d %s did not converge (min residual %.4e, plateau %s)",
                        problem, c.n, c.method, min(c.report.residual_history), c.report.plateau)
    return runs, write_csv(table_rows(runs, deterministic), TABLE_COLUMNS, out)


def convergence_slope(h, err) -> float:
    """Least-squares slope of log(err) against log(h)."""
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])


def run_convergence(problem: str, sizes=(16, 32, 64, 128), tol=1e-10, max_iter=200, out=None, jobs=1):
    """(h, element area, L2 error) per method from converged runs; returns (runs, rows, csv_text)."""
    runs = run_cells(problem, sizes, tol=tol, max_iter=max_iter, jobs=jobs)
    rows = []
    for c in runs:
        r = c.report
        row = {"n_elements_per_side": c.n, "method": c.method,
               "h": 1.0 / (c.n * np.sqrt(2.0)), "element_area": 1.0 / (2 * c.n * c.n),
               "converged": r.converged, "l2_error": r.l2_error, "note": ""}
        if not r.converged:
            log.warning("skipping %s n=%d %s: not converged", problem, c.n, c.method)
            row["l2_error"], row["note"] = None, "skipped: not converged"
        rows.append(row)
    return runs, rows, write_csv(rows, CONV_COLUMNS, out)


def _num(v):
    """JSON has no inf/nan; non-finite values become null."""
    return float(v) if v is not None and np.isfinite(v) else None


def run_record(c: BenchRun) -> dict:
    r = c.report
    return {
        "problem": c.problem, "n_elements_per_side": c.n, "method": c.method,
        "iterations": r.iterations, "converged": r.converged, "tol": c.tol,
        "linear_solves": r.linear_solves, "final_residual_inf": _num(r.final_residual),
        "l2_error": _num(r.l2_error), "wall_time": r.wall_time, "plateau": _num(r.plateau),
        "residual_history": [_num(v) for v in r.residual_history],
    }


def emit_report(runs, out=None) -> dict:
    """Aggregate JSON report of solver runs plus environment metadata."""
    doc = {
        "tool": "vadm",
        "version": __version__,
        "environment": {"python": platform.python_version(), "numpy": np.__version__,
                        "platform": platform.platform()},
        "runs": [run_record(c) for c in runs],
    }
    if out is not None:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w") as fh:
            json.dump(doc, fh, indent=2, allow_nan=False)
    return doc


def demo1d_csv(x: float, mmax: int, picard_m: int = 5) -> str:
    modes = adm_modes_1d(min(mmax, 10))
    pic = picard_iterates_1d(picard_m)
    order = convergence_order_1d(x, mmax)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "index", "value"])
    for k, m in enumerate(modes):
        w.writerow(["adm_mode", k, " + ".join(f"{c}*x^{j}" for j, c in enumerate(m.coeffs) if c)])
    for k, p in enumerate(pic):
        w.writerow(["picard_degree", k, p.degree])
    for M, ratio in enumerate(order["ratios"]):
        w.writerow(["error_ratio", M, repr(ratio)])
    w.writerow(["fit_alpha", "", repr(order["alpha"])])
    w.writerow(["fit_rate", "", repr(order["rate"])])
    return buf.getvalue()


def _sizes(text: str):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sizes):
        sp.add_argument("--problem", required=True)
        sp.add_argument("--sizes", type=_sizes, default=list(sizes))
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--max-iter", type=int, default=200)
        sp.add_argument("--out", help="CSV path (stdout when omitted)")
        sp.add_argument("--json", help="also write a JSON report")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--allow-nonconverged", action="store_true")

    t = sub.add_parser("table", help="ADM vs Picard iteration counts")
    common(t, DEFAULT_SIZES)
    t.add_argument("--deterministic", action="store_true", help="omit wall-clock columns")

    c = sub.add_parser("conv", help="L2 error against mesh size")
    common(c, (16, 32, 64, 128))

    d = sub.add_parser("demo1d", help="psi' = psi^2 in exact arithmetic")
    d.add_argument("--x", type=float, default=0.5)
    d.add_argument("--mmax", type=int, default=30)
    d.add_argument("--out")

    s = sub.add_parser("solve", help="single solve")
    s.add_argument("--problem", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", choices=METHODS, default=ADM)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--dump-field", help="CSV of x,y,value per node")
    s.add_argument("--json", help="write a JSON report")
    s.add_argument("--allow-nonconverged", action="store_true")
    return p


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "demo1d":
            text = demo1d_csv(args.x, args.mmax)
            if args.out:
                Path(args.out).write_text(text)
            _emit(text, args.out)
            return 0

        if args.command in ("table", "conv"):
            get_problem(args.problem)
            if args.command == "table":
                runs, text = run_table(args.problem, args.sizes, args.tol, args.max_iter, args.out,
                                       deterministic=args.deterministic, jobs=args.jobs)
            else:
                runs, _, text = run_convergence(args.problem, args.sizes, args.tol, args.max_iter,
                                                args.out, jobs=args.jobs)
            _emit(text, args.out)
        else:
            prob = get_problem(args.problem)
            mesh = build_unit_square_mesh(args.n)
            sys_ = prob.assemble(mesh)
            cfg = SolverConfig(method=args.method, tol=args.tol, max_iter=args.max_iter)
            kw = {"raise_on_divergence": False} if args.method == PICARD else {}
            report = solve(sys_, prob.reaction, cfg, prob.exact, **kw)
            runs = [BenchRun(args.problem, args.n, args.method, args.tol, args.max_iter, report)]
            if args.dump_field:
                write_csv([{"x": x, "y": y, "value": v}
                           for (x, y), v in zip(mesh.nodes, report.final_field)],
                          ["x", "y", "value"], args.dump_field)
            err = "" if report.l2_error is None else f" l2_error={report.l2_error:.6e}"
            print(f"{args.method} n={args.n} iterations={report.iterations} "
                  f"converged={report.converged} residual={report.final_residual:.3e}{err}")
    except KeyError as exc:
        print(f"bench: {exc.args[0]}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1

    if getattr(args, "json", None):
        emit_report(runs, args.json)
    if not args.allow_nonconverged and not all(c.report.converged for c in runs):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
