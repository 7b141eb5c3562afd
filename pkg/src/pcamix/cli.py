"""Command line interface: ``pcamix {fit,rotate,bench,simulate}``.

Exit codes: 0 ok, 2 input or validation error, 3 parameter error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import simbench
from .csvio import read_table, read_types, write_matrix, write_table
from .errors import ParameterError, ValidationError
from .svd import PcamixModel, fit, variance_explained
from .varimax import DEFAULT_MAX_SWEEPS, DEFAULT_TOL, RotationResult, rotate
from .mixdata import recode

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PARAM = 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _dims(k):
    return [f"dim{i + 1}" for i in range(k)]


def _load(args):
    path = Path(args.input)
    if not path.is_file():
        raise CliError(f"input file {str(path)!r} not found", EXIT_INPUT)
    types = read_types(args.types) if args.types else None
    qual = [q.strip() for item in (args.qual or []) for q in item.split(",") if q.strip()]
    return read_table(path, types=types, qualitative=qual)


def _variance_rows(variances, total):
    prop = np.asarray(variances) / total
    return np.column_stack([variances, prop, np.cumsum(prop)])


def write_fit(model: PcamixModel, out: Path, suffix="", rotation: RotationResult | None = None):
    rec = model.recoded
    k = model.k
    if rotation is None:
        X, A1, coords, C, var = (
            model.X, model.A1, model.category_coords, model.C, variance_explained(model)
        )
        var_header = ["dimension", "eigenvalue", "proportion", "cumulative"]
    else:
        X, A1, coords, C, var = (
            rotation.X_rot, rotation.A1_rot, rotation.category_coords_rot,
            rotation.C_rot, rotation.variance_rot,
        )
        var_header = ["dimension", "variance", "proportion", "cumulative"]
    dims = _dims(k)
    write_matrix(out / f"scores{suffix}.csv", X, dims)
    write_matrix(
        out / f"loadings_quant{suffix}.csv", A1, ["variable"] + dims,
        [[nm] for nm in rec.quantitative_names],
    )
    write_matrix(
        out / f"categories{suffix}.csv", coords, ["variable", "category"] + dims,
        rec.category_map.category_rows(),
    )
    write_matrix(out / f"squared_loadings{suffix}.csv", C, ["variable"] + dims, [[nm] for nm in rec.names])
    write_matrix(
        out / f"eigenvalues{suffix}.csv", _variance_rows(var, rec.total_inertia), var_header,
        [[d] for d in dims],
    )


def _fit_model(args):
    if args.k < 1:
        raise CliError(f"--k must be at least 1, got {args.k}", EXIT_PARAM)
    table = _load(args)
    return fit(recode(table), args.k)


def cmd_fit(args) -> int:
    model = _fit_model(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_fit(model, out)
    print(f"fit: n={model.n} p={model.recoded.p} k={model.k} -> {out}")
    return EXIT_OK


def cmd_rotate(args) -> int:
    if args.k < 2:
        raise CliError(f"rotation needs --k >= 2, got {args.k}", EXIT_PARAM)
    if args.tol <= 0:
        raise CliError("--tol must be positive", EXIT_PARAM)
    if args.max_sweeps < 1:
        raise CliError("--max-sweeps must be at least 1", EXIT_PARAM)
    model = _fit_model(args)
    result = rotate(model, tol=args.tol, max_sweeps=args.max_sweeps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_fit(model, out)
    write_fit(model, out, suffix="_rot", rotation=result)
    write_matrix(out / "rotation_matrix.csv", result.T, _dims(model.k))
    trace = np.array([[r.theta, r.objective] for r in result.trace]).reshape(-1, 2)
    labels = [[r.sweep, f"dim{r.pair[0] + 1}", f"dim{r.pair[1] + 1}"] for r in result.trace]
    write_matrix(
        out / "sweep_trace.csv", trace, ["sweep", "dim_l", "dim_t", "theta", "objective"], labels,
        footer=f"converged={str(result.converged).lower()},sweeps={result.sweeps}",
    )
    status = "converged" if result.converged else "NOT converged"
    print(f"rotate: {status} after {result.sweeps} sweeps -> {out}")
    return EXIT_OK


def parse_grid(text: str):
    try:
        ns_text, ps_text = text.split("/")
        ns = [int(x) for x in ns_text.split(",") if x.strip()]
        ps = [int(x) for x in ps_text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad --grid {text!r}; expected e.g. 50,100,200/10,50", EXIT_INPUT) from None
    if not ns or not ps:
        raise CliError(f"bad --grid {text!r}: empty list", EXIT_INPUT)
    for n in ns:
        if n < 4:
            raise CliError(f"grid n={n} must be at least 4", EXIT_INPUT)
    for p in ps:
        if p < 2 or p % 2:
            raise CliError(f"grid p={p} must be a positive even number", EXIT_INPUT)
    return [(n, p) for n in ns for p in ps]


def cmd_bench(args) -> int:
    if args.full_grid:
        grid = simbench.FULL_GRID
    else:
        grid = parse_grid(args.grid)
    if args.reps < 1:
        raise CliError("--reps must be at least 1", EXIT_PARAM)
    report = simbench.bench(grid, reps=args.reps, seed=args.seed)
    paths = simbench.write_report(report, args.out)
    print("Median computation time (seconds)")
    print(simbench.format_table(simbench.median_rows(report)))
    print()
    print("Ratio matrix reformulation / SVD")
    print(simbench.format_table(simbench.ratio_rows(report)))
    print(f"rng={report.rng} seed={report.seed} reps={report.reps}")
    print("wrote " + ", ".join(str(p) for p in paths))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        config = simbench.SimConfig(n=args.n, p=args.p, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "simulated.csv"
    write_table(simbench.simulate(config), path)
    print(f"simulate: n={config.n} p={config.p} seed={config.seed} -> {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcamix",
        description="PCAMIX for mixed quantitative/qualitative data with varimax rotation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p):
        p.add_argument("--input", required=True, help="input CSV with a header row")
        p.add_argument("--types", help="sidecar CSV of 'column,kind' lines")
        p.add_argument("--qual", action="append", help="qualitative column names (comma separated, repeatable)")
        p.add_argument("--k", type=int, default=2, help="number of components (default 2)")
        p.add_argument("--out", default=".", help="output directory")

    p_fit = sub.add_parser("fit", help="fit PCAMIX and export scores and loadings")
    data_args(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_rot = sub.add_parser("rotate", help="fit, apply varimax rotation and export both")
    data_args(p_rot)
    p_rot.add_argument("--tol", type=float, default=DEFAULT_TOL, help="angle tolerance (radians)")
    p_rot.add_argument("--max-sweeps", type=int, default=DEFAULT_MAX_SWEEPS)
    p_rot.set_defaults(func=cmd_rotate)

    p_bench = sub.add_parser("bench", help="time the SVD route against the matrix reformulation")
    p_bench.add_argument("--grid", default="50,100,200/10,50", help="n values / p values")
    p_bench.add_argument("--full-grid", action="store_true", help="use n up to 800 and p up to 200")
    p_bench.add_argument("--reps", type=int, default=20)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", default=".")
    p_bench.set_defaults(func=cmd_bench)

    p_sim = sub.add_parser("simulate", help="write one simulated mixed table")
    p_sim.add_argument("--n", type=int, default=100)
    p_sim.add_argument("--p", type=int, default=10)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=".")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
