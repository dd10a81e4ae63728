"""Batch command-line interface.

Subcommands:
  test      run the cross-variance, pooled-t, and F tests on a pair of samples
  dist      evaluate the reference distribution (pdf / cdf / quantile / general cdf)
  power     Monte Carlo power study; writes JSON + CSV + plot CSV + PNG
  type1     Monte Carlo type-I error table; same artifact set
  datasets  list the bundled datasets and their moments

Exit codes: 0 on success (whatever the test decision), 2 for malformed
input or invalid flag combinations, 3 for degenerate data (for example
zero pooled variance).  Error messages name the offending row or flag.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

from . import __version__
from .datasets import DATASETS, get_dataset
from .general import GeneralModel, general_cdf_quadrature
from .report import (
    RunManifest,
    canonical_json,
    format_csv,
    hash_file,
    write_power_outputs,
    write_type1_outputs,
)
from .simulation import (
    QuantileMode,
    StudyConfig,
    run_power_study,
    run_type1_table,
)
from .stats import DegenerateSampleError, NPolicy, Sample, summarize
from .tstar import TstarModel, tstar_cdf, tstar_pdf, tstar_quantile
from .two_sample import crossvar_test, f_variance_test, pooled_t_test

__all__ = ["main"]

_POLICIES = {"min": NPolicy.MIN, "max": NPolicy.MAX, "avg": NPolicy.AVERAGE}

# Preset studies: alpha-0.01 power curves at four sample sizes over three
# spread levels, and the 12-row null error-rate table at mu = 9.2.
_POWER_PRESET_N = {"paper-fig1": 5, "paper-fig2": 25, "paper-fig3": 100, "paper-fig4": 500}
_POWER_PRESET_SIGMAS = (0.2, 1.2, 7.0)
_POWER_PRESET_STEPS = (0.0, 1.0, -1.0, 2.0, -2.0, 2.5, -2.5, 3.0, -3.0, 3.5, -3.5, 4.0, -4.0, 5.0, -5.0)
_TYPE1_PRESET = {"ns": (5, 25, 100, 500), "sigmas": (1.25, 3.5, 10.0), "mu": 9.2}
_DEFAULT_REPS = 500
_DEFAULT_SEED = 20260815


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fmt_p(p: float) -> str:
    """Three-decimal display; '0.000' means p < 0.0005."""
    return f"{p:.3f}"


def _parse_float(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CliError(2, f"{where}: {text!r} is not a number") from None
    if not math.isfinite(value):
        raise CliError(2, f"{where}: {text!r} is not finite")
    return value


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def _read_two_column_csv(path: str) -> tuple[list[float], list[float]]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CliError(2, f"cannot read {path}: {exc}") from None
    xs: list[float] = []
    ys: list[float] = []
    start = 0
    if rows and rows[0] and not _is_number(rows[0][0].strip()):
        start = 1  # header row
    for i in range(start, len(rows)):
        row = rows[i]
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) > 2:
            raise CliError(
                2, f"{path} row {i + 1}: expected at most two columns, got {len(row)}"
            )
        for col, bucket in ((0, xs), (1, ys)):
            if col < len(row) and row[col].strip() != "":
                bucket.append(
                    _parse_float(row[col].strip(), f"{path} row {i + 1} column {col + 1}")
                )
    return xs, ys


def _read_one_column(path: str) -> list[float]:
    try:
        with open(path, newline="") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise CliError(2, f"cannot read {path}: {exc}") from None
    values: list[float] = []
    start = 0
    nonempty = [ln for ln in lines if ln]
    if nonempty and not _is_number(nonempty[0].split(",")[0]):
        start = lines.index(nonempty[0]) + 1
    for i in range(start, len(lines)):
        if not lines[i]:
            continue
        values.append(_parse_float(lines[i].split(",")[0], f"{path} row {i + 1}"))
    return values


def _make_sample(values: list[float], label: str) -> Sample:
    try:
        return Sample(values)
    except ValueError as exc:
        raise CliError(2, f"{label}: {exc}") from None


def _load_test_input(args) -> tuple[Sample, Sample, dict[str, str]]:
    sources = [bool(args.input), bool(args.x or args.y), bool(args.dataset)]
    if sum(sources) != 1:
        raise CliError(
            2, "provide exactly one input: --input CSV, --x FILE with --y FILE, or --dataset NAME"
        )
    if args.dataset:
        try:
            x, y = get_dataset(args.dataset)
        except KeyError as exc:
            raise CliError(2, str(exc.args[0])) from None
        return x, y, {}
    if args.input:
        xs, ys = _read_two_column_csv(args.input)
        return (
            _make_sample(xs, f"{args.input} column 1"),
            _make_sample(ys, f"{args.input} column 2"),
            {os.path.basename(args.input): hash_file(args.input)},
        )
    if not (args.x and args.y):
        raise CliError(2, "--x and --y must be given together")
    xs = _read_one_column(args.x)
    ys = _read_one_column(args.y)
    return (
        _make_sample(xs, args.x),
        _make_sample(ys, args.y),
        {
            os.path.basename(args.x): hash_file(args.x),
            os.path.basename(args.y): hash_file(args.y),
        },
    )


def cmd_test(args) -> int:
    x, y, digests = _load_test_input(args)
    policy = _POLICIES[args.n_policy] if args.n_policy else None
    try:
        cv = crossvar_test(x, y, alpha=args.alpha, n_policy=policy)
        tt = pooled_t_test(x, y, alpha=args.alpha)
        ft = f_variance_test(x, y, alpha=0.05)
    except DegenerateSampleError as exc:
        raise CliError(3, f"degenerate data: {exc}") from None
    except ValueError as exc:
        raise CliError(2, str(exc)) from None

    warnings = []
    if ft.decision.value == "REJECT":
        warnings.append(
            "F test rejects equal variances at the 5% level; "
            "the pooled tests assume a common variance"
        )

    manifest = RunManifest(
        command="test",
        flags={
            "alpha": args.alpha,
            "n_policy": args.n_policy,
            "dataset": args.dataset,
            "format": args.format,
        },
        seed=None,
        version=__version__,
        input_digests=digests,
    )
    results = [cv, tt, ft]
    if args.format == "json":
        payload = {
            "tests": [
                {
                    "method": r.method.value,
                    "statistic": r.statistic,
                    "df": r.df,
                    "p_value": r.p_value,
                    "alpha": r.alpha,
                    "decision": r.decision.value,
                    "n_policy": r.n_policy_used.value if r.n_policy_used else None,
                }
                for r in results
            ],
            "warnings": warnings,
            "manifest": manifest.to_dict(),
        }
        sys.stdout.write(canonical_json(payload))
    elif args.format == "csv":
        rows = [
            [
                r.method.value,
                r.statistic,
                r.df,
                r.p_value,
                r.alpha,
                r.decision.value,
                r.n_policy_used.value if r.n_policy_used else "",
            ]
            for r in results
        ]
        sys.stdout.write(
            format_csv(
                ["method", "statistic", "df", "p_value", "alpha", "decision", "n_policy"],
                rows,
                manifest,
            )
        )
    else:
        mx, my = summarize(x), summarize(y)
        print(f"x: n={x.n} mean={mx.mean:.6g} var={mx.variance:.6g}")
        print(f"y: n={y.n} mean={my.mean:.6g} var={my.variance:.6g}")
        print(
            f"cross-variance: T*={cv.statistic:.6f} df={cv.df:g} "
            f"p={_fmt_p(cv.p_value)} -> {cv.decision.value} (alpha={cv.alpha:g})"
        )
        print(
            f"pooled t:       t={tt.statistic:.4f} df={tt.df:g} "
            f"p={_fmt_p(tt.p_value)} -> {tt.decision.value} (alpha={tt.alpha:g})"
        )
        print(
            f"F variances:    F={ft.statistic:.4f} "
            f"p={_fmt_p(ft.p_value)} -> {ft.decision.value} (alpha={ft.alpha:g})"
        )
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _dist_inputs(args) -> list[float]:
    given = [args.t is not None, args.p is not None, args.grid is not None]
    if sum(given) != 1:
        raise CliError(2, "provide exactly one of --t, --p, or --grid")
    if args.grid is not None:
        return [_parse_float(tok, "--grid") for tok in args.grid.split(",") if tok.strip()]
    return [args.t if args.t is not None else args.p]


def cmd_dist(args) -> int:
    which = args.which
    needs_p = which == "tstar-quantile"
    if args.p is not None and not needs_p:
        raise CliError(2, f"--p only applies to tstar-quantile, not {which}")
    if args.t is not None and needs_p:
        raise CliError(2, "tstar-quantile takes --p (or --grid of levels), not --t")
    if which == "general-cdf":
        if args.sigma_x2 is None or args.sigma_y2 is None:
            raise CliError(2, "general-cdf requires --sigma-x2 and --sigma-y2")
    elif args.sigma_x2 is not None or args.sigma_y2 is not None:
        raise CliError(2, f"--sigma-x2/--sigma-y2 only apply to general-cdf, not {which}")
    if args.n is None:
        raise CliError(2, "--n is required")

    inputs = _dist_inputs(args)
    rows = []
    try:
        if which == "general-cdf":
            model = GeneralModel(int(args.n), args.sigma_x2, args.sigma_y2)
            if args.n != int(args.n):
                raise CliError(2, f"general-cdf requires integer n, got {args.n}")
            for t in inputs:
                if not 0.0 <= t <= 1.0:
                    raise CliError(2, f"general-cdf input {t} is outside [0, 1]")
                value, err = general_cdf_quadrature(t, model, with_error=True)
                rows.append([t, value, "quadrature", err])
        else:
            model = TstarModel(args.n)
            for v in inputs:
                if needs_p:
                    if not 0.0 < v < 1.0:
                        raise CliError(2, f"quantile level {v} is outside (0, 1)")
                    rows.append([v, tstar_quantile(v, model), "closed-form", ""])
                elif which == "tstar-pdf":
                    if not 0.0 < v <= 1.0:
                        raise CliError(2, f"pdf input {v} is outside (0, 1]")
                    rows.append([v, tstar_pdf(v, model), "closed-form", ""])
                else:
                    if not 0.0 <= v <= 1.0:
                        raise CliError(2, f"cdf input {v} is outside [0, 1]")
                    rows.append([v, tstar_cdf(v, model), "closed-form", ""])
    except ValueError as exc:
        raise CliError(2, str(exc)) from None

    manifest = RunManifest(
        command="dist",
        flags={
            "which": which,
            "n": args.n,
            "sigma_x2": args.sigma_x2,
            "sigma_y2": args.sigma_y2,
        },
        seed=None,
        version=__version__,
        input_digests={},
    )
    sys.stdout.write(
        format_csv(["input", "output", "method", "error_estimate"], rows, manifest)
    )
    return 0


def _power_grid(mu_x: float, sigma: float, n: int) -> tuple[float, ...]:
    scale = sigma * math.sqrt(2.0 / n)
    return tuple(sorted(mu_x + k * scale for k in _POWER_PRESET_STEPS))


def cmd_power(args) -> int:
    out_dir = args.out
    reps = args.reps if args.reps is not None else _DEFAULT_REPS
    seed = args.seed if args.seed is not None else _DEFAULT_SEED
    mode = QuantileMode(args.quantile_mode)

    if args.preset:
        if args.preset not in _POWER_PRESET_N:
            raise CliError(
                2,
                f"unknown power preset {args.preset!r}; "
                f"choose from {', '.join(sorted(_POWER_PRESET_N))}",
            )
        n = _POWER_PRESET_N[args.preset]
        alpha = args.alpha if args.alpha is not None else 0.01
        mu_x = args.mu_x if args.mu_x is not None else 0.0
        os.makedirs(out_dir, exist_ok=True)  # only after flags validate
        written = []
        for sigma in _POWER_PRESET_SIGMAS:
            config = StudyConfig(
                n=n,
                reps=reps,
                alpha=alpha,
                mu_x=mu_x,
                mu_y_grid=_power_grid(mu_x, sigma, n),
                sigma=sigma,
                seed=seed,
                quantile_mode=mode,
            )
            manifest = RunManifest(
                command="power",
                flags={
                    "preset": args.preset,
                    "n": n,
                    "reps": reps,
                    "alpha": alpha,
                    "sigma": sigma,
                    "mu_x": mu_x,
                    "quantile_mode": mode.value,
                },
                seed=seed,
                version=__version__,
            )
            curve = run_power_study(config)
            written += write_power_outputs(
                out_dir, curve, manifest, stem=f"power-{args.preset}-sigma{sigma:g}"
            )
        for path in written:
            print(path)
        return 0

    if args.n is None or args.sigma is None:
        raise CliError(2, "power requires --preset, or --n and --sigma")
    alpha = args.alpha if args.alpha is not None else 0.01
    mu_x = args.mu_x if args.mu_x is not None else 0.0
    if args.mu_grid:
        grid = tuple(
            _parse_float(tok, "--mu-grid") for tok in args.mu_grid.split(",") if tok.strip()
        )
        if not grid:
            raise CliError(2, "--mu-grid is empty")
    else:
        grid = _power_grid(mu_x, args.sigma, args.n)
    config = StudyConfig(
        n=args.n,
        reps=reps,
        alpha=alpha,
        mu_x=mu_x,
        mu_y_grid=grid,
        sigma=args.sigma,
        seed=seed,
        quantile_mode=mode,
    )
    manifest = RunManifest(
        command="power",
        flags={
            "n": args.n,
            "reps": reps,
            "alpha": alpha,
            "sigma": args.sigma,
            "mu_x": mu_x,
            "mu_grid": list(grid),
            "quantile_mode": mode.value,
        },
        seed=seed,
        version=__version__,
    )
    os.makedirs(out_dir, exist_ok=True)
    curve = run_power_study(config)
    for path in write_power_outputs(out_dir, curve, manifest, stem="power"):
        print(path)
    return 0


def _parse_int_list(text: str, where: str) -> tuple[int, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(int(tok))
        except ValueError:
            raise CliError(2, f"{where}: {tok!r} is not an integer") from None
    if not out:
        raise CliError(2, f"{where} is empty")
    return tuple(out)


def cmd_type1(args) -> int:
    out_dir = args.out
    reps = args.reps if args.reps is not None else _DEFAULT_REPS
    seed = args.seed if args.seed is not None else _DEFAULT_SEED

    if args.preset:
        if args.preset != "paper-table1":
            raise CliError(2, f"unknown type1 preset {args.preset!r}; expected paper-table1")
        ns = _TYPE1_PRESET["ns"]
        sigmas = _TYPE1_PRESET["sigmas"]
        mu = _TYPE1_PRESET["mu"]
    else:
        if args.n is None or args.sigma is None:
            raise CliError(2, "type1 requires --preset, or --n and --sigma lists")
        ns = _parse_int_list(args.n, "--n")
        sigmas = tuple(
            _parse_float(tok, "--sigma") for tok in args.sigma.split(",") if tok.strip()
        )
        if not sigmas:
            raise CliError(2, "--sigma is empty")
        mu = args.mu if args.mu is not None else 0.0
    for n in ns:
        if n < 2:
            raise CliError(2, f"--n entries must be >= 2, got {n}")
    for s in sigmas:
        if s <= 0:
            raise CliError(2, f"--sigma entries must be positive, got {s}")

    manifest = RunManifest(
        command="type1",
        flags={
            "preset": args.preset,
            "n": list(ns),
            "sigma": list(sigmas),
            "mu": mu,
            "reps": reps,
        },
        seed=seed,
        version=__version__,
    )
    os.makedirs(out_dir, exist_ok=True)
    table = run_type1_table(ns, sigmas, mu=mu, reps=reps, seed=seed)
    for path in write_type1_outputs(out_dir, table, manifest, stem="type1"):
        print(path)
    return 0


def cmd_datasets(args) -> int:
    if args.name:
        try:
            x, y = get_dataset(args.name)
        except KeyError as exc:
            raise CliError(2, str(exc.args[0])) from None
        print("x,y")
        for i in range(max(x.n, y.n)):
            cx = repr(x.values[i]) if i < x.n else ""
            cy = repr(y.values[i]) if i < y.n else ""
            print(f"{cx},{cy}")
        return 0
    print(f"{'name':<6} {'n_x':>4} {'mean_x':>10} {'var_x':>10} {'n_y':>4} {'mean_y':>10} {'var_y':>10}")
    for name, (x, y) in DATASETS.items():
        mx, my = summarize(x), summarize(y)
        print(
            f"{name:<6} {x.n:>4} {mx.mean:>10.3f} {mx.variance:>10.3f} "
            f"{y.n:>4} {my.mean:>10.3f} {my.variance:>10.3f}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossvar",
        description="Cross-variance two-sample testing toolkit",
    )
    parser.add_argument("--version", action="version", version=f"crossvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run the three tests on a pair of samples")
    p_test.add_argument("--input", help="two-column CSV (x in column 1, y in column 2)")
    p_test.add_argument("--x", help="file with one x value per line")
    p_test.add_argument("--y", help="file with one y value per line")
    p_test.add_argument("--dataset", help="bundled dataset name (ds1..ds14)")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--n-policy", choices=sorted(_POLICIES), default=None)
    p_test.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p_test.set_defaults(func=cmd_test)

    p_dist = sub.add_parser("dist", help="evaluate the reference distribution")
    p_dist.add_argument(
        "--which",
        required=True,
        choices=["tstar-pdf", "tstar-cdf", "tstar-quantile", "general-cdf"],
    )
    p_dist.add_argument("--n", type=float)
    p_dist.add_argument("--t", type=float)
    p_dist.add_argument("--p", type=float)
    p_dist.add_argument("--grid", help="comma-separated evaluation points")
    p_dist.add_argument("--sigma-x2", type=float)
    p_dist.add_argument("--sigma-y2", type=float)
    p_dist.set_defaults(func=cmd_dist)

    p_power = sub.add_parser("power", help="Monte Carlo power study")
    p_power.add_argument("--n", type=int)
    p_power.add_argument("--reps", type=int)
    p_power.add_argument("--alpha", type=float)
    p_power.add_argument("--sigma", type=float)
    p_power.add_argument("--mu-x", type=float)
    p_power.add_argument("--mu-grid", help="comma-separated alternative means")
    p_power.add_argument("--seed", type=int)
    p_power.add_argument("--quantile-mode", choices=["empirical", "analytic"], default="empirical")
    p_power.add_argument("--preset", help="paper-fig1 .. paper-fig4")
    p_power.add_argument("--out", required=True, help="output directory")
    p_power.set_defaults(func=cmd_power)

    p_type1 = sub.add_parser("type1", help="Monte Carlo type-I error table")
    p_type1.add_argument("--n", help="comma-separated sample sizes")
    p_type1.add_argument("--sigma", help="comma-separated standard deviations")
    p_type1.add_argument("--mu", type=float)
    p_type1.add_argument("--reps", type=int)
    p_type1.add_argument("--seed", type=int)
    p_type1.add_argument("--preset", help="paper-table1")
    p_type1.add_argument("--out", required=True, help="output directory")
    p_type1.set_defaults(func=cmd_type1)

    p_ds = sub.add_parser("datasets", help="list bundled datasets")
    p_ds.add_argument("--name", help="print the raw values of one dataset")
    p_ds.set_defaults(func=cmd_datasets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateSampleError as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
