"""Command-line front end: generate synthetic data, fit, sweep, plot.

Exit codes: 0 success, 1 bad flags or an invalid request for the given
data, 2 data/schema errors, 3 numeric failures. Timing lines go to
stderr so every report artifact stays byte-reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from time import perf_counter

from .dataset import DataError, load_grouped, write_table
from .fairpca import SearchConfig, c_fpca, classical_pca, u_fpca
from .linalg import LinalgError
from .metrics import identify_privileged
from .report import (
    METHODS,
    fit_record,
    read_report_jsonl,
    run_sweep,
    write_plot_series,
    write_report_csv,
    write_report_jsonl,
)
from .synth import DEFAULT_SEED, s1_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

THREADS_ENV = "FAIRDIM_THREADS"


class _UsageError(Exception):
    """Flag-level problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text}")
    return value


def _build_parser() -> _Parser:
    parser = _Parser(prog="fairdim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write the bundled synthetic dataset as CSV")
    gen.add_argument("--out", required=True, type=Path)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)

    fit = sub.add_parser("fit", help="fit one method at one rank")
    fit.add_argument("--input", required=True, type=Path)
    fit.add_argument("--sensitive-col", required=True)
    fit.add_argument("--method", required=True, choices=METHODS)
    fit.add_argument("--rank", required=True, type=_positive_int)
    fit.add_argument("--tol", type=_positive_float, default=1e-6)
    fit.add_argument("--balanced", action="store_true")
    fit.add_argument("--output", type=Path)

    sweep = sub.add_parser("sweep", help="fit every method for ranks 1..max")
    sweep.add_argument("--input", required=True, type=Path)
    sweep.add_argument("--sensitive-col", required=True)
    sweep.add_argument("--max-rank", required=True, type=_positive_int)
    sweep.add_argument("--tol", type=_positive_float, default=1e-6)
    sweep.add_argument("--balanced", action="store_true")
    sweep.add_argument("--output", type=Path)

    plotdata = sub.add_parser("plotdata", help="emit plot series from a sweep report")
    plotdata.add_argument("--report", required=True, type=Path)
    plotdata.add_argument("--out-dir", required=True, type=Path)

    return parser


def _thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise _UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise _UsageError(f"{THREADS_ENV} must be at least 1, got {value}")
    return value


def _cmd_gen(args) -> int:
    write_table(s1_table(args.seed), args.out)
    return EXIT_OK


def _cmd_fit(args) -> int:
    g = load_grouped(args.input, args.sensitive_col, balanced=args.balanced)
    if args.rank > g.x.shape[1]:
        raise _UsageError(f"--rank {args.rank} exceeds feature count {g.x.shape[1]}")
    config = SearchConfig(tol=args.tol)
    start = perf_counter()
    if args.method == "pca":
        fit = classical_pca(g, args.rank)
    elif args.method == "ufpca":
        fit = u_fpca(g, args.rank, config)
    else:
        fit = c_fpca(g, args.rank, config)
    elapsed_ms = int(round((perf_counter() - start) * 1000.0))
    print(
        f"fit dataset={args.input.stem} method={args.method} r={args.rank} "
        f"runtime_ms={elapsed_ms}",
        file=sys.stderr,
    )

    # role labels always come from the plain-PCA basis at this rank
    basis = fit.u if args.method == "pca" else classical_pca(g, args.rank).u
    roles = identify_privileged(g, basis)
    record = fit_record(fit, labels=(roles.label_privileged, roles.label_harmed))
    text = json.dumps(record) + "\n"
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    g = load_grouped(args.input, args.sensitive_col, balanced=args.balanced)
    if args.max_rank > g.x.shape[1]:
        raise _UsageError(
            f"--max-rank {args.max_rank} exceeds feature count {g.x.shape[1]}"
        )
    report = run_sweep(
        g,
        args.max_rank,
        SearchConfig(tol=args.tol),
        dataset_id=args.input.stem,
        balanced=args.balanced,
        threads=_thread_cap(),
    )
    for row in report.rows:
        print(
            f"fit dataset={report.dataset_id} method={row.method} r={row.r} "
            f"runtime_ms={row.runtime_ms}",
            file=sys.stderr,
        )
    if args.output is not None:
        stem = args.output.with_suffix("")
        jsonl_path = stem.with_suffix(".jsonl")
        csv_path = stem.with_suffix(".csv")
        with jsonl_path.open("w", encoding="utf-8") as fh:
            write_report_jsonl(report, fh)
        with csv_path.open("w", encoding="utf-8") as fh:
            write_report_csv(report, fh)
    else:
        write_report_jsonl(report, sys.stdout)
    return EXIT_OK


def _cmd_plotdata(args) -> int:
    report = read_report_jsonl(args.report)
    write_plot_series(report, args.out_dir)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "gen": _cmd_gen,
            "fit": _cmd_fit,
            "sweep": _cmd_sweep,
            "plotdata": _cmd_plotdata,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"fairdim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"fairdim: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (LinalgError, ValueError) as exc:
        print(f"fairdim: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"fairdim: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
