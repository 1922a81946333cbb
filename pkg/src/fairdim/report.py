"""Rank-sweep experiment harness and its serialized report formats.

A sweep fits every method at every rank from 1 to a maximum and collects
one row per (rank, method) cell. Reports are written both as
line-delimited JSON (one self-contained record per line) and as a CSV
table with the same field order. Wall-clock timings are collected per fit
but deliberately kept out of both files so that repeated runs on the same
input are byte-identical; they go to the timing log instead.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from time import perf_counter

from .dataset import DataError, GroupedData
from .fairpca import FairFitResult, SearchConfig, c_fpca, classical_pca, u_fpca

__all__ = [
    "METHODS",
    "SweepRow",
    "SweepReport",
    "run_sweep",
    "fit_record",
    "write_report_jsonl",
    "write_report_csv",
    "read_report_jsonl",
    "write_plot_series",
]

METHODS = ("pca", "ufpca", "cfpca")

_ROW_FIELDS = (
    "r",
    "method",
    "alpha",
    "overall_err",
    "err_a",
    "err_b",
    "disparity",
    "fairness",
)


@dataclass(frozen=True)
class SweepRow:
    r: int
    method: str
    alpha: float
    overall_err: float
    err_a: float
    err_b: float
    disparity: float
    fairness: float
    runtime_ms: int = 0  # measured per fit; never serialized into reports


@dataclass(frozen=True)
class SweepReport:
    dataset_id: str
    balanced: bool
    rows: tuple[SweepRow, ...]


def _fit_one(g: GroupedData, r: int, method: str, config: SearchConfig) -> SweepRow:
    start = perf_counter()
    if method == "pca":
        fit = classical_pca(g, r)
    elif method == "ufpca":
        fit = u_fpca(g, r, config)
    elif method == "cfpca":
        fit = c_fpca(g, r, config)
    else:
        raise ValueError(f"unknown method {method!r}")
    elapsed_ms = int(round((perf_counter() - start) * 1000.0))
    m = fit.metrics
    return SweepRow(
        r=r,
        method=method,
        alpha=float(fit.alpha),
        overall_err=m.overall_err,
        err_a=m.err_a,
        err_b=m.err_b,
        disparity=m.disparity,
        fairness=m.fairness,
        runtime_ms=elapsed_ms,
    )


def run_sweep(
    g: GroupedData,
    max_rank: int,
    config: SearchConfig,
    dataset_id: str,
    balanced: bool,
    threads: int = 1,
) -> SweepReport:
    """Fit all methods for every rank 1..max_rank.

    Cells are independent pure computations, so with ``threads > 1`` they
    run on a thread pool; rows are always assembled in (rank, method)
    order regardless of completion order.
    """
    cells = [(r, method) for r in range(1, max_rank + 1) for method in METHODS]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda c: _fit_one(g, c[0], c[1], config), cells))
    else:
        rows = [_fit_one(g, r, method, config) for r, method in cells]
    return SweepReport(dataset_id=dataset_id, balanced=balanced, rows=tuple(rows))


def _row_record(report: SweepReport, row: SweepRow) -> dict:
    record = {"dataset_id": report.dataset_id, "balanced": report.balanced}
    record.update(
        {
            "r": int(row.r),
            "method": row.method,
            "alpha": float(row.alpha),
            "overall_err": float(row.overall_err),
            "err_a": float(row.err_a),
            "err_b": float(row.err_b),
            "disparity": float(row.disparity),
            "fairness": float(row.fairness),
        }
    )
    return record


def fit_record(fit: FairFitResult, labels: tuple[str, str] | None = None) -> dict:
    """JSON-ready record for a single fit; the projection rides along so
    the output is directly usable for transforming new data."""
    m = fit.metrics
    record = {
        "method": fit.method,
        "rank": int(fit.u.shape[1]),
        "alpha": float(fit.alpha),
        "overall_err": m.overall_err,
        "err_a": m.err_a,
        "err_b": m.err_b,
        "disparity": m.disparity,
        "fairness": m.fairness,
        "iterations": int(fit.iterations),
        "budget": None if fit.budget is None else float(fit.budget),
        "projection": [[float(v) for v in row] for row in fit.u],
    }
    if labels is not None:
        record["privileged"] = labels[0]
        record["harmed"] = labels[1]
    return record


def write_report_jsonl(report: SweepReport, fh) -> None:
    for row in report.rows:
        fh.write(json.dumps(_row_record(report, row), separators=(",", ":")))
        fh.write("\n")


def write_report_csv(report: SweepReport, fh) -> None:
    fh.write("dataset_id,balanced," + ",".join(_ROW_FIELDS) + "\n")
    for row in report.rows:
        rec = _row_record(report, row)
        fh.write(",".join(str(rec[k]) for k in ("dataset_id", "balanced", *_ROW_FIELDS)))
        fh.write("\n")


def read_report_jsonl(path) -> SweepReport:
    """Parse a JSONL report, validating record shape and method tags."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc

    dataset_id = ""
    balanced = False
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{lineno}: malformed report line: {exc}") from exc
        try:
            if rec["method"] not in METHODS:
                raise DataError(f"{path}:{lineno}: unknown method {rec['method']!r}")
            row = SweepRow(
                r=int(rec["r"]),
                method=rec["method"],
                alpha=float(rec["alpha"]),
                overall_err=float(rec["overall_err"]),
                err_a=float(rec["err_a"]),
                err_b=float(rec["err_b"]),
                disparity=float(rec["disparity"]),
                fairness=float(rec["fairness"]),
            )
            dataset_id = str(rec["dataset_id"])
            balanced = bool(rec["balanced"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"{path}:{lineno}: malformed report line: {exc}") from exc
        rows.append(row)
    return SweepReport(dataset_id=dataset_id, balanced=balanced, rows=tuple(rows))


def _sorted_rows(report: SweepReport) -> list[SweepRow]:
    return sorted(report.rows, key=lambda row: (row.r, METHODS.index(row.method)))


def write_plot_series(report: SweepReport, out_dir) -> list[Path]:
    """Emit plot-ready CSV series from a report.

    One file per figure panel family: overall error vs rank, fairness vs
    rank, and per-method group errors vs rank.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = _sorted_rows(report)
    written = []

    overall = out_dir / "overall_error_vs_rank.csv"
    with overall.open("w", encoding="utf-8") as fh:
        fh.write("r,method,overall_err\n")
        for row in rows:
            fh.write(f"{row.r},{row.method},{row.overall_err}\n")
    written.append(overall)

    fairness = out_dir / "fairness_vs_rank.csv"
    with fairness.open("w", encoding="utf-8") as fh:
        fh.write("r,method,fairness\n")
        for row in rows:
            fh.write(f"{row.r},{row.method},{row.fairness}\n")
    written.append(fairness)

    for method in METHODS:
        method_rows = [row for row in rows if row.method == method]
        if not method_rows:
            continue
        series = out_dir / f"group_errors_{method}.csv"
        with series.open("w", encoding="utf-8") as fh:
            fh.write("r,err_a,err_b\n")
            for row in method_rows:
                fh.write(f"{row.r},{row.err_a},{row.err_b}\n")
        written.append(series)
    return written
