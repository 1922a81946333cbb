"""Loading, centering, group-splitting and balancing of two-group tables.

The on-disk contract is a UTF-8 CSV with one header row, comma delimiter
and ``.`` decimal point. One column (selected by exact header name) holds
the sensitive group label, taken verbatim as a string; every other column
must parse as a finite number. Rows with unparseable cells abort the load:
silently dropping rows would shift the group counts and every metric
computed from them.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "DataError",
    "RawTable",
    "GroupedData",
    "load_table",
    "write_table",
    "balance",
    "center_and_split",
    "load_grouped",
]

_CENTER_TOL = 1e-6  # max |column sum| per row count after centering


class DataError(ValueError):
    """The input table violates the loader's schema contract."""


@dataclass(frozen=True)
class RawTable:
    """A numeric feature matrix plus one group label per row.

    ``labels`` carries the sensitive column verbatim; the sensitive column
    itself is never part of ``features``.
    """

    features: np.ndarray            # (n, d) float64
    labels: tuple[str, ...]         # length n
    feature_names: tuple[str, ...]  # length d
    sensitive_name: str

    def __post_init__(self):
        if self.features.ndim != 2:
            raise DataError("features must be a 2-D array")
        if len(self.labels) != self.features.shape[0]:
            raise DataError("one label required per row")
        if len(self.feature_names) != self.features.shape[1]:
            raise DataError("one name required per feature column")

    def group_labels(self) -> tuple[str, str]:
        """The two distinct labels, in order of first appearance."""
        seen: list[str] = []
        for lab in self.labels:
            if lab not in seen:
                seen.append(lab)
        if len(seen) != 2:
            raise DataError(f"expected exactly 2 groups, found {len(seen)}")
        return seen[0], seen[1]


@dataclass(frozen=True)
class GroupedData:
    """Centered dataset with its two sensitive-group row partitions.

    ``x_a``/``x_b`` hold the rows of ``x`` belonging to the first- and
    second-seen group, in their original order. Which group is privileged
    is decided later, against a fitted projection, never here.
    """

    x: np.ndarray     # (n, d), centered
    x_a: np.ndarray   # (n_a, d)
    x_b: np.ndarray   # (n_b, d)
    n: int
    n_a: int
    n_b: int
    label_a: str
    label_b: str

    def __post_init__(self):
        if self.n_a < 1 or self.n_b < 1:
            raise DataError("each group needs at least one row")
        if self.n != self.n_a + self.n_b:
            raise DataError("group sizes must sum to the total row count")
        if self.x.shape != (self.n, self.x.shape[1]):
            raise DataError("row count mismatch")
        d = self.x.shape[1]
        if self.x_a.shape != (self.n_a, d) or self.x_b.shape != (self.n_b, d):
            raise DataError("group partitions must match the dataset width")


def load_table(path, sensitive_column: str) -> RawTable:
    """Read a CSV into a RawTable, excluding the sensitive column from features.

    Raises DataError for: missing file, missing/ambiguous header, absent
    sensitive column, no feature columns, ragged rows, non-numeric or
    non-finite feature cells, and a label column without exactly two
    distinct values.
    """
    path = Path(path)
    try:
        # utf-8-sig: plain UTF-8 plus tolerance for a spreadsheet-export BOM
        fh = path.open(newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc

    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        try:
            sens_idx = header.index(sensitive_column)
        except ValueError:
            raise DataError(
                f"{path}: sensitive column {sensitive_column!r} not in header"
            ) from None
        feature_names = tuple(h for i, h in enumerate(header) if i != sens_idx)
        if not feature_names:
            raise DataError(f"{path}: no feature columns besides {sensitive_column!r}")

        rows: list[list[float]] = []
        labels: list[str] = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise DataError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(record)}"
                )
            labels.append(record[sens_idx])
            parsed = []
            for i, cell in enumerate(record):
                if i == sens_idx:
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: non-numeric cell {cell!r} in column {header[i]!r}"
                    ) from None
                if not math.isfinite(value):
                    raise DataError(
                        f"{path}:{lineno}: non-finite cell {cell!r} in column {header[i]!r}"
                    )
                parsed.append(value)
            rows.append(parsed)

    distinct = set(labels)
    if len(distinct) != 2:
        raise DataError(
            f"{path}: sensitive column {sensitive_column!r} has {len(distinct)} "
            f"distinct values, expected exactly 2"
        )
    features = np.array(rows, dtype=np.float64)
    return RawTable(
        features=features,
        labels=tuple(labels),
        feature_names=feature_names,
        sensitive_name=sensitive_column,
    )


def write_table(table: RawTable, path) -> None:
    """Write a RawTable as CSV (features first, sensitive column last)."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(table.feature_names) + [table.sensitive_name])
        for row, label in zip(table.features, table.labels):
            writer.writerow([float(v) for v in row] + [label])


def balance(table: RawTable) -> RawTable:
    """Truncate each group to the smaller group's size.

    Keeps the first ``min(n_a, n_b)`` rows of each group in original file
    order; already-balanced input comes back unchanged.
    """
    first, second = table.group_labels()
    counts = {first: 0, second: 0}
    for lab in table.labels:
        counts[lab] += 1
    n_min = min(counts.values())

    keep: list[int] = []
    taken = {first: 0, second: 0}
    for i, lab in enumerate(table.labels):
        if taken[lab] < n_min:
            taken[lab] += 1
            keep.append(i)
    return RawTable(
        features=table.features[keep],
        labels=tuple(table.labels[i] for i in keep),
        feature_names=table.feature_names,
        sensitive_name=table.sensitive_name,
    )


def center_and_split(table: RawTable) -> GroupedData:
    """Subtract each column's global mean, then partition rows by group.

    The mean is always taken over all rows of the (possibly balanced)
    table, not per group; balancing must therefore happen before this
    step, since dropping rows moves the mean.
    """
    first, second = table.group_labels()
    x = table.features - table.features.mean(axis=0)
    mask_a = np.array([lab == first for lab in table.labels])
    x_a = x[mask_a]
    x_b = x[~mask_a]
    if x_a.shape[0] == 0 or x_b.shape[0] == 0:
        raise DataError("both groups need at least one row")
    grouped = GroupedData(
        x=x,
        x_a=x_a,
        x_b=x_b,
        n=x.shape[0],
        n_a=x_a.shape[0],
        n_b=x_b.shape[0],
        label_a=first,
        label_b=second,
    )
    col_sums = np.abs(x.sum(axis=0))
    if col_sums.size and col_sums.max() > _CENTER_TOL * grouped.n:
        raise DataError("centering failed: column sums exceed tolerance")
    return grouped


def load_grouped(path, sensitive_column: str, balanced: bool = False) -> GroupedData:
    """Load, optionally balance, then center and split."""
    table = load_table(path, sensitive_column)
    if balanced:
        table = balance(table)
    return center_and_split(table)
