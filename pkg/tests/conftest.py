"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from fairdim.dataset import RawTable, center_and_split, write_table
from fairdim.synth import s1_table


def rand_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    m = rng.standard_normal((n, n))
    return (m + m.T) * 0.5


def rand_orthonormal(rng: np.random.Generator, d: int, r: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return q[:, :r]


def eig2x2_values(m: np.ndarray) -> tuple[float, float]:
    """Closed-form eigenvalues of a symmetric 2x2, descending."""
    a, b, c = m[0, 0], m[0, 1], m[1, 1]
    mid = 0.5 * (a + c)
    rad = np.sqrt((0.5 * (a - c)) ** 2 + b * b)
    return float(mid + rad), float(mid - rad)


def make_table(features, labels, sensitive="group") -> RawTable:
    features = np.asarray(features, dtype=float)
    names = tuple(f"f{i}" for i in range(features.shape[1]))
    return RawTable(
        features=features,
        labels=tuple(labels),
        feature_names=names,
        sensitive_name=sensitive,
    )


def random_grouped(rng: np.random.Generator, n_a: int, n_b: int, d: int):
    """Centered two-group dataset with distinct group covariances."""
    stretch = np.linspace(1.0, 3.0, d)
    xa = rng.standard_normal((n_a, d)) * stretch
    xb = rng.standard_normal((n_b, d)) * stretch[::-1]
    feats = np.vstack([xa, xb])
    labels = ["a"] * n_a + ["b"] * n_b
    return center_and_split(make_table(feats, labels))


@pytest.fixture(scope="session")
def s1_grouped():
    return center_and_split(s1_table())


@pytest.fixture()
def toy_csv(tmp_path):
    """Write a small two-group CSV and return its path."""

    def _write(features, labels, name="toy.csv", sensitive="group"):
        path = tmp_path / name
        write_table(make_table(features, labels, sensitive), path)
        return path

    return _write
