"""Reconstruction-error, disparity and fairness measures for a projection.

All measures depend on the projection matrix only through the subspace it
spans, so any orthonormal re-mixing of its columns leaves them unchanged.
Orthonormality of the projection is validated, not assumed: a silently
skewed basis would corrupt every number downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import GroupedData
from .linalg import LinalgError, as_matrix

__all__ = [
    "GroupMetrics",
    "PrivilegeAssignment",
    "avg_reconstruction_error",
    "avg_reconstruction_error_direct",
    "disparity",
    "fairness_measure",
    "group_metrics",
    "identify_privileged",
]

_PROJ_ORTHO_TOL = 1e-6


def _check_projection(x: np.ndarray, u: np.ndarray) -> None:
    if x.shape[1] != u.shape[0]:
        raise LinalgError(
            f"projection rows ({u.shape[0]}) must match data width ({x.shape[1]})"
        )
    gram = u.T @ u
    if np.max(np.abs(gram - np.eye(gram.shape[0]))) > _PROJ_ORTHO_TOL:
        raise LinalgError("projection columns are not orthonormal")


def _avg_err(x: np.ndarray, count: int, u: np.ndarray) -> float:
    # ||X||_F^2 - ||XU||_F^2 equals the squared residual for orthonormal U
    # without materializing the n x d residual; clamp round-off negatives.
    total = float(np.sum(x * x))
    kept = float(np.sum((x @ u) ** 2))
    return max(total - kept, 0.0) / count


def avg_reconstruction_error(x, u) -> float:
    """Average squared residual of projecting ``x`` onto span(u)."""
    x = as_matrix(x, "x")
    u = as_matrix(u, "u")
    _check_projection(x, u)
    return _avg_err(x, x.shape[0], u)


def avg_reconstruction_error_direct(x, u) -> float:
    """Same quantity via the explicit residual; the slow reference form."""
    x = as_matrix(x, "x")
    u = as_matrix(u, "u")
    _check_projection(x, u)
    resid = x - x @ u @ u.T
    return float(np.sum(resid * resid)) / x.shape[0]


def disparity(x_a, x_b, n_a: int, n_b: int, u) -> float:
    """Harmed-group average error minus privileged-group average error.

    ``x_a`` is the privileged group. Zero is the fairest value; a negative
    result means the roles inverted under this projection.
    """
    x_a = as_matrix(x_a, "x_a")
    x_b = as_matrix(x_b, "x_b")
    u = as_matrix(u, "u")
    if n_a < 1 or n_b < 1:
        raise LinalgError("group counts must be positive")
    _check_projection(x_a, u)
    _check_projection(x_b, u)
    return _avg_err(x_b, n_b, u) - _avg_err(x_a, n_a, u)


def fairness_measure(x_a, x_b, n_a: int, n_b: int, u) -> float:
    """Squared disparity; non-negative, and even in the roles' order."""
    d = disparity(x_a, x_b, n_a, n_b, u)
    return d * d


@dataclass(frozen=True)
class GroupMetrics:
    """All per-fit measures, with group a = privileged, group b = harmed."""

    overall_err: float
    err_a: float
    err_b: float
    disparity: float
    fairness: float


def group_metrics(x, x_a, x_b, n_a: int, n_b: int, u) -> GroupMetrics:
    """Evaluate every measure for one projection with pre-assigned roles."""
    x = as_matrix(x, "x")
    x_a = as_matrix(x_a, "x_a")
    x_b = as_matrix(x_b, "x_b")
    u = as_matrix(u, "u")
    if n_a < 1 or n_b < 1:
        raise LinalgError("group counts must be positive")
    _check_projection(x, u)
    _check_projection(x_a, u)
    _check_projection(x_b, u)
    err_a = _avg_err(x_a, n_a, u)
    err_b = _avg_err(x_b, n_b, u)
    gap = err_b - err_a
    return GroupMetrics(
        overall_err=_avg_err(x, x.shape[0], u),
        err_a=err_a,
        err_b=err_b,
        disparity=gap,
        fairness=gap * gap,
    )


@dataclass(frozen=True)
class PrivilegeAssignment:
    """Which group a baseline projection favors, frozen for a whole fit.

    ``budget`` is the harmed group's average error under that baseline,
    the cap both groups must respect in the constrained fit.
    """

    x_privileged: np.ndarray
    x_harmed: np.ndarray
    n_privileged: int
    n_harmed: int
    label_privileged: str
    label_harmed: str
    budget: float


def identify_privileged(g: GroupedData, u_pca) -> PrivilegeAssignment:
    """Assign privileged/harmed roles from errors under the plain-PCA basis.

    The group with the lower average reconstruction error is privileged;
    on an exact tie the first group takes that role.
    """
    u_pca = as_matrix(u_pca, "u_pca")
    err_first = avg_reconstruction_error(g.x_a, u_pca)
    err_second = avg_reconstruction_error(g.x_b, u_pca)
    if err_first <= err_second:
        return PrivilegeAssignment(
            x_privileged=g.x_a,
            x_harmed=g.x_b,
            n_privileged=g.n_a,
            n_harmed=g.n_b,
            label_privileged=g.label_a,
            label_harmed=g.label_b,
            budget=err_second,
        )
    return PrivilegeAssignment(
        x_privileged=g.x_b,
        x_harmed=g.x_a,
        n_privileged=g.n_b,
        n_harmed=g.n_a,
        label_privileged=g.label_b,
        label_harmed=g.label_a,
        budget=err_first,
    )
