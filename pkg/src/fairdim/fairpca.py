"""Plain PCA, the group-weighted covariance, and the two trade-off fits.

The blended objective ``alpha * overall_error + (1 - alpha) * disparity``
is minimized, for a fixed alpha, by the top eigenvectors of

    C_hat(alpha) = alpha * X'X/n + (1 - alpha) * (Xb'Xb/n_b - Xa'Xa/n_a)

with group a privileged and group b harmed. At alpha = 1 this is exactly
the plain covariance; as alpha drops, directions that retain the harmed
group's variance (at the privileged group's expense) take over, and at
alpha = 0 the roles typically invert. The fits search alpha in [0, 1] by
golden section for the value with the smallest squared disparity, the
constrained variant additionally capping both groups' errors at the
harmed group's plain-PCA error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .dataset import GroupedData
from .linalg import LinalgError, scaled_gram, sym_eig_top_r
from .metrics import (
    GroupMetrics,
    PrivilegeAssignment,
    group_metrics,
    identify_privileged,
)

__all__ = [
    "GOLDEN_RATIO",
    "SearchConfig",
    "GoldenSectionResult",
    "FairFitResult",
    "classical_pca",
    "weighted_covariance",
    "fair_projection",
    "golden_section",
    "u_fpca",
    "c_fpca",
]

GOLDEN_RATIO = (math.sqrt(5.0) + 1.0) / 2.0

# Slack allowed when verifying a constrained fit against its error budget.
_BUDGET_SLACK = 1e-9

METHOD_PCA = "pca"
METHOD_UFPCA = "ufpca"
METHOD_CFPCA = "cfpca"


@dataclass(frozen=True)
class SearchConfig:
    """Golden-section settings: stop once the bracket is narrower than tol."""

    tol: float = 1e-6
    max_iterations: int = 100
    golden_ratio: float = GOLDEN_RATIO

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


class GoldenSectionResult(NamedTuple):
    alpha: float
    iterations: int
    lo: float
    hi: float


@dataclass(frozen=True)
class FairFitResult:
    """A fitted projection with the trade-off weight that produced it.

    ``budget`` is set only for the constrained method and holds the cap
    both group errors were required to respect.
    """

    method: str
    alpha: float
    u: np.ndarray
    metrics: GroupMetrics
    iterations: int
    budget: float | None = None

    def __post_init__(self):
        gram = self.u.T @ self.u
        if np.max(np.abs(gram - np.eye(gram.shape[0]))) > 1e-9:
            raise LinalgError("fitted projection has non-orthonormal columns")
        if self.method == METHOD_CFPCA:
            if self.budget is None:
                raise ValueError("constrained fits must record their budget")
            if (
                self.metrics.err_a > self.budget + _BUDGET_SLACK
                or self.metrics.err_b > self.budget + _BUDGET_SLACK
            ):
                raise ValueError("constrained fit exceeds its error budget")


def _check_rank(r: int, d: int) -> None:
    if not 1 <= r <= d:
        raise LinalgError(f"rank must satisfy 1 <= r <= {d}, got {r}")


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"trade-off weight must lie in [0, 1], got {alpha}")
    return alpha


def _blend(c_x: np.ndarray, delta: np.ndarray, alpha: float) -> np.ndarray:
    # At alpha = 1 this returns c_x bit-exactly, so the fit degrades to
    # plain PCA with zero subspace difference, not merely a close one.
    return alpha * c_x + (1.0 - alpha) * delta


def classical_pca(g: GroupedData, r: int) -> FairFitResult:
    """Top-r eigenvectors of the plain covariance, with group metrics.

    Roles for the disparity sign are assigned from this projection's own
    per-group errors, so the reported disparity is never negative here.
    """
    _check_rank(r, g.x.shape[1])
    c_x = scaled_gram(g.x, g.n)
    u = sym_eig_top_r(c_x, r).vectors
    roles = identify_privileged(g, u)
    m = group_metrics(
        g.x, roles.x_privileged, roles.x_harmed, roles.n_privileged, roles.n_harmed, u
    )
    return FairFitResult(method=METHOD_PCA, alpha=1.0, u=u, metrics=m, iterations=0)


def weighted_covariance(g: GroupedData, alpha: float) -> np.ndarray:
    """Blend of the overall covariance with the signed group-covariance gap.

    Expects roles already assigned: ``g.x_a`` must be the privileged group.
    The harmed group's term enters positively, so small alpha rewards
    directions that represent the harmed group well.
    """
    alpha = _check_alpha(alpha)
    c_x = scaled_gram(g.x, g.n)
    delta = scaled_gram(g.x_b, g.n_b) - scaled_gram(g.x_a, g.n_a)
    return _blend(c_x, delta, alpha)


def fair_projection(g: GroupedData, alpha: float, r: int) -> np.ndarray:
    """Top-r eigenvectors of the weighted covariance at one alpha."""
    _check_rank(r, g.x.shape[1])
    return sym_eig_top_r(weighted_covariance(g, alpha), r).vectors


def golden_section(
    objective: Callable[[float], float],
    feasible: Callable[[float], bool] | None = None,
    config: SearchConfig | None = None,
) -> GoldenSectionResult:
    """Minimize a scalar function over [0, 1] by golden-section contraction.

    Each iteration compares the two interior candidates and keeps the
    sub-bracket around the better one, reusing the surviving candidate's
    value so only one fresh evaluation happens per iteration. With a
    feasibility predicate, the lower candidate wins only when it is both
    better and feasible; otherwise the bracket moves up toward 1, where
    the constrained fits are feasible by construction.

    Returns the final bracket midpoint and the iteration count.
    """
    cfg = config or SearchConfig()
    inv_ratio = 1.0 / cfg.golden_ratio
    lo, hi = 0.0, 1.0
    iterations = 0

    def evaluate(alpha: float) -> tuple[float, float, bool]:
        ok = True if feasible is None else bool(feasible(alpha))
        return alpha, objective(alpha), ok

    if (hi - lo) > cfg.tol:
        lower = evaluate(hi - (hi - lo) * inv_ratio)
        upper = evaluate(lo + (hi - lo) * inv_ratio)
        while (hi - lo) > cfg.tol and iterations < cfg.max_iterations:
            if lower[1] <= upper[1] and lower[2]:
                hi = upper[0]
                upper = lower
                lower = evaluate(hi - (hi - lo) * inv_ratio)
            else:
                lo = lower[0]
                lower = upper
                upper = evaluate(lo + (hi - lo) * inv_ratio)
            iterations += 1

    return GoldenSectionResult((lo + hi) * 0.5, iterations, lo, hi)


@dataclass
class _AlphaEvaluator:
    """Memoized per-alpha evaluation: one eigendecomposition per new alpha."""

    x: np.ndarray
    c_x: np.ndarray
    delta: np.ndarray
    roles: PrivilegeAssignment
    r: int
    cache: dict = field(default_factory=dict)

    def __call__(self, alpha: float):
        hit = self.cache.get(alpha)
        if hit is None:
            u = sym_eig_top_r(_blend(self.c_x, self.delta, alpha), self.r).vectors
            hit = self._record(alpha, u)
        return hit

    def seed(self, alpha: float, u: np.ndarray):
        return self._record(alpha, u)

    def _record(self, alpha: float, u: np.ndarray):
        m = group_metrics(
            self.x,
            self.roles.x_privileged,
            self.roles.x_harmed,
            self.roles.n_privileged,
            self.roles.n_harmed,
            u,
        )
        self.cache[alpha] = (u, m)
        return self.cache[alpha]


def _prepare_search(g: GroupedData, r: int):
    pca = classical_pca(g, r)
    roles = identify_privileged(g, pca.u)
    c_x = scaled_gram(g.x, g.n)
    delta = scaled_gram(roles.x_harmed, roles.n_harmed) - scaled_gram(
        roles.x_privileged, roles.n_privileged
    )
    evaluator = _AlphaEvaluator(x=g.x, c_x=c_x, delta=delta, roles=roles, r=r)
    evaluator.seed(1.0, pca.u)
    return pca, roles, evaluator


def u_fpca(g: GroupedData, r: int, config: SearchConfig | None = None) -> FairFitResult:
    """Unconstrained fair fit: pick alpha minimizing the squared disparity.

    Runs plain PCA once to freeze the privileged/harmed roles, then
    golden-sections the squared disparity over alpha and refits at the
    final bracket midpoint.
    """
    _check_rank(r, g.x.shape[1])
    _, _, evaluate = _prepare_search(g, r)
    result = golden_section(lambda a: evaluate(a)[1].fairness, None, config)
    u, m = evaluate(result.alpha)
    return FairFitResult(
        method=METHOD_UFPCA,
        alpha=result.alpha,
        u=u,
        metrics=m,
        iterations=result.iterations,
    )


def c_fpca(g: GroupedData, r: int, config: SearchConfig | None = None) -> FairFitResult:
    """Constrained fair fit: like u_fpca, but neither group's error may
    exceed the harmed group's plain-PCA error.

    The bracket update alone cannot certify the final midpoint, so if the
    midpoint breaks the budget (or is less fair than plain PCA), the fit
    falls back to the best feasible alpha among those evaluated; alpha = 1
    reproduces plain PCA exactly and is always feasible.
    """
    _check_rank(r, g.x.shape[1])
    pca, roles, evaluate = _prepare_search(g, r)
    budget = roles.budget

    def feasible(alpha: float) -> bool:
        m = evaluate(alpha)[1]
        return m.err_a <= budget and m.err_b <= budget

    result = golden_section(lambda a: evaluate(a)[1].fairness, feasible, config)
    alpha_star = result.alpha
    u, m = evaluate(alpha_star)
    if (
        m.err_a > budget + _BUDGET_SLACK
        or m.err_b > budget + _BUDGET_SLACK
        or m.fairness > pca.metrics.fairness
    ):
        candidates = [
            (metrics.fairness, -alpha, alpha)
            for alpha, (_, metrics) in evaluate.cache.items()
            if metrics.err_a <= budget and metrics.err_b <= budget
        ]
        _, _, alpha_star = min(candidates)
        u, m = evaluate(alpha_star)
    return FairFitResult(
        method=METHOD_CFPCA,
        alpha=alpha_star,
        u=u,
        metrics=m,
        iterations=result.iterations,
        budget=budget,
    )
