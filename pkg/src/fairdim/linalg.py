"""Dense real-matrix helpers and a cyclic-Jacobi symmetric eigensolver.

Matrices are plain 2-D float64 numpy arrays. Every public operation
validates its inputs (shape, finiteness, symmetry where required) so that
bad data fails loudly at the boundary instead of corrupting results
downstream. All functions are pure and deterministic: identical input
bytes give identical output bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LinalgError",
    "EigenPairs",
    "as_matrix",
    "matmul",
    "frobenius_norm_sq",
    "scaled_gram",
    "sym_eig_top_r",
]

# Convergence / validation tolerances for the eigensolver.
_OFFDIAG_TOL = 1e-12     # stop when off-diagonal norm <= tol * ||C||_F
_MAX_SWEEPS = 100
_SYMMETRY_RTOL = 1e-9    # max allowed |C - C^T| relative to ||C||_F
_ORTHO_TOL = 1e-9        # eigenvector orthonormality check


class LinalgError(ValueError):
    """A matrix argument violates an operation's contract."""


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a 2-D float64 array, rejecting NaN/Inf entries."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise LinalgError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size and not np.isfinite(arr).all():
        raise LinalgError(f"{name} contains non-finite entries")
    return arr


def matmul(a, b) -> np.ndarray:
    """Matrix product a @ b with explicit dimension checking."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise LinalgError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def frobenius_norm_sq(a) -> float:
    """Sum of squared entries of ``a``."""
    arr = as_matrix(a, "a")
    return float(np.sum(arr * arr))


def scaled_gram(x, divisor: int) -> np.ndarray:
    """Return ``x.T @ x / divisor``, symmetrized to kill round-off skew.

    The result is positive semidefinite up to round-off; symmetrizing via
    (M + M.T)/2 makes it bitwise symmetric so the eigensolver's symmetry
    check never trips on accumulation noise.
    """
    x = as_matrix(x, "x")
    if divisor < 1:
        raise LinalgError(f"divisor must be a positive count, got {divisor}")
    g = (x.T @ x) / float(divisor)
    return (g + g.T) * 0.5


@dataclass(frozen=True)
class EigenPairs:
    """Eigenvalues sorted descending with matched orthonormal eigenvectors.

    ``values[j]`` pairs with column ``vectors[:, j]``.
    """

    values: np.ndarray   # shape (k,), descending
    vectors: np.ndarray  # shape (d, k), orthonormal columns

    def __post_init__(self):
        if self.values.ndim != 1 or self.vectors.ndim != 2:
            raise LinalgError("eigenpairs must hold a 1-D value array and 2-D vectors")
        if self.vectors.shape[1] != self.values.shape[0]:
            raise LinalgError("eigenvalue/eigenvector count mismatch")
        if np.any(np.diff(self.values) > 0):
            raise LinalgError("eigenvalues must be sorted descending")
        gram = self.vectors.T @ self.vectors
        if np.max(np.abs(gram - np.eye(gram.shape[0]))) > _ORTHO_TOL:
            raise LinalgError("eigenvectors are not orthonormal")
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)


def _jacobi_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row pairs (p, q) in a fixed order, each rotation zeroing a[p, q]
    exactly; stops once the off-diagonal Frobenius norm drops below
    _OFFDIAG_TOL * ||a||_F or after _MAX_SWEEPS sweeps. Returns unordered
    eigenvalues and the accumulated rotation matrix (columns = eigenvectors).

    Because the matrix stays exactly symmetric, the rotated column p equals
    the rotated row p outside the pivot block, so each rotation only reads
    two contiguous rows and mirror-writes them; no strided reads. The
    eigenvector accumulator is kept row-major (one eigenvector per row) for
    the same reason and transposed once at the end.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    vt = np.eye(n)  # row j is eigenvector j
    scale = math.sqrt(float(np.sum(a * a)))
    if scale == 0.0 or n == 1:
        return np.diag(a).copy(), vt
    target = _OFFDIAG_TOL * scale
    # Entries at or below `floor` are left alone within a sweep: even if every
    # off-diagonal entry sits at this level, the off-norm stays under target.
    floor = target / n

    for sweep in range(_MAX_SWEEPS):
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        off_norm = math.sqrt(float(np.sum(off * off)))
        if off_norm <= target:
            break
        # early sweeps skip entries far below the current off-diagonal level;
        # they get mopped up once the big ones are gone
        thresh = max(0.2 * off_norm / n, floor) if sweep < 4 else floor
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = 0.5 * (aqq - app) / apq
                if abs(theta) > 1e150:
                    # asymptotic small root; avoids overflow in theta**2
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                co = 1.0 / math.sqrt(t * t + 1.0)
                si = t * co

                rp = a[p, :].copy()
                rq = a[q, :].copy()
                new_p = co * rp - si * rq
                new_q = si * rp + co * rq
                # pivot block closed forms are exact; the rest mirrors by symmetry
                new_p[p] = app - t * apq
                new_p[q] = 0.0
                new_q[p] = 0.0
                new_q[q] = aqq + t * apq
                a[p, :] = new_p
                a[q, :] = new_q
                a[:, p] = new_p
                a[:, q] = new_q

                vp = vt[p, :].copy()
                vq = vt[q, :].copy()
                vt[p, :] = co * vp - si * vq
                vt[q, :] = si * vp + co * vq

    return np.diag(a).copy(), vt.T.copy()


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    # Flip so the largest-magnitude component (lowest index on ties) is positive.
    i = int(np.argmax(np.abs(vec)))
    return -vec if vec[i] < 0.0 else vec


def sym_eig_top_r(c, r: int) -> EigenPairs:
    """The ``r`` eigenpairs of symmetric ``c`` with algebraically largest values.

    Ordering is by signed value, not magnitude: for indefinite matrices the
    trace-maximizing subspace takes the largest signed eigenvalues. Ties are
    broken by the solver's original output order (stable sort), and each
    eigenvector's sign is canonicalized, so output is deterministic.
    """
    c = as_matrix(c, "c")
    n, m = c.shape
    if n != m:
        raise LinalgError(f"matrix must be square, got {n}x{m}")
    scale = math.sqrt(float(np.sum(c * c)))
    if float(np.max(np.abs(c - c.T), initial=0.0)) > _SYMMETRY_RTOL * scale:
        raise LinalgError("matrix is not symmetric within tolerance")
    if not 1 <= r <= n:
        raise LinalgError(f"rank must satisfy 1 <= r <= {n}, got {r}")

    values, vectors = _jacobi_eigh((c + c.T) * 0.5)
    order = np.argsort(-values, kind="stable")[:r]
    top_values = values[order].copy()
    top_vectors = np.column_stack([_canonical_sign(vectors[:, j]) for j in order])
    return EigenPairs(values=top_values, vectors=top_vectors)
