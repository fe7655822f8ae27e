"""Dense linear algebra core: spectra, orthonormalization, projections.

Matrices are plain float64 numpy arrays in row-major order; a singular
spectrum is a 1-d array sorted descending. All functions are pure and safe
for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Module-wide tolerances.
REL_TOL = 1e-8        # relative slack for spectrum comparisons
ORTHO_TOL = 1e-10     # max-abs orthonormality defect of a basis
IDEMPOTENT_TOL = 1e-12
RANK_CUTOFF = 1e-10   # sigma below RANK_CUTOFF * sigma_max counts as zero
GS_INDEPENDENCE_CUTOFF = 1e-8


class DegenerateMatrixError(ValueError):
    """Input columns are numerically dependent (or zero) where independence is required."""


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def singular_values(a) -> np.ndarray:
    """All min(rows, cols) singular values of `a`, sorted descending."""
    return np.linalg.svd(_as_matrix(a), compute_uv=False)


def condition_number(spectrum) -> float:
    """Largest over smallest singular value; inf when the smallest is (numerically) zero."""
    s = np.asarray(spectrum, dtype=np.float64)
    if s.size == 0:
        raise ValueError("empty spectrum")
    top = float(s[0])
    bottom = float(s[-1])
    if top == 0.0 or bottom <= RANK_CUTOFF * top:
        return math.inf
    return top / bottom


def orthonormality_defect(q: np.ndarray) -> float:
    """max |Q^T Q - I|."""
    q = np.asarray(q, dtype=np.float64)
    gram = q.T @ q
    return float(np.abs(gram - np.eye(q.shape[1])).max())


@dataclass(frozen=True)
class OrthonormalBasis:
    """An n x d matrix whose columns are orthonormal within `orthogonality_tolerance`."""

    matrix: np.ndarray
    orthogonality_tolerance: float = ORTHO_TOL

    def __post_init__(self):
        q = _as_matrix(self.matrix, "basis")
        object.__setattr__(self, "matrix", q)
        if q.shape[1] > q.shape[0]:
            raise ValueError(f"basis must have d <= n, got shape {q.shape}")
        defect = orthonormality_defect(q)
        if defect > self.orthogonality_tolerance:
            raise ValueError(f"columns are not orthonormal: defect {defect:.3e}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]


def gram_schmidt(v) -> OrthonormalBasis:
    """Orthonormalize the columns of `v` (span and column order preserved).

    Modified Gram-Schmidt with one full re-orthogonalization pass; the first
    output column is the first input column normalized. Columns must be
    numerically independent (smallest singular value above
    GS_INDEPENDENCE_CUTOFF relative to the largest), otherwise
    DegenerateMatrixError is raised so the caller can resample.
    """
    v = _as_matrix(v)
    n, d = v.shape
    if d > n:
        raise ValueError(f"need d <= n, got shape {v.shape}")
    spec = singular_values(v)
    if spec[-1] <= GS_INDEPENDENCE_CUTOFF * spec[0]:
        raise DegenerateMatrixError(
            f"columns nearly dependent: sigma_min/sigma_max = {spec[-1] / spec[0]:.3e}"
        )
    q = v.copy()
    for _ in range(2):
        for j in range(d):
            col = q[:, j]
            for i in range(j):
                col -= (q[:, i] @ col) * q[:, i]
            norm = np.linalg.norm(col)
            if norm == 0.0:
                raise DegenerateMatrixError("column collapsed to zero during orthogonalization")
            q[:, j] = col / norm
    return OrthonormalBasis(q)


def project_onto(basis: OrthonormalBasis, x) -> np.ndarray:
    """Orthogonal projection of `x` onto the span of the basis columns."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != basis.n:
        raise ValueError(f"vector has length {x.shape[0]}, basis lives in R^{basis.n}")
    q = basis.matrix
    return q @ (q.T @ x)


@dataclass(frozen=True)
class InterlacingResult:
    interlaces: bool
    original: np.ndarray   # descending, n values
    augmented: np.ndarray  # descending, n+1 values


def interlacing_check(a, new_row, rel_slack: float = REL_TOL) -> InterlacingResult:
    """Whether appending `new_row` to the wide matrix `a` nests the spectra.

    With both spectra sorted descending the required chain is
    beta[0] >= sigma[0] >= beta[1] >= ... >= sigma[n-1] >= beta[n],
    checked with slack `rel_slack` relative to the largest singular value.
    """
    a = _as_matrix(a)
    row = np.asarray(new_row, dtype=np.float64)
    n, m = a.shape
    if row.shape != (m,):
        raise ValueError(f"new row must have length {m}, got {row.shape}")
    if n + 1 > m:
        raise ValueError(f"need n+1 <= m for a full augmented spectrum, got n={n}, m={m}")
    sigma = singular_values(a)
    beta = singular_values(np.vstack([a, row]))
    slack = rel_slack * float(beta[0]) if beta[0] > 0 else 0.0
    ok = bool(
        np.all(sigma <= beta[:-1] + slack) and np.all(sigma >= beta[1:] - slack)
    )
    return InterlacingResult(ok, sigma, beta)
