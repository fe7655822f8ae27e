"""Least squares, exact and sketched, with error-ratio certification.

The exact solver goes through the SVD pseudoinverse. The sketched solver
solves the compressed problem argmin ||Pi A x - Pi b|| and reports its
residual against the original data, which is the quantity the approximation
guarantee speaks about.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import RANK_CUTOFF, DegenerateMatrixError
from .sketches import SketchMatrix, SketchSpec, apply_sketch


class SketchFailureError(RuntimeError):
    """The sketched design matrix lost rank; the trial failed, not the caller."""


@dataclass(frozen=True)
class RegressionInstance:
    a: np.ndarray      # n x d design
    b: np.ndarray      # n targets
    seed: int = 0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a.ndim != 2 or a.shape[0] < a.shape[1]:
            raise ValueError(f"design must be n x d with n >= d, got {a.shape}")
        if b.shape != (a.shape[0],):
            raise ValueError(f"target length {b.shape} does not match {a.shape[0]} rows")
        if not np.any(a):
            raise ValueError("design matrix is zero")


@dataclass(frozen=True)
class RegressionResult:
    x: np.ndarray
    residual_norm: float
    method: str                          # exact | sketched
    instance: RegressionInstance
    sketch_spec: SketchSpec | None = None


def _svd_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] < a.shape[1]:
        raise DegenerateMatrixError(
            f"system with shape {a.shape} cannot have full column rank"
        )
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s[0] == 0.0 or s[-1] <= RANK_CUTOFF * s[0]:
        raise DegenerateMatrixError(
            f"rank-deficient system: sigma_min/sigma_max = {s[-1] / s[0]:.3e}"
        )
    return vt.T @ ((u.T @ b) / s)


def exact_least_squares(inst: RegressionInstance) -> RegressionResult:
    """Minimizer of ||A x - b|| via the SVD pseudoinverse."""
    x = _svd_solve(inst.a, inst.b)
    residual = float(np.linalg.norm(inst.a @ x - inst.b))
    return RegressionResult(x, residual, "exact", inst)


def sketch_and_solve(inst: RegressionInstance, p: SketchMatrix) -> RegressionResult:
    """Solve the sketched problem; residual is measured on the original data."""
    sa = apply_sketch(p, inst.a)
    sb = apply_sketch(p, inst.b)
    try:
        x = _svd_solve(sa, sb)
    except DegenerateMatrixError as exc:
        raise SketchFailureError(f"sketched design lost rank: {exc}") from exc
    residual = float(np.linalg.norm(inst.a @ x - inst.b))
    return RegressionResult(x, residual, "sketched", inst, p.spec)


def error_ratio(exact: RegressionResult, sketched: RegressionResult) -> float:
    """sketched residual / exact residual; 1 when both residuals vanish."""
    if exact.instance is not sketched.instance and not (
        np.array_equal(exact.instance.a, sketched.instance.a)
        and np.array_equal(exact.instance.b, sketched.instance.b)
    ):
        raise ValueError("results come from different instances")
    if exact.residual_norm <= 1e-12 and sketched.residual_norm <= 1e-12:
        return 1.0
    return sketched.residual_norm / exact.residual_norm


def certificate_bound(epsilon: float) -> float:
    """Upper bound on the error ratio when the sketch embeds span(A, b) at eps."""
    return (1.0 + epsilon) / (1.0 - epsilon)
