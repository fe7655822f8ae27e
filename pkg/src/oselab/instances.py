"""Hard instance distributions over subspaces, plus the concentration probes
used to sanity-check them.

Two families: `random-rotation` draws d i.i.d. Gaussian columns and
orthonormalizes them, giving a uniformly random d-dimensional subspace;
`basis-columns` picks d distinct coordinates and uses the corresponding
standard basis vectors (signs are left to the sketch).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import DegenerateMatrixError, OrthonormalBasis, gram_schmidt
from .seeding import derive_seed, generator

FAMILIES = ("random-rotation", "basis-columns")

_RESAMPLE_CAP = 1000


@dataclass(frozen=True)
class SubspaceInstance:
    basis: OrthonormalBasis
    family: str
    seed: int
    # basis-columns only: the selected coordinates, in draw order.
    coordinates: tuple[int, ...] | None = None


def _raw_gaussian_columns(n: int, d: int, seed: int, attempt: int = 0) -> np.ndarray:
    return generator(seed, attempt).standard_normal((n, d))


def sample_random_subspace(n: int, d: int, seed: int) -> SubspaceInstance:
    """Orthonormal basis of a uniformly random d-dimensional subspace of R^n.

    Columns start as i.i.d. Gaussian vectors and go through Gram-Schmidt, so
    the first basis column is the first draw normalized. Degenerate draws are
    resampled from a fresh sub-stream (vanishingly rare for d <= n).
    """
    if not (1 <= d <= n):
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    for attempt in range(8):
        try:
            basis = gram_schmidt(_raw_gaussian_columns(n, d, seed, attempt))
            return SubspaceInstance(basis, "random-rotation", seed)
        except DegenerateMatrixError:
            continue
    raise DegenerateMatrixError(f"could not draw independent columns for n={n}, d={d}")


def sample_basis_coordinates(n: int, d: int, seed: int) -> np.ndarray:
    """d distinct uniform coordinates; the whole tuple is redrawn on duplicates."""
    rng = generator(seed)
    for _ in range(_RESAMPLE_CAP):
        coords = rng.integers(0, n, size=d)
        if np.unique(coords).size == d:
            return coords
    raise RuntimeError(f"no distinct coordinate tuple after {_RESAMPLE_CAP} draws (n={n}, d={d})")


def sample_basis_subspace(n: int, d: int, seed: int, allow_small_n: bool = False) -> SubspaceInstance:
    """Subspace spanned by d distinct standard basis vectors, coordinates uniform.

    The sampling regime of interest has n >= 100 d^2 (duplicate probability
    at most 1/100 before rejection); smaller n raises unless
    `allow_small_n` is set, in which case a warning is emitted.
    """
    if d > n:
        raise ValueError(f"cannot pick {d} distinct coordinates out of {n}")
    if n < 100 * d * d:
        if not allow_small_n:
            raise ValueError(
                f"n={n} below the sampling regime n >= 100*d^2 = {100 * d * d}; "
                "pass allow_small_n=True to override"
            )
        warnings.warn(f"n={n} is below the n >= 100*d^2 regime", stacklevel=2)
    coords = sample_basis_coordinates(n, d, seed)
    u = np.zeros((n, d))
    u[coords, np.arange(d)] = 1.0
    return SubspaceInstance(OrthonormalBasis(u), "basis-columns", seed, tuple(int(c) for c in coords))


def sample_instance(family: str, n: int, d: int, seed: int, allow_small_n: bool = False) -> SubspaceInstance:
    if family == "random-rotation":
        return sample_random_subspace(n, d, seed)
    if family == "basis-columns":
        return sample_basis_subspace(n, d, seed, allow_small_n=allow_small_n)
    raise ValueError(f"unknown instance family {family!r}")


@dataclass(frozen=True)
class ProjectionTrial:
    """One draw of ||first m coordinates of D u||^2 for u uniform on the sphere."""

    n: int
    m: int
    D_diagonal: np.ndarray
    observed: float
    predicted_center: float   # mean of the first m squared diagonal entries, times m/n
    deviation_scale: float    # max squared diagonal entry, times m/n


def projection_norm_trial(n: int, m: int, D_diagonal, seed: int) -> ProjectionTrial:
    """Sample u uniform on S^{n-1} and project D u onto the first m coordinates.

    The projection subspace is fixed to the leading coordinates; by rotation
    invariance of u this loses no generality and keeps the trace-based center
    exact: E||(D u)[:m]||^2 ~ (sum of the first m D_ii^2) / n.
    """
    dd = np.asarray(D_diagonal, dtype=np.float64)
    if dd.shape != (n,):
        raise ValueError(f"diagonal must have length n={n}, got {dd.shape}")
    if not np.all(np.isfinite(dd)):
        raise ValueError("diagonal contains non-finite entries")
    if not (1 <= m <= n):
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    g = generator(seed).standard_normal(n)
    u = g / np.linalg.norm(g)
    observed = float(np.sum((dd[:m] * u[:m]) ** 2))
    center = float(np.sum(dd[:m] ** 2) / n)
    scale = float(np.max(dd**2) * m / n)
    return ProjectionTrial(n, m, dd, observed, center, scale)


@dataclass(frozen=True)
class ProjectionStudy:
    n: int
    m: int
    trials: int
    empirical_mean: float
    sample_std: float
    predicted_center: float
    # fraction of trials landing outside (center +- eps * deviation_scale) per eps
    tail_fractions: dict[float, float]


def projection_norm_study(n, m, D_diagonal, trials, seed, eps_grid=(0.25, 0.5, 1.0)) -> ProjectionStudy:
    """Monte Carlo over projection_norm_trial with per-trial derived seeds."""
    observed = np.empty(trials)
    first = projection_norm_trial(n, m, D_diagonal, derive_seed(seed, 0))
    observed[0] = first.observed
    for i in range(1, trials):
        observed[i] = projection_norm_trial(n, m, D_diagonal, derive_seed(seed, i)).observed
    center = first.predicted_center
    scale = first.deviation_scale
    tails = {
        float(eps): float(np.mean(np.abs(observed - center) > eps * scale))
        for eps in eps_grid
    }
    return ProjectionStudy(
        n, m, trials, float(observed.mean()), float(observed.std(ddof=1)), center, tails
    )


@dataclass(frozen=True)
class FrobeniusConcentration:
    n: int
    d: int
    m: int
    trials: int
    empirical_mean: float
    expected_mean: float          # (d-1) * m / n
    tail_fractions: dict[float, float]


def frobenius_concentration_check(
    n: int, d: int, m: int, trials: int, seed: int, eps_grid=(0.25, 0.5, 1.0)
) -> FrobeniusConcentration:
    """Mass of the leading m rows of the first d-1 columns of a random basis.

    Each orthonormal column puts mass m/n on the leading m coordinates in
    expectation, so the statistic concentrates around (d-1) * m / n; the
    report carries the empirical mean and the tail fraction outside
    (1 +- eps) * (d-1) * m / n for each eps in the grid.
    """
    if not (1 <= d <= m <= n):
        raise ValueError(f"need d <= m <= n, got d={d}, m={m}, n={n}")
    stats = np.empty(trials)
    for i in range(trials):
        inst = sample_random_subspace(n, d, derive_seed(seed, i))
        block = inst.basis.matrix[:m, : d - 1]
        stats[i] = np.sum(block**2)
    expected = (d - 1) * m / n
    if d == 1:
        tails = {float(eps): 0.0 for eps in eps_grid}
    else:
        tails = {
            float(eps): float(np.mean(np.abs(stats - expected) > eps * expected))
            for eps in eps_grid
        }
    return FrobeniusConcentration(n, d, m, trials, float(stats.mean()), expected, tails)
