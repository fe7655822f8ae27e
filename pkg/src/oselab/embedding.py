"""Did the sketch preserve the subspace? Pass/fail oracle, witnesses, and
Monte Carlo failure-rate estimation.

A sketch succeeds on a subspace with orthonormal basis U at distortion eps
iff every singular value of Pi U lies in [1 - eps, 1 + eps]. The failure
estimator draws a fresh (sketch, subspace) pair per trial from per-trial
derived seeds, so trial order and parallel scheduling cannot change the
estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

from .instances import sample_basis_coordinates, sample_basis_subspace, sample_random_subspace
from .linalg import OrthonormalBasis, condition_number, singular_values
from .seeding import derive_seed, generator
from .sketches import SketchMatrix, SketchSpec, apply_sketch, sample_sketch, sketch_columns


@dataclass(frozen=True)
class EmbeddingReport:
    spectrum: np.ndarray        # singular values of Pi U, descending
    sigma_min: float
    sigma_max: float
    kappa: float                # inf when Pi U is rank deficient
    epsilon: float
    passed: bool

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


def _report_from_spectrum(spectrum: np.ndarray, epsilon: float) -> EmbeddingReport:
    sigma_max = float(spectrum[0])
    sigma_min = float(spectrum[-1])
    passed = (sigma_min >= 1.0 - epsilon) and (sigma_max <= 1.0 + epsilon)
    return EmbeddingReport(
        spectrum=spectrum,
        sigma_min=sigma_min,
        sigma_max=sigma_max,
        kappa=condition_number(spectrum),
        epsilon=float(epsilon),
        passed=passed,
    )


def embedding_check(p: SketchMatrix, u: OrthonormalBasis, epsilon: float) -> EmbeddingReport:
    """Two-sided singular-value test on Pi U at distortion epsilon."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return _report_from_spectrum(singular_values(apply_sketch(p, u.matrix)), epsilon)


@dataclass(frozen=True)
class WitnessPair:
    z1: np.ndarray   # unit vector maximizing ||Pi U z||
    z2: np.ndarray   # unit vector minimizing ||Pi U z||
    ratio: float     # ||Pi U z1|| / ||Pi U z2|| = kappa(Pi U)


def witness_pair(p: SketchMatrix, u: OrthonormalBasis) -> WitnessPair:
    """Extremal distortion witnesses: top and bottom right singular vectors of Pi U."""
    su = apply_sketch(p, u.matrix)
    if not np.any(su):
        raise ValueError("sketched basis is the zero matrix; no witness directions exist")
    _, spec, vt = np.linalg.svd(su, full_matrices=False)
    ratio = condition_number(spec)
    return WitnessPair(z1=vt[0], z2=vt[-1], ratio=ratio)


@dataclass(frozen=True)
class FailureEstimate:
    trials: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float
    delta_target: float | None = None


def wilson_interval(failures: int, trials: int, confidence: float = 0.95):
    """Wilson score interval for a binomial proportion."""
    res = binomtest(failures, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(res.low), float(res.high)


def _spectrum_sparse_basis(spec: SketchSpec, d: int, u_seed: int) -> np.ndarray:
    """Spectrum of Pi U for a sparse sketch on a basis-columns instance.

    The instance picks d distinct coordinates, so Pi U is just the matching
    d columns of the sketch; those are generated lazily (bit-identical to the
    full sketch) and the spectrum comes from the exact d x d Gram matrix of
    the sparse columns.
    """
    coords = sample_basis_coordinates(spec.n, d, u_seed)
    rows, vals = sketch_columns(spec, coords)
    gram = _sparse_gram(rows, vals)
    eig = np.linalg.eigvalsh(gram)[::-1]
    return np.sqrt(np.clip(eig, 0.0, None))


def _sparse_gram(rows: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Exact Gram matrix of sparse columns given as (s, d) row/value arrays."""
    s, d = rows.shape
    gram = np.zeros((d, d))
    for a in range(s):
        for b in range(s):
            match = rows[a][:, None] == rows[b][None, :]
            gram += np.where(match, vals[a][:, None] * vals[b][None, :], 0.0)
    return gram


def _spectrum_for_trial(spec: SketchSpec, family: str, d: int, trial_seed: int, literal: bool) -> np.ndarray:
    """Singular spectrum of one sampled Pi U.

    Fast paths (used unless `literal`):
      * gaussian sketch on a random-rotation instance: Pi U is exactly an
        i.i.d. N(0, 1/m) matrix of shape m x d by rotational invariance, so
        it is sampled directly instead of materializing Pi and U;
      * sparse sketch on a basis-columns instance: only the d selected
        sketch columns are generated (bit-identical to the full sketch).
    Both shortcuts leave the spectrum's distribution unchanged; tests compare
    them against the literal path.
    """
    pi_seed = derive_seed(trial_seed, 0)
    u_seed = derive_seed(trial_seed, 1)
    if not literal:
        if spec.kind == "gaussian" and family == "random-rotation":
            g = generator(pi_seed).standard_normal((spec.m, d)) / math.sqrt(spec.m)
            eig = np.linalg.eigvalsh(g.T @ g)[::-1]
            return np.sqrt(np.clip(eig, 0.0, None))
        if spec.kind == "sparse" and family == "basis-columns":
            spec = SketchSpec(spec.n, spec.m, spec.kind, spec.s, pi_seed)
            return _spectrum_sparse_basis(spec, d, u_seed)
    pi = sample_sketch(SketchSpec(spec.n, spec.m, spec.kind, spec.s, pi_seed))
    if family == "random-rotation":
        inst = sample_random_subspace(spec.n, d, u_seed)
    elif family == "basis-columns":
        inst = sample_basis_subspace(spec.n, d, u_seed, allow_small_n=True)
    else:
        raise ValueError(f"unknown instance family {family!r}")
    return singular_values(apply_sketch(pi, inst.basis.matrix))


def failure_probability(
    spec: SketchSpec,
    instance_dist: str,
    d: int,
    epsilon: float,
    trials: int,
    master_seed: int,
    literal: bool = False,
) -> FailureEstimate:
    """Monte Carlo estimate of Pr[(Pi, U) fails the embedding test].

    A fresh sketch and instance are drawn per trial from seeds derived off
    (master_seed, trial index). `literal=True` forces full materialization of
    every sketch and basis (slow; used to cross-check the documented fast
    paths).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if instance_dist not in ("random-rotation", "basis-columns"):
        raise ValueError(f"unknown instance family {instance_dist!r}")
    literal = literal or spec.kind == "identity"
    failures = 0
    for i in range(trials):
        spectrum = _spectrum_for_trial(spec, instance_dist, d, derive_seed(master_seed, i), literal)
        if not _passes(spectrum, epsilon):
            failures += 1
    low, high = wilson_interval(failures, trials)
    return FailureEstimate(trials, failures, failures / trials, low, high)


def _passes(spectrum: np.ndarray, epsilon: float) -> bool:
    return spectrum[-1] >= 1.0 - epsilon and spectrum[0] <= 1.0 + epsilon
