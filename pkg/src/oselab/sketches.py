"""Sketching matrices: dense Gaussian, column-sparse sign matrices, identity.

Sparse sketches put exactly `s` nonzeros in each column: `s` distinct rows
chosen uniformly without replacement, values independent uniform +-1/sqrt(s),
so every column has unit norm. Gaussian sketches have i.i.d. N(0, 1/m)
entries so that E||Pi x||^2 = ||x||^2.

Generation is keyed per column: column j of a sketch with seed `t` depends
only on hash(t, j). Columns can therefore be produced lazily or in parallel
in any order and come out bit-identical; `sketch_columns` exposes that path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse
from scipy.special import ndtri

from .seeding import GAMMA, mix64, mix64_array, stream_u64, u64_to_unit

KINDS = ("gaussian", "sparse", "identity")


@dataclass(frozen=True)
class SketchSpec:
    """Shape, family, and seed of a sketching matrix distribution."""

    n: int                 # ambient dimension (columns)
    m: int                 # sketch rows
    kind: str              # gaussian | sparse | identity
    s: int | None = None   # nonzeros per column, sparse only
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sketch kind {self.kind!r}")
        if not (1 <= self.m <= self.n):
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.kind == "sparse":
            if self.s is None or not (1 <= self.s <= self.m):
                raise ValueError(f"sparse sketch needs 1 <= s <= m, got s={self.s}")
        elif self.s is not None:
            raise ValueError(f"s is only meaningful for sparse sketches, got s={self.s}")
        if self.kind == "identity" and self.m != self.n:
            raise ValueError("identity sketch requires m = n")


@dataclass(frozen=True)
class SketchMatrix:
    """A sampled sketch: dense payload, or per-column (row, value) pairs.

    For sparse sketches, column j holds entries `vals[:, j]` at row indices
    `rows[:, j]`. The identity sketch stores no payload.
    """

    spec: SketchSpec
    dense: np.ndarray | None = None
    rows: np.ndarray | None = None   # (s, n) int64
    vals: np.ndarray | None = None   # (s, n) float64

    def toarray(self) -> np.ndarray:
        """Materialize the full m x n matrix."""
        spec = self.spec
        if spec.kind == "identity":
            return np.eye(spec.n)
        if spec.kind == "gaussian":
            return self.dense.copy()
        out = np.zeros((spec.m, spec.n))
        cols = np.broadcast_to(np.arange(spec.n), self.rows.shape)
        out[self.rows, cols] = self.vals
        return out


def _seeds_for_columns(seed: int, cols: np.ndarray) -> np.ndarray:
    """Per-column stream seeds hash(seed, j) for the given column indices."""
    h = np.uint64(mix64(seed))
    idx = mix64_array(cols.astype(np.uint64))
    with np.errstate(over="ignore"):
        return mix64_array(h + np.uint64(GAMMA) + idx)


def _sparse_payload(seeds: np.ndarray, m: int, s: int):
    """(rows, vals) arrays for one seed per column.

    Rows are a uniform s-subset of [0, m) per column (Floyd's sampling
    algorithm, vectorized across columns); values are independent signs
    scaled by 1/sqrt(s).
    """
    count = seeds.size
    rows = np.empty((s, count), dtype=np.int64)
    for k in range(s):
        j = m - s + k
        u = stream_u64(seeds, 2 * k)
        t = (u % np.uint64(j + 1)).astype(np.int64)
        if k:
            taken = (rows[:k, :] == t).any(axis=0)
            t[taken] = j
        rows[k, :] = t
    sign_bits = stream_u64(seeds[None, :], 2 * np.arange(s, dtype=np.uint64)[:, None] + np.uint64(1))
    vals = np.where((sign_bits >> np.uint64(63)).astype(bool), 1.0, -1.0) / np.sqrt(s)
    return rows, vals


def sample_sparse_sketch(spec: SketchSpec) -> SketchMatrix:
    """Draw a column-sparse sign sketch for `spec` (kind must be sparse)."""
    if spec.kind != "sparse":
        raise ValueError(f"spec kind is {spec.kind!r}, expected sparse")
    seeds = _seeds_for_columns(spec.seed, np.arange(spec.n, dtype=np.int64))
    rows, vals = _sparse_payload(seeds, spec.m, spec.s)
    return SketchMatrix(spec, rows=rows, vals=vals)


def sketch_columns(spec: SketchSpec, cols):
    """(rows, vals) of the selected sparse-sketch columns, without building the rest.

    Bit-identical to slicing the output of sample_sparse_sketch at `cols`.
    """
    if spec.kind != "sparse":
        raise ValueError("lazy column access is only supported for sparse sketches")
    cols = np.asarray(cols, dtype=np.int64)
    return _sparse_payload(_seeds_for_columns(spec.seed, cols), spec.m, spec.s)


def sample_gaussian_sketch(spec: SketchSpec) -> SketchMatrix:
    """Draw a dense Gaussian sketch with i.i.d. N(0, 1/m) entries.

    Entries come from per-column uniform streams pushed through the inverse
    normal CDF, keeping the per-column generation contract of the sparse
    family.
    """
    if spec.kind != "gaussian":
        raise ValueError(f"spec kind is {spec.kind!r}, expected gaussian")
    seeds = _seeds_for_columns(spec.seed, np.arange(spec.n, dtype=np.int64))
    u = stream_u64(seeds[None, :], np.arange(spec.m, dtype=np.uint64)[:, None])
    entries = ndtri(u64_to_unit(u)) / np.sqrt(spec.m)
    return SketchMatrix(spec, dense=entries)


def identity_sketch(n: int) -> SketchMatrix:
    """The n x n identity as a (deterministic) sketch."""
    return SketchMatrix(SketchSpec(n=n, m=n, kind="identity"))


def sample_sketch(spec: SketchSpec) -> SketchMatrix:
    """Dispatch on spec.kind."""
    if spec.kind == "gaussian":
        return sample_gaussian_sketch(spec)
    if spec.kind == "sparse":
        return sample_sparse_sketch(spec)
    return SketchMatrix(spec)


def apply_sketch(p: SketchMatrix, a) -> np.ndarray:
    """Exact product Pi @ a.

    The sparse path multiplies through a CSC view and touches only the
    s-per-column nonzeros.
    """
    a = np.asarray(a, dtype=np.float64)
    vec = a.ndim == 1
    if vec:
        a = a[:, None]
    if a.shape[0] != p.spec.n:
        raise ValueError(f"sketch has {p.spec.n} columns, operand has {a.shape[0]} rows")
    if p.spec.kind == "identity":
        out = a.copy()
    elif p.spec.kind == "gaussian":
        out = p.dense @ a
    else:
        s, n = p.rows.shape
        csc = scipy.sparse.csc_matrix(
            (p.vals.T.ravel(), p.rows.T.ravel(), np.arange(0, s * (n + 1), s)),
            shape=(p.spec.m, n),
        )
        out = np.asarray(csc @ a)
    return out[:, 0] if vec else out
