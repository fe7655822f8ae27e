"""Signed-row collision combinatorics for sketched column sets.

Every column of a sketched basis gets a profile: the row index and signed
value of its maximum-magnitude coordinate. Columns sharing (row, sign) form
a class; the collision count C is the number of same-class pairs. The
extraction helpers turn class sizes into disjoint pairs and groups, and the
stress helpers measure how badly a colliding group distorts the unit
combination of its columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sketches import SketchMatrix


class DegenerateColumnError(ValueError):
    """A zero column has no maximum-magnitude coordinate."""


@dataclass(frozen=True)
class ColumnProfile:
    """Max-magnitude coordinate of one column (ties break to the lowest row)."""

    index: int          # column index
    r: int              # row of the max-|.| coordinate (0-based)
    z: float            # signed value at that row
    v: np.ndarray       # the column with row r removed, length m-1

    @property
    def class_key(self) -> tuple[int, int]:
        return (self.r, 1 if self.z > 0 else -1)


def max_coordinate_profile(su) -> list[ColumnProfile]:
    """Profiles of every column of the (dense) sketched matrix `su`."""
    su = np.asarray(su, dtype=np.float64)
    profiles = []
    for i in range(su.shape[1]):
        col = su[:, i]
        r = int(np.argmax(np.abs(col)))
        z = float(col[r])
        if z == 0.0:
            raise DegenerateColumnError(f"column {i} is zero")
        profiles.append(ColumnProfile(i, r, z, np.delete(col, r)))
    return profiles


def signed_class_fractions(p: SketchMatrix) -> np.ndarray:
    """Fractions of sketch columns per signed row class, a vector of length 2m.

    Class 2r holds columns whose max-magnitude entry sits on row r with
    positive sign, class 2r+1 the negative ones. Sparse columns have all
    entries equal in magnitude, so the tie-break picks the lowest occupied
    row, matching max_coordinate_profile on the densified sketch.
    """
    spec = p.spec
    if spec.kind == "sparse":
        lead = np.argmin(p.rows, axis=0)
        cols = np.arange(spec.n)
        r = p.rows[lead, cols]
        z = p.vals[lead, cols]
    elif spec.kind == "gaussian":
        r = np.argmax(np.abs(p.dense), axis=0)
        z = p.dense[r, np.arange(spec.n)]
    else:
        r = np.arange(spec.n)
        z = np.ones(spec.n)
    classes = 2 * r + (z < 0)
    counts = np.bincount(classes, minlength=2 * spec.m)
    return counts / spec.n


@dataclass(frozen=True)
class CollisionStats:
    class_sizes: np.ndarray        # length 2m, sizes d_1..d_{2m}
    C: int                         # same-class pair count
    p: np.ndarray                  # length 2m, class fractions of the full sketch
    expected_C: float              # d(d-1)/2 * sum p_i^2
    assignments: np.ndarray        # per-column class index, length d

    @property
    def d(self) -> int:
        return int(self.class_sizes.sum())


def collision_stats(profiles: list[ColumnProfile], p_from_sketch) -> CollisionStats:
    """Class sizes, collision count, and its expectation under the sketch's p."""
    if not profiles:
        raise ValueError("no profiles given")
    p = np.asarray(p_from_sketch, dtype=np.float64)
    assignments = np.array([2 * pr.r + (pr.z < 0) for pr in profiles])
    sizes = np.bincount(assignments, minlength=p.size)
    c = int((sizes * (sizes - 1) // 2).sum())
    d = len(profiles)
    expected = d * (d - 1) / 2 * float(np.sum(p**2))
    return CollisionStats(sizes, c, p, expected, assignments)


def collision_count_by_pairs(profiles: list[ColumnProfile]) -> int:
    """C by brute-force pair enumeration (oracle for the class-size formula)."""
    c = 0
    for i in range(len(profiles)):
        for j in range(i + 1, len(profiles)):
            c += profiles[i].class_key == profiles[j].class_key
    return c


@dataclass(frozen=True)
class Group:
    members: tuple[int, ...]
    label: tuple            # signed row class (r, sign) for columns, bin index for balls


@dataclass(frozen=True)
class GroupSet:
    groups: tuple[Group, ...]
    group_size: int

    def __len__(self) -> int:
        return len(self.groups)


def _members_by_class(stats: CollisionStats):
    order = np.argsort(stats.assignments, kind="stable")
    classes = stats.assignments[order]
    out = {}
    for pos, cls in zip(order, classes):
        out.setdefault(int(cls), []).append(int(pos))
    return out


def extract_disjoint_pairs(stats: CollisionStats) -> list[tuple[int, int]]:
    """Greedy within-class pairing: floor(d_i / 2) disjoint pairs per class.

    The output size is at least sum over classes of (d_i - 1)/2 and at least
    sqrt(C)/2.
    """
    pairs = []
    for _, members in sorted(_members_by_class(stats).items()):
        for k in range(len(members) // 2):
            pairs.append((members[2 * k], members[2 * k + 1]))
    return pairs


def extract_groups(stats: CollisionStats, t: int) -> GroupSet:
    """floor(d_i / t) disjoint groups of exactly t same-class columns per class."""
    if t < 2:
        raise ValueError(f"group size must be at least 2, got {t}")
    groups = []
    for cls, members in sorted(_members_by_class(stats).items()):
        label = (cls // 2, 1 if cls % 2 == 0 else -1)
        for k in range(len(members) // t):
            groups.append(Group(tuple(members[k * t : (k + 1) * t]), label))
    return GroupSet(tuple(groups), t)


@dataclass(frozen=True)
class StressNorm:
    direct: float      # ||SU . (1/sqrt(t)) sum_i e_i||^2
    expanded: float    # mean ||u_i||^2 + (2/t) sum_{i<j} <u_i, u_j>


def stress_vector_norm(su, members) -> StressNorm:
    """Squared norm of the sketched unit combination over a group of columns.

    Computed two ways: directly, and through the algebraic expansion in
    column norms and pairwise inner products; the two agree to roundoff.
    """
    su = np.asarray(su, dtype=np.float64)
    members = tuple(members)
    t = len(members)
    if t < 2:
        raise ValueError(f"need a group of at least 2 columns, got {t}")
    block = su[:, members]
    direct = float(np.sum((block.sum(axis=1) / math.sqrt(t)) ** 2))
    gram = block.T @ block
    expanded = float(np.trace(gram) / t + (gram.sum() - np.trace(gram)) / t)
    return StressNorm(direct, expanded)


@dataclass(frozen=True)
class InnerProductReport:
    samples: int
    mean: float
    stderr: float
    delta_grid: tuple[float, ...]
    tail_fractions: tuple[float, ...]   # empirical Pr(<u,v> <= -delta)
    tail_bounds: tuple[float, ...]      # 1 / (1 + delta)
    mean_flag: bool                     # mean < -4 stderr
    tail_flags: tuple[bool, ...]        # tail exceeds bound by > 4 stderr
    flagged: bool


def inner_product_lemma_check(pairs, delta_grid=(0.1, 0.25, 0.5, 0.75)) -> InnerProductReport:
    """Check that paired samples of norm-at-most-1 vectors are not negatively
    correlated beyond statistical noise.

    `pairs` is a sequence of (u, v) vector pairs drawn i.i.d. from one pair
    distribution. Reports the empirical mean of <u, v> and, per delta in the
    grid, the empirical tail Pr(<u,v> <= -delta) against the 1/(1+delta)
    bound; flags only deviations beyond 4 standard errors.
    """
    dots = []
    for u, v in pairs:
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        for w in (u, v):
            norm = np.linalg.norm(w)
            if norm > 1.0 + 1e-12:
                raise ValueError(f"vector norm {norm} exceeds 1")
        dots.append(float(u @ v))
    x = np.asarray(dots)
    n = x.size
    if n == 0:
        raise ValueError("no sample pairs given")
    mean = float(x.mean())
    stderr = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    fractions, bounds, flags = [], [], []
    for delta in delta_grid:
        frac = float(np.mean(x <= -delta))
        bound = 1.0 / (1.0 + delta)
        tail_se = math.sqrt(max(frac * (1 - frac), 1.0 / n) / n)
        fractions.append(frac)
        bounds.append(bound)
        flags.append(frac > bound + 4 * tail_se)
    mean_flag = mean < -4 * stderr
    return InnerProductReport(
        samples=n,
        mean=mean,
        stderr=stderr,
        delta_grid=tuple(float(d) for d in delta_grid),
        tail_fractions=tuple(fractions),
        tail_bounds=tuple(bounds),
        mean_flag=mean_flag,
        tail_flags=tuple(flags),
        flagged=mean_flag or any(flags),
    )
