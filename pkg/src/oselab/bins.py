"""Balls and bins, uniform and nonuniform, and the alias-style reduction
between them.

`alias_virtual_bins` converts an arbitrary discrete distribution over m real
bins into m equiprobable virtual bins, each mixing mass from at most two
real bins: step i removes the smallest remaining mass p_j, pairs it with
1/m - p_j taken from the largest remaining mass p_k, and replaces p_k with
p_k + p_j - 1/m. Masses are handled as exact rationals so the table
invariants (each virtual bin sums to 1/m, per-real-bin attributed mass equals
p_i) hold to cancellation rather than float tolerance.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .collisions import Group, GroupSet
from .seeding import generator


def throw_balls(d: int, m: int, p=None, seed: int = 0) -> np.ndarray:
    """Multinomial loads of d balls over m bins (uniform when p is omitted)."""
    if d < 0 or m < 1:
        raise ValueError(f"need d >= 0 balls and m >= 1 bins, got d={d}, m={m}")
    rng = generator(seed)
    if p is None:
        pvals = np.full(m, 1.0 / m)
    else:
        pvals = np.asarray(p, dtype=np.float64)
        if pvals.shape != (m,) or np.any(pvals < 0) or abs(pvals.sum() - 1.0) > 1e-9:
            raise ValueError("p must be a length-m probability vector")
        pvals = pvals / pvals.sum()
    return rng.multinomial(d, pvals)


def bins_with_load_at_least(loads: np.ndarray, t: int) -> int:
    return int(np.sum(loads >= t))


def expected_bins_with_load_at_least(d: int, m: int, t: int) -> float:
    """Exact E[#bins with load >= t] for uniform throws: m * P(Bin(d, 1/m) >= t)."""
    from scipy.stats import binom

    return float(m * binom.sf(t - 1, d, 1.0 / m))


@dataclass(frozen=True)
class VirtualBinTable:
    """m equiprobable virtual bins; entry i lists (real bin, mass) pairs."""

    m: int
    entries: tuple[tuple[tuple[int, Fraction], ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.m:
            raise ValueError("need exactly m virtual bins")

    def attributed_mass(self) -> np.ndarray:
        """Total mass each real bin contributes across the table (as floats)."""
        totals = [Fraction(0)] * self.m
        for entry in self.entries:
            for real_bin, mass in entry:
                totals[real_bin] += mass
        return np.array([float(t) for t in totals])

    def entry_sums(self) -> list[Fraction]:
        return [sum((mass for _, mass in entry), Fraction(0)) for entry in self.entries]

    def sampling_arrays(self):
        """(first_bin, second_bin, first_conditional_prob) float arrays for sampling."""
        first = np.empty(self.m, dtype=np.int64)
        second = np.empty(self.m, dtype=np.int64)
        cond = np.empty(self.m, dtype=np.float64)
        inv = Fraction(1, self.m)
        for i, entry in enumerate(self.entries):
            first[i] = entry[0][0]
            if len(entry) == 1:
                second[i] = entry[0][0]
                cond[i] = 1.0
            else:
                second[i] = entry[1][0]
                cond[i] = float(entry[0][1] / inv)
        return first, second, cond


def alias_virtual_bins(p) -> VirtualBinTable:
    """Run the m-step smallest/largest pairing that builds the virtual bins.

    Accepts floats (converted exactly to rationals) or Fractions. Ties on
    smallest and largest break to the lowest bin index. Zero-mass
    contributions are dropped, so a virtual bin holds one or two real bins.
    """
    exact = [val if isinstance(val, Fraction) else Fraction(float(val)) for val in p]
    m = len(exact)
    if m == 0 or any(val < 0 for val in exact):
        raise ValueError("p must be a nonempty vector of nonnegative masses")
    if abs(float(sum(exact)) - 1.0) > 1e-12:
        raise ValueError(f"p must sum to 1 within 1e-12, got {float(sum(exact))!r}")
    inv = Fraction(1, m)
    masses = dict(enumerate(exact))
    # Lazy-deletion heaps keyed by (mass, index); stale entries are skipped.
    low = [(frac, i) for i, frac in masses.items()]
    high = [(-frac, i) for i, frac in masses.items()]
    heapq.heapify(low)
    heapq.heapify(high)

    def pop_valid(heap, sign):
        while True:
            frac, i = heapq.heappop(heap)
            if i in masses and sign * frac == masses[i]:
                return i

    entries = []
    for _ in range(m - 1):
        j = pop_valid(low, 1)
        pj = masses.pop(j)
        k = pop_valid(high, -1)
        take = inv - pj
        entry = []
        if pj > 0:
            entry.append((j, pj))
        if take > 0:
            entry.append((k, take))
        entries.append(tuple(entry))
        left = masses[k] - take
        if left < 0:
            raise ArithmeticError(f"mass of bin {k} went negative; input too far from a distribution")
        masses[k] = left
        heapq.heappush(low, (left, k))
        heapq.heappush(high, (-left, k))
    ((last, mass),) = masses.items()
    entries.append(((last, mass),))
    return VirtualBinTable(m, tuple(entries))


def sample_through_table(table: VirtualBinTable, count: int, seed: int) -> np.ndarray:
    """Two-level draw: uniform virtual bin, then real bin by conditional mass."""
    rng = generator(seed)
    first, second, cond = table.sampling_arrays()
    virtual = rng.integers(0, table.m, size=count)
    pick_first = rng.random(count) < cond[virtual]
    return np.where(pick_first, first[virtual], second[virtual])


def virtual_group_extraction(d: int, p, t: float, seed: int) -> GroupSet:
    """Throw d balls through the virtual-bin table and extract collision groups.

    Balls landing in the same virtual bin are cut into groups of
    ceil(t); each group is then split by actual real bin (at most two parts)
    and parts of size at least ceil(t/2) are kept. Groups are disjoint and
    labeled by their real bin.
    """
    table = alias_virtual_bins(p)
    rng = generator(seed)
    first, second, cond = table.sampling_arrays()
    virtual = rng.integers(0, table.m, size=d)
    pick_first = rng.random(d) < cond[virtual]
    real = np.where(pick_first, first[virtual], second[virtual])
    t_virtual = math.ceil(t)
    keep = math.ceil(t / 2)
    groups = []
    order = np.argsort(virtual, kind="stable")
    start = 0
    while start < d:
        end = start
        while end < d and virtual[order[end]] == virtual[order[start]]:
            end += 1
        balls = order[start:end]
        for g in range(len(balls) // t_virtual):
            chunk = balls[g * t_virtual : (g + 1) * t_virtual]
            for bin_id in np.unique(real[chunk]):
                part = chunk[real[chunk] == bin_id]
                if part.size >= keep:
                    groups.append(Group(tuple(int(b) for b in part), (int(bin_id),)))
        start = end
    return GroupSet(tuple(groups), keep)
