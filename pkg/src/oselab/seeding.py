"""Deterministic seed derivation.

Every random object in the library (sketch columns, instances, trials, sweep
cells) draws from its own stream, keyed by hashing the master seed together
with integer indices. This makes generation order-independent: a column or a
trial can be produced in isolation and comes out bit-identical to what a full
sequential run would produce, which is what the reproducibility and
parallel-execution guarantees rest on.

The hash is the splitmix64 finalizer, available both as scalar Python-int
functions and as vectorized numpy uint64 kernels.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U_GAMMA = np.uint64(GAMMA)
_U_MIX1 = np.uint64(_MIX1)
_U_MIX2 = np.uint64(_MIX2)


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    x &= _MASK
    x ^= x >> 30
    x = (x * _MIX1) & _MASK
    x ^= x >> 27
    x = (x * _MIX2) & _MASK
    x ^= x >> 31
    return x


def derive_seed(master: int, *indices: int) -> int:
    """Stable 64-bit sub-seed for (master, index path).

    Distinct index paths give decorrelated seeds; the empty path gives a
    mixed version of the master itself.
    """
    h = mix64(master)
    for ix in indices:
        h = mix64((h + GAMMA + mix64(int(ix))) & _MASK)
    return h


def generator(master: int, *indices: int) -> np.random.Generator:
    """A numpy Generator seeded from the derived sub-seed."""
    return np.random.Generator(np.random.PCG64(derive_seed(master, *indices)))


def mix64_array(x: np.ndarray) -> np.ndarray:
    """Vectorized splitmix64 finalizer (uint64 in, uint64 out)."""
    x = x.astype(np.uint64, copy=True)
    with np.errstate(over="ignore"):
        x ^= x >> np.uint64(30)
        x *= _U_MIX1
        x ^= x >> np.uint64(27)
        x *= _U_MIX2
        x ^= x >> np.uint64(31)
    return x


def column_seeds(master: int, count: int) -> np.ndarray:
    """Per-column sub-seeds hash(master, j) for j = 0..count-1, as uint64."""
    h = np.uint64(mix64(master))
    idx = mix64_array(np.arange(count, dtype=np.uint64))
    with np.errstate(over="ignore"):
        return mix64_array(h + _U_GAMMA + idx)


def stream_u64(seeds: np.ndarray, step: int | np.ndarray) -> np.ndarray:
    """Draw `step`-th uint64 from each seed's splitmix64 stream.

    `seeds` and `step` broadcast; output shape follows numpy broadcasting.
    """
    step = np.asarray(step, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = seeds + (step + np.uint64(1)) * _U_GAMMA
    return mix64_array(state)


def u64_to_unit(x: np.ndarray) -> np.ndarray:
    """Map uint64 words to floats in the open interval (0, 1).

    52 payload bits keep both endpoints exact: the largest word maps to
    1 - 2^-53, the smallest to 2^-53.
    """
    return ((x >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52
