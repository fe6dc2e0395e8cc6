"""Counter-based deterministic random streams.

Every random draw in the simulator is a pure function of (seed, step, tag,
lane), so results never depend on batch composition, call order, or thread
count.  The mixer is the SplitMix64 finalizer applied to a keyed fold.
"""
from __future__ import annotations

import numpy as np

U64 = np.uint64
_GOLDEN = U64(0x9E3779B97F4A7C15)
_MULT_STEP = U64(0xC2B2AE3D27D4EB4F)
_MULT_LANE = U64(0x165667B19E3779F9)

# Stream tags keep independent uses of the same (seed, step) decorrelated.
TAG_EPISODE = 1
TAG_RESEED = 2
TAG_HEURISTIC_EXPLORE = 3
TAG_HEURISTIC_PICK = 4
TAG_RANDOM_ACTION = 5
TAG_LEVEL = 6


def _mix(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> U64(27))) * U64(0x94D049BB133111EB)
    return x ^ (x >> U64(31))


def hash_u64(seed, step=0, tag=0, lane=0) -> np.ndarray:
    """Keyed 64-bit hash; arguments broadcast like numpy operands."""
    with np.errstate(over="ignore"):
        h = _mix(np.asarray(seed, dtype=np.uint64) + _GOLDEN * U64(int(tag)))
        h = _mix(h + np.asarray(step, dtype=np.uint64) * _MULT_STEP)
        h = _mix(h + np.asarray(lane, dtype=np.uint64) * _MULT_LANE)
    return h


def uniform(seed, step=0, tag=0, lane=0) -> np.ndarray:
    """Uniform floats in [0, 1) with 53-bit resolution."""
    h = hash_u64(seed, step, tag, lane)
    return (h >> U64(11)).astype(np.float64) * (1.0 / (1 << 53))


def derive_seed(seed, index, tag) -> np.ndarray:
    """Child seed for episode `index` of a run seeded with `seed`."""
    return hash_u64(seed, index, tag)
