"""Deterministic seed derivation for replicate streams.

Replicate ``r`` of a Monte Carlo study draws from a generator seeded with
the ``r``-th output of a SplitMix64 stream started at the master seed:

    state_r = master + (r + 1) * 0x9E3779B97F4A7C15   (mod 2^64)
    seed_r  = finalize(state_r)

where ``finalize`` is SplitMix64's xor-shift/multiply output function.
This gives well-separated 64-bit seeds for any replicate index without
shared state, so replicates can run concurrently yet reproduce the serial
results exactly.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """SplitMix64 output function applied to a 64-bit state."""
    z = state & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix_seed(master_seed: int, index: int) -> int:
    """The ``index``-th seed of the SplitMix64 stream under ``master_seed``."""
    if index < 0:
        raise ValueError("index must be non-negative")
    state = (master_seed + (index + 1) * _GOLDEN) & _MASK64
    return splitmix64(state)
