"""Deterministic seed streams for replicate ensembles.

Replicate ``i`` of a run with master seed ``s`` is always seeded with
``splitmix64(s + GOLDEN * (i + 1))``: an avalanche-finalized 64-bit stream
that is collision-free over any practical replicate range and independent of
worker scheduling.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

MIX_NAME = "splitmix64/v1"


def splitmix64(z: int) -> int:
    """The splitmix64 finalizer: a 64-bit avalanche permutation."""
    z = (z + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def replicate_seed(master_seed: int, index: int) -> int:
    """Seed for replicate ``index`` of a run; injective in ``index``."""
    return splitmix64((master_seed + _GOLDEN * index) & MASK64)
