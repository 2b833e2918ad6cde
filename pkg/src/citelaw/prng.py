"""Portable counter-based pseudo-random generator (SplitMix64).

The k-th output (k = 1, 2, ...) of a stream seeded with ``s`` is
``mix(s + k * 0x9E3779B97F4A7C15 mod 2**64)`` where ``mix`` is the SplitMix64
finaliser::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

all modulo 2**64.  Because each output depends only on ``(seed, k)`` the
stream can be produced in vectorised blocks and reproduced bit for bit in any
language with 64-bit unsigned arithmetic.
"""
from __future__ import annotations

import numpy as np

__all__ = ["Prng", "splitmix64"]

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0 ** -53
_TWO_M52 = 2.0 ** -52


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def splitmix64(seed: int, k: int) -> int:
    """Scalar reference: the k-th output of the stream seeded with ``seed``."""
    z = (seed + k * GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


class Prng:
    """Seeded SplitMix64 stream.

    >>> Prng(7).next_u64(2).tolist() == [splitmix64(7, 1), splitmix64(7, 2)]
    True
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.counter = 0

    def next_u64(self, size: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + size + 1, dtype=np.uint64)
        self.counter += size
        with np.errstate(over="ignore"):
            return _mix(np.uint64(self.seed) + k * np.uint64(GAMMA))

    def uniform(self, size=None):
        """Uniform doubles in [0, 1) with 53-bit resolution."""
        n = 1 if size is None else int(np.prod(size))
        u = (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * _TWO_M53
        return float(u[0]) if size is None else u.reshape(size)

    def uniform_open(self, size=None):
        """Uniform doubles ``(m + 0.5) / 2**52`` with 52-bit ``m``, strictly inside (0, 1).

        A 52-bit grid keeps ``m + 0.5`` exact, so 1.0 is never produced.
        """
        n = 1 if size is None else int(np.prod(size))
        u = ((self.next_u64(n) >> np.uint64(12)).astype(np.float64) + 0.5) * _TWO_M52
        return float(u[0]) if size is None else u.reshape(size)

    def integers(self, low: int, high: int, size: int) -> np.ndarray:
        """Integers in ``[low, high)``; bias is below 2**-53 * (high - low)."""
        if high <= low:
            raise ValueError("empty integer range")
        return low + np.floor(self.uniform(size) * (high - low)).astype(np.int64)

    def choice_without_replacement(self, n: int, k: int) -> np.ndarray:
        """``k`` distinct indices from ``range(n)`` in random order."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot choose {k} of {n}")
        keys = self.next_u64(n)
        return np.argsort(keys, kind="stable")[:k]

    def spawn(self, key: int) -> "Prng":
        """Independent child stream identified by ``key``."""
        child = splitmix64(self.seed ^ ((key * MIX1) & MASK64), 1)
        return Prng(child)
