"""Deterministic bit-mixing primitives: seeded counter RNG and 64-bit digests.

Everything here is pure integer arithmetic so that traces and digests are
bit-exact across platforms and Python versions.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def splitmix64(seed: int, counter: int) -> int:
    """The counter-th 64-bit word of the stream keyed by seed."""
    z = (seed + (counter + 1) * _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class CounterRng:
    """Counter-based seeded generator: draw i depends only on (seed, i).

    `next_below` consumes exactly one 64-bit word per call, so a walk that
    makes one draw per step can be replayed from the seed alone.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        x = splitmix64(self.seed, self.counter)
        self.counter += 1
        return x

    def next_below(self, n: int) -> int:
        """Uniform draw from [0, n) via fixed-point scaling (single word)."""
        if n <= 0:
            raise ValueError(f"draw bound must be positive, got {n}")
        return (self.next_u64() * n) >> 64

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle driven by the counter stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash; the canonical state digest."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & MASK64
    return h
