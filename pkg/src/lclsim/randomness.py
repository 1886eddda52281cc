"""Per-vertex reproducible random bit streams.

Each vertex owns a SplitMix64 stream keyed by ``(seed, trial, vertex)``.  The
stream is indexable, so it behaves like an arbitrarily long bit sequence that
is only materialized as far as an algorithm reads it.  The scalar and the
numpy implementations produce identical words.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def stream_key(seed: int, trial: int, vertex: int) -> int:
    return mix64(mix64(mix64(seed * GAMMA + 1) ^ (trial * GAMMA + 2)) ^ (vertex * GAMMA + 3))


def stream_word(key: int, index: int) -> int:
    return mix64(key + (index + 1) * GAMMA)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def stream_keys(seed: int, trial: int, n: int) -> np.ndarray:
    """Keys of vertices ``0..n-1`` as uint64, equal to :func:`stream_key`."""
    base = mix64(mix64(seed * GAMMA + 1) ^ (trial * GAMMA + 2))
    v = np.arange(n, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(base) ^ (v * np.uint64(GAMMA) + np.uint64(3))
        return _mix64_np(z)


def stream_words(keys: np.ndarray, index: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        return _mix64_np(keys + np.uint64(((index + 1) * GAMMA) & MASK))


@dataclass(frozen=True)
class BitStream:
    """Lazily extended uniform bit string owned by one vertex."""

    key: int

    def word(self, index: int) -> int:
        return stream_word(self.key, index)

    def bit(self, i: int) -> int:
        return (self.word(i // 64) >> (63 - i % 64)) & 1

    def bits(self, count: int, start: int = 0) -> str:
        return "".join(str(self.bit(i)) for i in range(start, start + count))

    def prefix_int(self, count: int) -> int:
        """First ``count`` bits read as a big-endian integer."""
        value = 0
        for w in range((count + 63) // 64):
            value = (value << 64) | self.word(w)
        extra = 64 * ((count + 63) // 64) - count
        return value >> extra


def streams(seed: int, trial: int, n: int) -> list[BitStream]:
    return [BitStream(int(k)) for k in stream_keys(seed, trial, n)]
