"""Pinned deterministic randomness based on the splitmix64 mixing step.

Every random decision in this package flows through the functions here so
that a (seed, index...) tuple produces bit-identical results across runs,
platforms, and reimplementations.  The core is the public-domain splitmix64
generator: state advances by the 64-bit golden-gamma constant and outputs
are produced by a three-round xor-multiply finalizer.

Two access patterns are provided:

* ``SplitMix64`` -- a sequential stream (shuffles, vertex sampling).
* ``stream_u64`` / ``uniforms`` -- random access into the stream keyed by
  an integer, so per-edge uniforms can be addressed as
  ``(seed, trial, edge)`` without generating predecessors.  This is what
  makes percolation configurations monotone-coupled across ``p`` and
  trivially parallelizable over trials.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 output finalizer for a 64-bit state value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def stream_u64(key: int, index: int) -> int:
    """The ``index``-th output of the splitmix64 stream seeded at ``key``."""
    return mix64((key + (index + 1) * GOLDEN) & MASK64)


def derive_key(key: int, *parts: int) -> int:
    """Derive a child stream key from a parent key and integer labels.

    ``derive_key(seed, t)`` is the key of trial ``t``; nesting further
    labels yields independent substreams.
    """
    k = key & MASK64
    for p in parts:
        k = stream_u64(k, p)
    return k


def u01(value: int) -> float:
    """Map a 64-bit value to a uniform float in [0, 1) using 53 bits."""
    return (value >> 11) * 2.0 ** -53


def uniforms(key: int, count: int) -> np.ndarray:
    """Vectorized ``[u01(stream_u64(key, i)) for i in range(count)]``."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(key & MASK64) + idx * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def uniforms_block(keys: np.ndarray, count: int) -> np.ndarray:
    """Uniform matrix of shape (len(keys), count), row i keyed by keys[i]."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = keys.astype(np.uint64)[:, None] + idx[None, :] * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def trial_keys(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized ``[derive_key(seed, t) for t in range(start, start+count)]``."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Sequential splitmix64 stream with the sampling helpers we need."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        return u01(self.next_u64())

    def randrange(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        limit = (2 ** 64 // n) * n
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def shuffle(self, xs: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.randrange(i + 1)
            xs[i], xs[j] = xs[j], xs[i]
