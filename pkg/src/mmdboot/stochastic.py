"""Seedable uniform and Gaussian random streams.

Each stream is a counter-based SplitMix64 sequence: the k-th 64-bit output is
the SplitMix64 finalizer applied to ``key + (k + 1) * GOLDEN``.  The period is
2**64 and any position can be computed directly, which lets the vectorized and
scalar paths produce bitwise-identical values.

Streams are derived from a master seed and a ``(pop_index, trait_index,
purpose)`` triple so that every bootstrap cell owns an independent stream and
parallel runs match serial runs exactly.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

PURPOSE_BOOTSTRAP = 1
PURPOSE_SIMULATE = 2
PURPOSE_SCALING = 3

_TWO_PI = 2.0 * math.pi


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int (full avalanche)."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def _mix64_array(x: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps modulo 2**64
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


class RandomStream:
    """A single reproducible stream of uniforms on (0, 1) and Box-Muller normals."""

    __slots__ = ("key", "counter", "_cached")

    def __init__(self, key: int):
        self.key = key & MASK64
        self.counter = 0
        self._cached: float | None = None

    def __repr__(self):
        return f"RandomStream(key={self.key:#018x}, counter={self.counter})"

    def raw(self, size: int) -> np.ndarray:
        """Next ``size`` raw 64-bit outputs."""
        if size < 0:
            raise ValueError("size must be non-negative")
        idx = np.arange(self.counter + 1, self.counter + size + 1, dtype=np.uint64)
        self.counter += size
        return _mix64_array(np.uint64(self.key) + idx * np.uint64(GOLDEN))

    def uniforms(self, size: int) -> np.ndarray:
        # odd multiples of 2**-53: never 0, never 1, exact in float64
        bits = self.raw(size) >> np.uint64(12)
        return (bits * np.uint64(2) + np.uint64(1)).astype(np.float64) * 2.0**-53

    def next_uniform(self) -> float:
        return float(self.uniforms(1)[0])

    def standard_normals(self, size: int) -> np.ndarray:
        """Next ``size`` N(0, 1) deviates, honoring the cached sin-branch deviate.

        Deviates come in Box-Muller pairs (cos branch first).  Drawing ``size``
        values at once gives exactly the same numbers as ``size`` sequential
        calls to :meth:`next_gaussian`.
        """
        out = np.empty(size, dtype=np.float64)
        start = 0
        if size and self._cached is not None:
            out[0] = self._cached
            self._cached = None
            start = 1
        remaining = size - start
        if remaining <= 0:
            return out
        pairs = (remaining + 1) // 2
        u = self.uniforms(2 * pairs)
        u1, u2 = u[0::2], u[1::2]
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = _TWO_PI * u2
        z = np.empty(2 * pairs, dtype=np.float64)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        out[start:] = z[:remaining]
        if remaining % 2:
            self._cached = float(z[-1])
        return out

    def gaussians(self, size: int, mean: float = 0.0, sd: float = 1.0) -> np.ndarray:
        if not sd > 0:
            raise ValueError(f"sd must be positive, got {sd}")
        return mean + sd * self.standard_normals(size)

    def next_gaussian(self, mean: float = 0.0, sd: float = 1.0) -> float:
        return float(self.gaussians(1, mean, sd)[0])


def derive_stream(master_seed: int, pop_index: int, trait_index: int, purpose: int) -> RandomStream:
    """Stream for one ``(pop_index, trait_index, purpose)`` cell under ``master_seed``.

    Indices are folded modulo 2**64, so ``-1`` is a valid sentinel index.
    """
    h = mix64(master_seed ^ 0x6A09E667F3BCC909)
    for j, part in enumerate((pop_index, trait_index, purpose)):
        h = mix64(h ^ ((part & MASK64) + (j + 1) * GOLDEN))
    return RandomStream(h)
