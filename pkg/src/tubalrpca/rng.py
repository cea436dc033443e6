"""Seedable, portable pseudo-random generator.

Corruption masks and synthetic data must reproduce bit-for-bit across
platforms and library versions, so all experiment randomness flows
through SplitMix64 (Steele, Lea & Flood's 64-bit mixer: the output at
step i is mix(seed + i * GOLDEN) with fixed 64-bit constants) instead
of numpy's global RNG.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """SplitMix64 stream: 64-bit state, one multiply-xor mix per output."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def u64(self, n: int) -> np.ndarray:
        """Next `n` raw 64-bit outputs as a uint64 array."""
        base = np.uint64(self._state)
        steps = np.arange(1, n + 1, dtype=np.uint64)
        self._state = (self._state + n * _GOLDEN) & _MASK
        return _mix(base + steps * np.uint64(_GOLDEN))

    def uniforms(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        """`n` doubles uniform in [low, high), 53-bit resolution."""
        u = (self.u64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return low + (high - low) * u

    def normals(self, n: int) -> np.ndarray:
        """`n` standard normals via Box-Muller."""
        m = (n + 1) // 2
        u1 = self.uniforms(m)
        u2 = self.uniforms(m)
        # u1 == 0 would give r = inf; log1p(-u1) maps [0,1) to (-inf, 0] safely
        r = np.sqrt(-2.0 * np.log1p(-u1))
        theta = 2.0 * np.pi * u2
        return np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:n]

    def below(self, bound: int, n: int) -> np.ndarray:
        """`n` integers uniform in [0, bound). Modulo reduction; the bias
        is < bound/2**64, irrelevant at the sizes used here."""
        return (self.u64(n) % np.uint64(bound)).astype(np.int64)

    def sample_without_replacement(self, total: int, k: int) -> np.ndarray:
        """Draw `k` distinct integers from [0, total) (partial Fisher-Yates)."""
        if not 0 <= k <= total:
            raise ValueError(f"cannot draw {k} from {total}")
        idx = np.arange(total, dtype=np.int64)
        draws = self.u64(k)
        for i in range(k):
            j = i + int(draws[i] % np.uint64(total - i))
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k]
