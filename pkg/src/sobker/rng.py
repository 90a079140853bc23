"""Counter-based random numbers with random access.

Draws come from the Philox4x64-10 generator keyed by ``(seed, stream)``.
Raw 64-bit word ``i`` of a stream is a pure function of ``(seed, stream, i)``,
so any sub-range can be regenerated without replaying the prefix.

* uniform ``i`` is ``((word_i >> 11) + 0.5) * 2**-53``, in the open interval (0, 1);
* normals come in Box-Muller pairs from uniforms ``(2k, 2k+1)``:
  ``sqrt(-2 ln u0) cos(2 pi u1)`` and ``sqrt(-2 ln u0) sin(2 pi u1)``.
"""
from __future__ import annotations

import numpy as np

# stream ids used by the library
POINTS = 1
MC_CROSS = 2
MC_NORM = 3

_MASK64 = (1 << 64) - 1


class CounterRNG:
    """Random-access generator for one ``(seed, stream)`` pair."""

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64

    def raw(self, start: int, count: int) -> np.ndarray:
        """64-bit words ``start .. start + count - 1``."""
        if count <= 0:
            return np.empty(0, dtype=np.uint64)
        block, skip = divmod(int(start), 4)
        bg = np.random.Philox(counter=[block, 0, 0, 0], key=[self.seed, self.stream])
        return bg.random_raw(count + skip)[skip:]

    def uniform(self, start: int, count: int) -> np.ndarray:
        words = self.raw(start, count)
        return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53

    def normal(self, start: int, count: int) -> np.ndarray:
        """Standard normals ``start .. start + count - 1`` (Box-Muller)."""
        if count <= 0:
            return np.empty(0)
        k0 = start // 2
        npairs = (start + count - 1) // 2 - k0 + 1
        u = self.uniform(2 * k0, 2 * npairs)
        rad = np.sqrt(-2.0 * np.log(u[0::2]))
        ang = 2.0 * np.pi * u[1::2]
        z = np.empty(2 * npairs)
        z[0::2] = rad * np.cos(ang)
        z[1::2] = rad * np.sin(ang)
        off = start - 2 * k0
        return z[off:off + count]
