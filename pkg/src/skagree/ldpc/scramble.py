"""Frame scrambling by a dense random invertible GF(2) matrix.

A residual error in any single position spreads to about half of the frame
after descrambling, which is the property the security argument needs.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..channels import SeededRng
from . import gf2

_MAX_DRAWS = 64


class FrameScrambler:
    """Invertible random GF(2) map over fixed-length frames."""

    def __init__(self, length: int, seed: int):
        if length < 1:
            raise ValueError("frame length must be positive")
        self.length = length
        self.seed = seed
        rng = SeededRng(seed)
        for _ in range(_MAX_DRAWS):
            candidate = rng.bits((length, length))
            inverse = gf2.invert(candidate)
            if inverse is not None:
                break
        else:  # pragma: no cover - probability ~0.71^64
            raise RuntimeError("failed to draw an invertible scrambling matrix")
        self.matrix = candidate
        self.inverse = inverse

    def apply(self, bits) -> np.ndarray:
        return self._mul(bits, self.matrix)

    def invert_bits(self, bits) -> np.ndarray:
        return self._mul(bits, self.inverse)

    def _mul(self, bits, mat) -> np.ndarray:
        arr = np.asarray(bits, dtype=np.uint8)
        squeeze = arr.ndim == 1
        arr = np.atleast_2d(arr)
        if arr.shape[1] != self.length:
            raise ValueError(f"expected frames of {self.length} bits")
        out = gf2.matmul_mod2(arr, mat.T)
        return out[0] if squeeze else out


@lru_cache(maxsize=16)
def _cached(length: int, seed: int) -> FrameScrambler:
    return FrameScrambler(length, seed)


def scramble(bits, seed: int) -> np.ndarray:
    """Scramble one frame; the matrix is derived from (len(bits), seed)."""
    return _cached(len(bits), seed).apply(bits)


def descramble(bits, seed: int) -> np.ndarray:
    """Inverse of :func:`scramble` for the same seed."""
    return _cached(len(bits), seed).invert_bits(bits)
