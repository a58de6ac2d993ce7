"""Bit-packed GF(2) linear algebra for encoder derivation and scrambling."""

from __future__ import annotations

import numpy as np


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, n) 0/1 matrix into little-endian uint64 words per row."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    packed = np.packbits(bits, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return packed.view(np.uint64)


def unpack_rows(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`pack_rows`."""
    return np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")[:, :n]


def _column(words: np.ndarray, j: int) -> np.ndarray:
    return (words[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)


def rref(words: np.ndarray, n: int) -> list[int]:
    """In-place reduced row echelon form over GF(2); returns pivot columns."""
    rows = words.shape[0]
    rank = 0
    pivots = []
    for j in range(n):
        if rank == rows:
            break
        col = _column(words, j)
        nz = np.nonzero(col[rank:])[0]
        if nz.size == 0:
            continue
        p = rank + int(nz[0])
        if p != rank:
            words[[rank, p]] = words[[p, rank]]
        col = _column(words, j)
        hit = col == 1
        hit[rank] = False
        if hit.any():
            words[hit] ^= words[rank]
        pivots.append(j)
        rank += 1
    return pivots


def rank(bits: np.ndarray) -> int:
    words = pack_rows(np.asarray(bits))
    return len(rref(words, np.asarray(bits).shape[1]))


def invert(bits: np.ndarray) -> np.ndarray | None:
    """Inverse of a square GF(2) matrix, or None if singular."""
    a = np.asarray(bits, dtype=np.uint8)
    k = a.shape[0]
    if a.shape != (k, k):
        raise ValueError("matrix must be square")
    augmented = np.concatenate([a, np.eye(k, dtype=np.uint8)], axis=1)
    words = pack_rows(augmented)
    pivots = rref(words, k)
    if pivots != list(range(k)):
        return None
    return unpack_rows(words, 2 * k)[:, k:]


def matmul_mod2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a @ b) mod 2 via float32 BLAS; exact while inner dim < 2**24."""
    if a.shape[-1] >= (1 << 24):
        raise ValueError("inner dimension too large for exact float32 parity")
    prod = np.asarray(a, dtype=np.float32) @ np.asarray(b, dtype=np.float32)
    return (prod.astype(np.int64) & 1).astype(np.uint8)
