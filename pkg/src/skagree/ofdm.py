"""Exact matrix model of an OFDM/CP link and the induced wiretap channels.

The dense matrices here are the reference ("oracle") path; structured
shortcuts such as :func:`eavesdropper_column_energy` are validated against
them in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz


@dataclass(frozen=True)
class OfdmConfig:
    """OFDM dimensioning: data tones plus cyclic-prefix samples per symbol."""

    subcarriers: int
    cp_len: int

    def __post_init__(self):
        if int(self.subcarriers) != self.subcarriers or self.subcarriers < 2:
            raise ValueError("subcarriers must be an integer >= 2")
        if int(self.cp_len) != self.cp_len or self.cp_len < 1:
            raise ValueError("cp_len must be an integer >= 1")

    @property
    def block_len(self) -> int:
        """Time-domain samples per OFDM symbol (subcarriers + cp_len)."""
        return self.subcarriers + self.cp_len

    @property
    def cp_overhead(self) -> float:
        """Prefix redundancy ratio cp_len / subcarriers."""
        return self.cp_len / self.subcarriers


@dataclass(frozen=True)
class ImpulseResponse:
    """Complex channel taps for one link."""

    taps: np.ndarray
    label: str = "legitimate"

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex)
        if taps.ndim != 1 or taps.size < 1:
            raise ValueError("taps must be a non-empty 1-d vector")
        taps = taps.copy()
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    def __len__(self):
        return self.taps.size


def _as_taps(g) -> np.ndarray:
    if isinstance(g, ImpulseResponse):
        return g.taps
    taps = np.asarray(g, dtype=complex)
    if taps.ndim != 1 or taps.size < 1:
        raise ValueError("taps must be a non-empty 1-d vector")
    return taps


def dft_matrix(m: int) -> np.ndarray:
    """Unitary m-point DFT matrix (1/sqrt(m) scaling)."""
    idx = np.arange(m)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / m) / np.sqrt(m)


def toeplitz_conv_matrix(g, n: int) -> np.ndarray:
    """(n+L-1) x n Toeplitz matrix whose action is linear convolution with g.

    First column [g(0), ..., g(L-1), 0, ...], first row [g(0), 0, ..., 0].
    """
    taps = _as_taps(g)
    if n < 1:
        raise ValueError("n must be >= 1")
    first_col = np.concatenate([taps, np.zeros(n - 1, dtype=complex)])
    first_row = np.concatenate([taps[:1], np.zeros(n - 1, dtype=complex)])
    return toeplitz(first_col, first_row)


def modulator_matrix(cfg: OfdmConfig) -> np.ndarray:
    """Transmit matrix mapping subcarrier symbols to time samples with CP.

    Inverse unitary DFT followed by copying the last cp_len samples to the
    front; shape (block_len, subcarriers).
    """
    f_star = dft_matrix(cfg.subcarriers).conj()
    return np.vstack([f_star[cfg.subcarriers - cfg.cp_len:], f_star])


def _receiver_matrix(cfg: OfdmConfig, channel_len: int) -> np.ndarray:
    """DFT of the block after discarding the prefix; no ISI-free guard."""
    m = cfg.subcarriers
    r = np.zeros((m, cfg.block_len + channel_len - 1), dtype=complex)
    r[:, cfg.cp_len:cfg.cp_len + m] = dft_matrix(m)
    return r


def demodulator_matrix(cfg: OfdmConfig, channel_len: int) -> np.ndarray:
    """Receive matrix for a legitimate channel of ``channel_len`` taps.

    Shape (subcarriers, block_len + channel_len - 1). Requires
    channel_len <= cp_len, otherwise the prefix cannot absorb the delay
    spread and ISI-free demodulation is impossible.
    """
    if channel_len < 1:
        raise ValueError("channel_len must be >= 1")
    if channel_len > cfg.cp_len:
        raise ValueError(
            f"channel has {channel_len} taps but the cyclic prefix is only "
            f"{cfg.cp_len} samples: ISI-free demodulation impossible"
        )
    return _receiver_matrix(cfg, channel_len)


@dataclass(frozen=True)
class EffectiveChannels:
    """Post-modulation equivalent channels.

    ``subcarrier_gains``: per-tone complex gains of the legitimate link
    (the demodulated channel is diagonal with these entries).
    ``eavesdropper_matrix``: full time-domain matrix seen by an eavesdropper
    who keeps every sample, including the prefix.
    """

    subcarrier_gains: np.ndarray
    eavesdropper_matrix: np.ndarray


def effective_channels(cfg: OfdmConfig, g_legit, g_eave) -> EffectiveChannels:
    """Reduce the Toeplitz channel model to its per-subcarrier equivalents."""
    legit = _as_taps(g_legit)
    eave = _as_taps(g_eave)
    if legit.size > cfg.cp_len:
        raise ValueError(
            f"legitimate channel has {legit.size} taps but cp_len={cfg.cp_len}"
        )
    gains = np.fft.fft(legit, n=cfg.subcarriers)
    h_e = toeplitz_conv_matrix(eave, cfg.block_len) @ modulator_matrix(cfg)
    return EffectiveChannels(gains, h_e)


def eavesdropper_column_energies(cfg: OfdmConfig, taps: np.ndarray,
                                 subcarrier) -> np.ndarray:
    """Squared norm of eavesdropper-matrix column(s) without the dense product.

    Each column of the eavesdropper matrix is the convolution of the taps
    with a pure tone of constant modulus 1/sqrt(M), so its energy reduces to
    prefix/suffix partial sums of phase-twisted taps: the (N - L + 1) fully
    overlapped output samples carry |full sum|^2 each, and the convolution
    ramps contribute the prefix and suffix partial sums once.

    ``taps``: (L,) or (batch, L); ``subcarrier``: scalar or (batch,).
    """
    arr = np.asarray(taps, dtype=complex)
    squeeze = arr.ndim == 1
    arr = np.atleast_2d(arr)
    m_idx = np.atleast_1d(np.asarray(subcarrier, dtype=int))
    if m_idx.size == 1 and arr.shape[0] > 1:
        m_idx = np.full(arr.shape[0], m_idx[0])
    n_taps = arr.shape[1]
    big_n, big_m = cfg.block_len, cfg.subcarriers
    if n_taps > big_n:
        raise ValueError("channel longer than one OFDM block")
    phase = np.exp(-2j * np.pi * np.outer(m_idx, np.arange(n_taps)) / big_m)
    twisted = arr * phase
    prefix = np.cumsum(twisted, axis=1)
    full = prefix[:, -1]
    energy = (big_n - n_taps + 1) * np.abs(full) ** 2
    if n_taps > 1:
        suffix = full[:, None] - prefix[:, :-1]
        energy = energy + np.sum(np.abs(prefix[:, :-1]) ** 2
                                 + np.abs(suffix) ** 2, axis=1)
    energy = energy / big_m
    return float(energy[0]) if squeeze else energy


def eavesdropper_column_energy(cfg: OfdmConfig, g_eave, subcarrier: int) -> float:
    """Single-channel convenience wrapper for the batched energy computation."""
    return eavesdropper_column_energies(cfg, _as_taps(g_eave), subcarrier)
