"""Monte Carlo frame/bit error simulation and security-gap measurement.

Frame i draws its message and noise from the stream ``rng.spawn(i)``, so
estimates are bit-identical regardless of batch size or worker count, and
early stopping depends only on the per-frame outcome sequence.
"""

from __future__ import annotations

import concurrent.futures as _futures
from dataclasses import dataclass, field

import numpy as np

from ..channels import SeededRng
from .de import decoding_threshold
from .decoder import SumProductDecoder
from .modem import llrs_from_rx, qpsk_symbols
from .peg import ParityCheckMatrix
from .scramble import FrameScrambler

_Z95 = 1.959963984540054


@dataclass
class FerBerEstimate:
    fer: float
    ber: float
    frames: int
    frame_errors: int
    bit_errors: int
    confidence_halfwidth: float

    def as_csv_row(self, snr_db: float) -> list:
        return [
            snr_db, self.frames, self.frame_errors, self.bit_errors,
            self.fer, self.ber, self.confidence_halfwidth,
        ]


def wilson_halfwidth(errors: int, trials: int, z: float = _Z95) -> float:
    """Half-width of the Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 1.0
    p = errors / trials
    denom = 1.0 + z * z / trials
    return float(z * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom)


class FrameSimulator:
    """Coded QPSK/AWGN pipeline bound to one parity-check matrix.

    Per frame: message -> scramble -> encode -> QPSK -> AWGN -> sum-product
    decode -> extract message positions -> descramble -> compare. Frame and
    bit errors are counted on the descrambled message bits, which is where
    an eavesdropper would read the key material.
    """

    def __init__(self, h: ParityCheckMatrix, scramble_seed: int):
        self.h = h
        self.encoder = h.encoder()
        self.decoder = SumProductDecoder(h)
        self.scrambler = FrameScrambler(self.encoder.k, scramble_seed)
        self.n_symbols = (h.n + 1) // 2

    def run_frames(self, frame_ids, snr_lambda: float, max_iter: int,
                   rng: SeededRng):
        """Per-frame (frame_error, bit_errors) for the given frame indices."""
        k = self.encoder.k
        messages = np.empty((len(frame_ids), k), dtype=np.uint8)
        noise = np.empty((len(frame_ids), self.n_symbols), dtype=complex)
        for row, frame in enumerate(frame_ids):
            stream = rng.spawn(int(frame))
            messages[row] = stream.bits(k)
            noise[row] = stream.complex_normals(self.n_symbols)
        coded = self.encoder.encode_batch(self.scrambler.apply(messages))
        rx = qpsk_symbols(coded, snr_lambda) + noise
        llrs = llrs_from_rx(rx, snr_lambda, self.h.n)
        bits, _, _ = self.decoder.decode_batch(llrs, max_iter)
        recovered = self.scrambler.invert_bits(bits[:, self.encoder.info_cols])
        bit_errors = np.sum(recovered != messages, axis=1)
        return bit_errors > 0, bit_errors


def _chunk_worker(args):
    sim, frame_ids, snr_lambda, max_iter, seed = args
    frame_err, bit_err = sim.run_frames(frame_ids, snr_lambda, max_iter, SeededRng(seed))
    return frame_err, bit_err


def fer_ber_sim(
    h: ParityCheckMatrix,
    snr_lambda: float,
    max_frames: int,
    target_frame_errors: int,
    max_iter: int,
    rng: SeededRng,
    workers: int = 1,
    batch: int = 128,
) -> FerBerEstimate:
    """Estimate FER/BER at one SNR, stopping at ``target_frame_errors``.

    The stopping frame count is the smallest prefix of the frame sequence
    reaching the target (checked at batch boundaries), so results do not
    depend on scheduling.
    """
    if max_frames < 1 or target_frame_errors < 1:
        raise ValueError("frame counts must be positive")
    sim = FrameSimulator(h, scramble_seed=rng.seed)
    frame_err = np.zeros(0, dtype=bool)
    bit_err = np.zeros(0, dtype=np.int64)
    pool = None
    if workers > 1:
        pool = _futures.ProcessPoolExecutor(max_workers=workers)
    try:
        next_frame = 0
        while next_frame < max_frames:
            chunks = []
            for _ in range(max(1, workers)):
                if next_frame >= max_frames:
                    break
                hi = min(next_frame + batch, max_frames)
                chunks.append(np.arange(next_frame, hi))
                next_frame = hi
            args = [(sim, ids, snr_lambda, max_iter, rng.seed) for ids in chunks]
            if pool is None:
                results = [_chunk_worker(a) for a in args]
            else:
                results = list(pool.map(_chunk_worker, args))
            for fe, be in results:
                frame_err = np.concatenate([frame_err, fe])
                bit_err = np.concatenate([bit_err, be])
            cum = np.cumsum(frame_err)
            if cum.size and cum[-1] >= target_frame_errors:
                stop = int(np.searchsorted(cum, target_frame_errors)) + 1
                frame_err = frame_err[:stop]
                bit_err = bit_err[:stop]
                break
    finally:
        if pool is not None:
            pool.shutdown()
    frames = frame_err.size
    fe_total = int(frame_err.sum())
    be_total = int(bit_err.sum())
    k = sim.encoder.k
    return FerBerEstimate(
        fer=fe_total / frames,
        ber=be_total / (frames * k),
        frames=frames,
        frame_errors=fe_total,
        bit_errors=be_total,
        confidence_halfwidth=wilson_halfwidth(fe_total, frames),
    )


@dataclass
class SecurityGapResult:
    gap_db: float
    reliable_snr_db: float
    secure_snr_db: float
    points: list = field(default_factory=list)


def security_gap(
    h: ParityCheckMatrix,
    fer_reliable: float,
    fer_secure: float,
    rng: SeededRng,
    step_db: float = 0.2,
    span_db: float = 6.0,
    max_frames: int = 20_000,
    target_frame_errors: int = 50,
    max_iter: int = 100,
    workers: int = 1,
) -> SecurityGapResult:
    """SNR ratio (dB) between reliable decoding and near-certain failure.

    Walks a dB grid centered on the density-evolution threshold of the
    code's degree profile, simulating FER at each point, then interpolates
    the two crossings: FER <= fer_reliable (log-FER interpolation) and
    FER >= fer_secure (linear interpolation near saturation).
    """
    if not fer_secure > fer_reliable:
        raise ValueError("fer_secure must exceed fer_reliable")
    w_c = int(np.bincount(h.col_weights()).argmax())
    w_r = h.n * w_c / h.num_checks
    center = 10.0 * np.log10(decoding_threshold(w_c, w_r))
    floor = 0.5 / max_frames
    cache: dict[int, FerBerEstimate] = {}

    def fer_at(stepno: int) -> float:
        if stepno not in cache:
            cache[stepno] = fer_ber_sim(
                h, 10 ** ((center + stepno * step_db) / 10.0), max_frames,
                target_frame_errors, max_iter, rng.spawn(1000 + stepno),
                workers=workers,
            )
        return max(cache[stepno].fer, floor)

    max_steps = int(np.ceil(span_db / step_db))

    def crossing(target: float, log_interp: bool) -> float:
        # find adjacent grid steps with fer >= target (low side) and < target
        lo = 0
        while fer_at(lo) < target:
            lo -= 1
            if lo < -max_steps:
                raise RuntimeError("security-gap grid exhausted (low side)")
        hi = lo + 1
        while fer_at(hi) >= target:
            lo, hi = hi, hi + 1
            if hi > max_steps:
                raise RuntimeError("security-gap grid exhausted (high side)")
        f_lo, f_hi = fer_at(lo), fer_at(hi)
        if log_interp:
            frac = (np.log10(f_lo) - np.log10(target)) / (
                np.log10(f_lo) - np.log10(f_hi)
            )
        else:
            frac = (f_lo - target) / (f_lo - f_hi)
        return center + (lo + frac) * step_db

    secure_db = crossing(fer_secure, log_interp=False)
    reliable_db = crossing(fer_reliable, log_interp=True)
    points = [
        (center + s * step_db, est) for s, est in sorted(cache.items())
    ]
    return SecurityGapResult(
        gap_db=reliable_db - secure_db,
        reliable_snr_db=reliable_db,
        secure_snr_db=secure_db,
        points=points,
    )
