"""Log-domain sum-product decoding with a flooding schedule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .peg import ParityCheckMatrix

_LOG_FLOOR = 1e-300
_TANH_CEIL = 1.0 - 1e-15


@dataclass
class DecodeResult:
    bits: np.ndarray
    converged: bool
    iterations: int


class SumProductDecoder:
    """Belief propagation on a fixed Tanner graph, vectorized over frames.

    Check updates run in sign/log-magnitude form so exactly-zero messages
    (e.g. an all-zero LLR input) propagate correctly instead of raising
    division errors. Message magnitudes are clamped to ``clamp``.

    A frame is converged once its hard decisions satisfy every check and
    every posterior is nonzero; a bit with an exactly-zero posterior is
    undecided, so an information-free input is never declared converged
    even though the arbitrary all-zero decision would pass the syndrome.
    """

    def __init__(self, h: ParityCheckMatrix, clamp: float = 30.0):
        if not isinstance(h, ParityCheckMatrix):
            h = ParityCheckMatrix(h)
        self.h = h
        self.clamp = clamp
        chk_of_edge, var_of_edge = h.tanner_edges()
        row_deg = h.row_weights()
        col_deg = h.col_weights()
        if row_deg.min(initial=1) < 1 or col_deg.min(initial=1) < 1:
            raise ValueError("decoder requires every node to have degree >= 1")
        self.n_edges = var_of_edge.size
        self.chk_of_edge = chk_of_edge
        self.var_of_edge = var_of_edge
        self.chk_starts = np.concatenate([[0], np.cumsum(row_deg)[:-1]])
        self.var_perm = np.argsort(var_of_edge, kind="stable")
        self.var_starts = np.concatenate([[0], np.cumsum(col_deg)[:-1]])

    def decode(self, llrs, max_iter: int = 100) -> DecodeResult:
        arr = np.asarray(llrs, dtype=float)
        if arr.shape != (self.h.n,):
            raise ValueError(f"expected {self.h.n} LLRs")
        bits, converged, iters = self.decode_batch(arr[None, :], max_iter)
        return DecodeResult(bits[0], bool(converged[0]), int(iters[0]))

    def decode_batch(self, llrs, max_iter: int = 100):
        """Decode (batch, n) LLR rows; returns (bits, converged, iterations)."""
        llrs = np.clip(np.asarray(llrs, dtype=float), -self.clamp, self.clamp)
        batch = llrs.shape[0]
        bits = (llrs < 0).astype(np.uint8)
        converged = ~np.any(self.h.syndrome(bits), axis=1) & np.all(
            llrs != 0.0, axis=1
        )
        iterations = np.zeros(batch, dtype=np.int64)
        iterations[~converged] = max_iter
        active = np.flatnonzero(~converged)
        if active.size == 0 or max_iter == 0:
            return bits, converged, iterations

        llr_act = llrs[active]
        v2c = llr_act[:, self.var_of_edge]
        c2v = np.zeros_like(v2c)
        for it in range(1, max_iter + 1):
            c2v = self._check_update(v2c)
            totals = self._variable_totals(llr_act, c2v)
            v2c = np.clip(
                totals[:, self.var_of_edge] - c2v, -self.clamp, self.clamp
            )
            hard = (totals < 0).astype(np.uint8)
            ok = ~np.any(self.h.syndrome(hard), axis=1) & np.all(
                totals != 0.0, axis=1
            )
            if np.any(ok):
                done = active[ok]
                bits[done] = hard[ok]
                converged[done] = True
                iterations[done] = it
                keep = ~ok
                if not np.any(keep):
                    return bits, converged, iterations
                active = active[keep]
                llr_act = llr_act[keep]
                v2c = v2c[keep]
                c2v = c2v[keep]
        totals = self._variable_totals(llr_act, c2v)
        bits[active] = (totals < 0).astype(np.uint8)
        return bits, converged, iterations

    def _check_update(self, v2c: np.ndarray) -> np.ndarray:
        t = np.tanh(0.5 * v2c)
        mag = np.abs(t)
        log_mag = np.log(np.maximum(mag, _LOG_FLOOR))
        neg = t < 0
        log_sum = np.add.reduceat(log_mag, self.chk_starts, axis=1)
        parity = np.add.reduceat(neg.astype(np.int8), self.chk_starts, axis=1) & 1
        loo_log = log_sum[:, self.chk_of_edge] - log_mag
        sign = np.where(neg ^ parity[:, self.chk_of_edge].astype(bool), -1.0, 1.0)
        prod = sign * np.exp(np.minimum(loo_log, 0.0))
        return 2.0 * np.arctanh(np.clip(prod, -_TANH_CEIL, _TANH_CEIL))

    def _variable_totals(self, llr_act: np.ndarray, c2v: np.ndarray) -> np.ndarray:
        per_var = np.add.reduceat(c2v[:, self.var_perm], self.var_starts, axis=1)
        return llr_act + per_var


def sum_product_decode(h, llrs, max_iter: int = 100) -> DecodeResult:
    """One-shot decode; build a :class:`SumProductDecoder` to amortize setup."""
    return SumProductDecoder(h).decode(llrs, max_iter)
