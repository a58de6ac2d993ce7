"""Eavesdropper SNR statistics and secret-key rate outage analysis.

With Rayleigh taps, the eavesdropper SNR on the chosen subcarrier is a
Hermitian quadratic form in the (unit-variance) tap vector, so it is
distributed as a weighted sum of independent unit exponentials whose means
are the eigenvalues of that form. Everything here is built around that
matrix, its closed-form CDF, and Monte Carlo cross-checks against the full
matrix channel model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .channels import PdpProfile, SeededRng, sample_tap_matrix
from .ofdm import OfdmConfig, eavesdropper_column_energies
from .rates import secret_key_rates, secrecy_rates

_DEGENERATE_GAP = 1e-6
_COEFF_BLOWUP = 1e8
_EIGENVALUE_CUTOFF = 1e-12


@dataclass(frozen=True)
class QuadraticFormMatrix:
    """PSD matrix c with gamma* c gamma ~ eavesdropper SNR, gamma ~ CN(0, I)."""

    c: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("quadratic form must be square")
        if not np.allclose(c, c.T, atol=1e-12):
            raise ValueError("quadratic form must be symmetric")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class EigenSpectrum:
    """Nonnegative eigenvalues sorted descending, tiny ones dropped.

    Eigenvalues below ``cutoff`` (relative to the largest) contribute a
    point mass at zero within tolerance and are removed; the retained count
    is what the closed-form CDF uses.
    """

    eigenvalues: np.ndarray

    def __post_init__(self):
        vals = np.sort(np.asarray(self.eigenvalues, dtype=float))[::-1].copy()
        if vals.size < 1:
            raise ValueError("empty spectrum")
        if vals[-1] < 0:
            raise ValueError("eigenvalues must be nonnegative")
        vals.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)

    @classmethod
    def from_matrix(cls, form, cutoff: float = _EIGENVALUE_CUTOFF) -> "EigenSpectrum":
        c = form.c if isinstance(form, QuadraticFormMatrix) else np.asarray(form)
        vals = np.linalg.eigvalsh(c)
        if vals[0] < -1e-10 * max(1.0, vals[-1]):
            raise ValueError("matrix is not PSD")
        vals = np.clip(vals, 0.0, None)
        total = float(vals.sum())
        trace = float(np.trace(c))
        if abs(total - trace) > 1e-9 * max(abs(total), abs(trace), 1e-300):
            raise ValueError("eigenvalue sum inconsistent with trace")
        kept = vals[vals > cutoff * vals[-1]] if vals[-1] > 0 else vals[-1:]
        return cls(kept)


def build_c_matrix(cfg: OfdmConfig, pdp: PdpProfile, power: float) -> QuadraticFormMatrix:
    """Quadratic form whose value is distributed as the eavesdropper SNR.

    The column energy of the effective eavesdropper channel decomposes into
    prefix partial sums, (N - L + 1) copies of the full tap sum, and suffix
    partial sums; absorbing the PDP into unit-variance taps and the
    power / (1 + cp_overhead) loading gives

        c = s * D^(1/2) [ sum u_n u_n^T + (N-L+1) 1 1^T + sum v_n v_n^T ] D^(1/2) / M

    with u_n (v_n) the indicator of the first n (last L-n) taps and
    D = diag(tap powers). The construction is validated in distribution
    against the dense matrix model by the test suite.
    """
    n_taps = pdp.length
    if n_taps > cfg.block_len:
        raise ValueError("PDP longer than one OFDM block")
    big_n, big_m = cfg.block_len, cfg.subcarriers
    core = np.zeros((n_taps, n_taps))
    core += (big_n - n_taps + 1) * np.ones((n_taps, n_taps))
    for n in range(1, n_taps):
        u = np.zeros(n_taps)
        u[:n] = 1.0
        core += np.outer(u, u)
        v = np.zeros(n_taps)
        v[n:] = 1.0
        core += np.outer(v, v)
    root = np.sqrt(pdp.tap_powers)
    scale = power / (1.0 + cfg.cp_overhead) / big_m
    c = scale * (root[:, None] * core * root[None, :])
    return QuadraticFormMatrix(
        c,
        provenance=(
            f"subcarriers={big_m} cp_len={cfg.cp_len} taps={n_taps} "
            f"power={power!r} (subcarrier-independent by phase symmetry)"
        ),
    )


def sample_quadratic_form(form: QuadraticFormMatrix, samples: int, rng: SeededRng):
    """Monte Carlo draws of gamma* c gamma with gamma ~ CN(0, I)."""
    spec = EigenSpectrum.from_matrix(form)
    u = 1.0 - rng.uniform((samples, spec.eigenvalues.size))
    return -np.log(u) @ spec.eigenvalues


def simulate_lambda_e(
    cfg: OfdmConfig,
    pdp: PdpProfile,
    power: float,
    subcarrier: int,
    samples: int,
    rng: SeededRng,
    chunk: int = 8192,
) -> np.ndarray:
    """Eavesdropper SNR samples through the matrix channel model.

    Draws tap vectors and applies the effective channel column energy
    (the structured evaluation of ||G_E T e_m||^2, identical to the dense
    product to machine precision), then scales by power / (1 + overhead).
    """
    out = np.empty(samples)
    scale = power / (1.0 + cfg.cp_overhead)
    done = 0
    while done < samples:
        take = min(chunk, samples - done)
        taps = sample_tap_matrix(pdp, rng, take)
        out[done:done + take] = scale * eavesdropper_column_energies(
            cfg, taps, subcarrier
        )
        done += take
    return out


def _hypoexponential_cdf_closed_form(theta: np.ndarray, lam: np.ndarray):
    """Partial-fraction CDF for distinct eigenvalues; None if ill-conditioned."""
    gaps = lam[:, None] - lam[None, :]
    min_gap = np.min(np.abs(gaps[~np.eye(lam.size, dtype=bool)]))
    if min_gap < _DEGENERATE_GAP * lam[0]:
        return None
    np.fill_diagonal(gaps, 1.0)
    ratios = lam[:, None] / gaps
    np.fill_diagonal(ratios, 1.0)
    coeff = np.prod(ratios, axis=1)
    if np.max(np.abs(coeff)) > _COEFF_BLOWUP:
        return None
    cdf = 1.0 - np.exp(-theta[:, None] / lam[None, :]) @ coeff
    return np.clip(cdf, 0.0, 1.0)


def _hypoexponential_cdf_phase_type(theta: np.ndarray, lam: np.ndarray):
    """Matrix-exponential evaluation, stable for repeated eigenvalues."""
    rates = 1.0 / lam
    k = lam.size
    gen = np.diag(-rates)
    gen += np.diag(rates[:-1], k=1)
    out = np.empty(theta.size)
    for i, t in enumerate(theta):
        out[i] = 1.0 - expm(gen * t)[0].sum()
    return np.clip(out, 0.0, 1.0)


def lambda_e_cdf(theta, spec: EigenSpectrum | np.ndarray):
    """CDF of the eavesdropper SNR: sum of Exp(mean lambda_i) variables.

    Uses the partial-fraction closed form when the spectrum is distinct and
    well conditioned, otherwise the phase-type matrix-exponential route.
    """
    arr = np.atleast_1d(np.asarray(theta, dtype=float))
    if np.any(arr < 0):
        raise ValueError("theta must be nonnegative")
    lam = (
        spec.eigenvalues
        if isinstance(spec, EigenSpectrum)
        else EigenSpectrum(np.asarray(spec, dtype=float)).eigenvalues
    )
    if lam[0] == 0.0:
        out = np.ones_like(arr)  # degenerate point mass at zero
    elif lam.size == 1:
        out = 1.0 - np.exp(-arr / lam[0])
    else:
        out = _hypoexponential_cdf_closed_form(arr, lam)
        if out is None:
            out = _hypoexponential_cdf_phase_type(arr, lam)
    return float(out[0]) if np.ndim(theta) == 0 else out


def secrecy_outage_probability(lambda_th: float, epsilon: float, spec) -> float:
    """P{eavesdropper SNR >= lambda_th - epsilon} = 1 - CDF(lambda_th - epsilon)."""
    if epsilon < 0 or lambda_th - epsilon < 0:
        raise ValueError("need lambda_th - epsilon >= 0 and epsilon >= 0")
    return 1.0 - float(lambda_e_cdf(lambda_th - epsilon, spec))


@dataclass
class RateCdf:
    """Sorted Monte Carlo samples of both rates, with a quantile accessor."""

    secret_key_rates: np.ndarray
    secrecy_rates: np.ndarray
    params: dict = field(default_factory=dict)

    def rate_at_outage(self, p: float, kind: str = "secret_key") -> float:
        """Largest rate R whose empirical P{rate < R} does not exceed p."""
        if not 0 <= p <= 1:
            raise ValueError("outage probability must be in [0, 1]")
        samples = {
            "secret_key": self.secret_key_rates,
            "secrecy": self.secrecy_rates,
        }[kind]
        idx = min(int(np.floor(p * samples.size)), samples.size - 1)
        return float(samples[idx])

    def cdf_points(self, kind: str = "secret_key"):
        samples = {
            "secret_key": self.secret_key_rates,
            "secrecy": self.secrecy_rates,
        }[kind]
        return samples, np.arange(1, samples.size + 1) / samples.size


def sk_rate_outage_cdf(
    cfg: OfdmConfig,
    pdp_legit: PdpProfile,
    pdp_eave: PdpProfile,
    target_lambda_r_db: float,
    samples: int,
    rng: SeededRng,
    chunk: int = 8192,
) -> RateCdf:
    """Monte Carlo CDF of the achievable rates at a fixed legitimate SNR.

    Per draw: realize both channels, pick the best subcarrier, set the power
    so the legitimate SNR hits the dB target exactly, and evaluate both the
    secret-key rate and the (reconstructed) secrecy comparison rate.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if pdp_legit.length > cfg.cp_len:
        raise ValueError("legitimate PDP longer than the cyclic prefix")
    target = 10.0 ** (target_lambda_r_db / 10.0)
    sk = np.empty(samples)
    sec = np.empty(samples)
    overhead = 1.0 + cfg.cp_overhead
    # one stream per link keeps results independent of the chunk size
    rng_legit = rng.spawn(0)
    rng_eave = rng.spawn(1)
    done = 0
    while done < samples:
        take = min(chunk, samples - done)
        taps_r = sample_tap_matrix(pdp_legit, rng_legit, take)
        taps_e = sample_tap_matrix(pdp_eave, rng_eave, take)
        gains = np.abs(np.fft.fft(taps_r, n=cfg.subcarriers, axis=1))
        m_best = np.argmax(gains, axis=1)
        peak = gains[np.arange(take), m_best]
        power = target * overhead / peak**2
        lam_e = (power / overhead) * eavesdropper_column_energies(
            cfg, taps_e, m_best
        )
        sk[done:done + take] = secret_key_rates(target, lam_e)
        sec[done:done + take] = secrecy_rates(target, lam_e)
        done += take
    return RateCdf(
        secret_key_rates=np.sort(sk),
        secrecy_rates=np.sort(sec),
        params={
            "subcarriers": cfg.subcarriers,
            "cp_len": cfg.cp_len,
            "target_lambda_r_db": target_lambda_r_db,
            "samples": samples,
            "secrecy_curve": "reconstructed comparison curve",
        },
    )
