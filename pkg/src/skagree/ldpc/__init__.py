"""LDPC reconciliation codes: construction, decoding, DE, FER simulation."""

from .alist import read_alist, write_alist
from .de import (
    DensityEvolutionResult,
    decoding_threshold,
    density_evolution,
    psi,
    psi_inv,
)
from .decoder import DecodeResult, SumProductDecoder, sum_product_decode
from .encoder import Gf2Encoder, derive_encoder
from .modem import awgn_qpsk_llrs
from .peg import ParityCheckMatrix, peg_construct
from .scramble import FrameScrambler, descramble, scramble
from .sim import (
    FerBerEstimate,
    FrameSimulator,
    SecurityGapResult,
    fer_ber_sim,
    security_gap,
)
