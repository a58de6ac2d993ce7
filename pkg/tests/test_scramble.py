import numpy as np

from skagree.channels import SeededRng
from skagree.ldpc import FrameScrambler, descramble, scramble


def test_round_trip_identity():
    rng = SeededRng(1)
    for trial in range(5):
        block = rng.bits(1000)
        assert np.array_equal(descramble(scramble(block, seed=42), seed=42), block)


def test_zero_block_round_trip():
    zero = np.zeros(64, dtype=np.uint8)
    assert not descramble(scramble(zero, 3), 3).any()


def test_scrambling_actually_permutes_content():
    block = SeededRng(2).bits(256)
    assert not np.array_equal(scramble(block, 7), block)


def test_single_error_avalanche():
    # one flipped bit in the scrambled domain lands near 50% errors after
    # descrambling, averaged over positions
    k = 600
    scr = FrameScrambler(k, seed=11)
    rng = SeededRng(12)
    fractions = []
    for _ in range(1000):
        msg = rng.bits(k)
        coded = scr.apply(msg)
        pos = int(rng.uniform() * k)
        coded[pos] ^= 1
        back = scr.invert_bits(coded)
        fractions.append(np.mean(back != msg))
    mean_fraction = float(np.mean(fractions))
    assert 0.45 < mean_fraction < 0.55


def test_matrix_invertibility():
    scr = FrameScrambler(128, seed=5)
    prod = (scr.matrix.astype(int) @ scr.inverse.astype(int)) % 2
    assert np.array_equal(prod, np.eye(128, dtype=int))


def test_different_seeds_different_maps():
    block = SeededRng(3).bits(128)
    assert not np.array_equal(scramble(block, 1), scramble(block, 2))
