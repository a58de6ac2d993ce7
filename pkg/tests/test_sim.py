import pytest

from skagree.channels import SeededRng
from skagree.ldpc import fer_ber_sim, peg_construct, security_gap
from skagree.ldpc.sim import wilson_halfwidth


@pytest.fixture(scope="module")
def small_code():
    return peg_construct(1024, 0.25, 3, SeededRng(77))


def test_far_above_threshold_fer_is_small(small_code):
    # +3 dB over the ensemble threshold (~-2 dB)
    est = fer_ber_sim(
        small_code, 10 ** (0.1), max_frames=1000, target_frame_errors=1000,
        max_iter=60, rng=SeededRng(1),
    )
    assert est.fer < 1e-2
    assert est.frames == 1000


def test_fer_monotone_in_snr(small_code):
    grid_db = [-3.0, -2.0, -1.0, 0.0]
    fers = []
    for snr_db in grid_db:
        est = fer_ber_sim(
            small_code, 10 ** (snr_db / 10), max_frames=400,
            target_frame_errors=400, max_iter=40, rng=SeededRng(2),
        )
        fers.append((est.fer, est.confidence_halfwidth))
    for (f_lo, hw_lo), (f_hi, hw_hi) in zip(fers[:-1], fers[1:]):
        assert f_hi <= f_lo + hw_lo + hw_hi


def test_eavesdropper_ber_half_when_fer_saturates(small_code):
    est = fer_ber_sim(
        small_code, 10 ** (-0.5), max_frames=200, target_frame_errors=200,
        max_iter=30, rng=SeededRng(3),
    )
    assert est.fer > 0.99
    assert 0.45 < est.ber < 0.55


def test_early_stop_at_target_errors(small_code):
    est = fer_ber_sim(
        small_code, 10 ** (-0.45), max_frames=5000, target_frame_errors=10,
        max_iter=30, rng=SeededRng(4),
    )
    assert est.frame_errors >= 10
    assert est.frames < 5000
    # stop frame is the first prefix reaching the target
    assert est.frame_errors == 10 or est.frames % 128 == 0


def test_deterministic_given_seed(small_code):
    kwargs = dict(
        max_frames=100, target_frame_errors=100, max_iter=25,
    )
    a = fer_ber_sim(small_code, 10 ** (-0.2), rng=SeededRng(5), **kwargs)
    b = fer_ber_sim(small_code, 10 ** (-0.2), rng=SeededRng(5), **kwargs)
    assert a == b


def test_batch_size_does_not_change_result(small_code):
    a = fer_ber_sim(
        small_code, 10 ** (-0.2), 96, 96, 25, SeededRng(6), batch=32,
    )
    b = fer_ber_sim(
        small_code, 10 ** (-0.2), 96, 96, 25, SeededRng(6), batch=96,
    )
    assert a == b


def test_worker_count_does_not_change_result(small_code):
    a = fer_ber_sim(small_code, 10 ** (-0.2), 64, 64, 25, SeededRng(7), workers=1)
    b = fer_ber_sim(small_code, 10 ** (-0.2), 64, 64, 25, SeededRng(7), workers=2)
    assert a == b


def test_wilson_halfwidth_known_value():
    # 5 errors in 100 trials, z = 1.96: standard Wilson interval
    hw = wilson_halfwidth(5, 100)
    assert abs(hw - 0.0436) < 5e-3
    assert wilson_halfwidth(0, 0) == 1.0


def test_security_gap_relaxed_targets(small_code):
    result = security_gap(
        small_code, fer_reliable=0.05, fer_secure=0.8, rng=SeededRng(8),
        step_db=0.25, max_frames=400, target_frame_errors=60, max_iter=40,
    )
    assert result.gap_db > 0
    assert result.reliable_snr_db > result.secure_snr_db
    assert result.gap_db < 3.0
    assert len(result.points) >= 2


def test_security_gap_rejects_degenerate_targets(small_code):
    with pytest.raises(ValueError):
        security_gap(small_code, 0.5, 0.5, SeededRng(9))


def test_invalid_frame_counts(small_code):
    with pytest.raises(ValueError):
        fer_ber_sim(small_code, 1.0, 0, 1, 10, SeededRng(0))
