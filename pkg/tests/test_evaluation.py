import numpy as np
import pytest

from ifddsim import (
    ChannelModelConfig,
    DomainError,
    DuplexMode,
    FrameConfig,
    IfddLink,
    OfdmConfig,
    SweepPoint,
    TddLink,
    achievable_rate,
    bicm_mi,
    binary_entropy,
    rate_summary,
    speed_to_doppler,
    sweep,
)
from ifddsim.evaluation import evaluate_point, point_seeds

CFG_T = OfdmConfig(20e6, 256, 32)
CFG_I = OfdmConfig(20e6, 512, 64)


def test_binary_entropy_limits():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.11) == pytest.approx(0.49992, abs=1e-4)
    with pytest.raises(DomainError):
        binary_entropy(1.2)


def test_bicm_mi_error_free():
    bits = np.random.default_rng(0).integers(0, 2, 5000 * 2, dtype=np.uint8)
    assert bicm_mi(bits, bits) == pytest.approx(2.0)


def test_bicm_mi_useless_channel():
    rng = np.random.default_rng(1)
    tx = rng.integers(0, 2, 40000, dtype=np.uint8)
    rx = rng.integers(0, 2, 40000, dtype=np.uint8)
    assert bicm_mi(tx, rx) == pytest.approx(0.0, abs=0.01)
    # fully inverted bits also carry full information through a BSC
    assert bicm_mi(tx, 1 - tx) == pytest.approx(2.0)


def test_bicm_mi_known_crossover():
    # p_e = 0.11 per bit channel: 1 - h2(0.11) ~ 0.5 each, ~1.0 bpcu total
    rng = np.random.default_rng(2)
    tx = rng.integers(0, 2, 200_000, dtype=np.uint8)
    flips = rng.random(200_000) < 0.11
    rx = np.where(flips, 1 - tx, tx).astype(np.uint8)
    assert bicm_mi(tx, rx) == pytest.approx(1.0, abs=0.02)


def test_bicm_mi_input_validation():
    with pytest.raises(DomainError):
        bicm_mi(np.array([]), np.array([]))
    with pytest.raises(DomainError):
        bicm_mi(np.zeros(4), np.zeros(6))
    with pytest.raises(DomainError):
        bicm_mi(np.zeros(3), np.zeros(3))


def test_bicm_mi_monotone_in_ber():
    rng = np.random.default_rng(3)
    tx = rng.integers(0, 2, 100_000, dtype=np.uint8)
    last = 2.1
    for pe in (0.0, 0.02, 0.05, 0.1, 0.2, 0.5):
        rx = np.where(rng.random(100_000) < pe, 1 - tx, tx).astype(np.uint8)
        mi = bicm_mi(tx, rx)
        assert mi <= last + 1e-9
        last = mi


def test_achievable_rate_counting_oracle():
    """Error-free TDD at p=1/3, tau=0: rate from pure resource counting."""
    fc = FrameConfig(1 / 3, 0.0, DuplexMode.TDD)
    model = ChannelModelConfig(n_taps=1, n_antennas=4, doppler_hz=0.0)
    link = TddLink(CFG_T, model, fc, snr_db=None, seed=1)
    frames = [link.run_frame() for _ in range(3)][1:]
    rate = achievable_rate(frames, CFG_T, fc)
    # 6 DL symbols x 256 subcarriers x 2 bits over 9 blocks of 288 samples
    expected = 2.0 * (6 / 9) * (256 / 288)
    assert rate == pytest.approx(expected, rel=1e-12)


def test_achievable_rate_useless_channel_zero():
    fc = FrameConfig(1 / 3, 0.0, DuplexMode.TDD)
    model = ChannelModelConfig(n_taps=1, n_antennas=4, doppler_hz=0.0)
    link = TddLink(CFG_T, model, fc, snr_db=-60.0, seed=2)
    frames = [link.run_frame() for _ in range(6)][1:]
    assert achievable_rate(frames, CFG_T, fc) < 0.02
    assert 0.4 < rate_summary(frames, CFG_T, fc)["ber"] <= 0.5


def test_achievable_rate_rejects_mixed_configs():
    fc1 = FrameConfig(1 / 3, 0.0, DuplexMode.TDD)
    fc2 = FrameConfig(1 / 2, 0.0, DuplexMode.TDD)
    model = ChannelModelConfig(n_taps=1, n_antennas=2, doppler_hz=0.0)
    f1 = TddLink(CFG_T, model, fc1, snr_db=None, seed=3).run_frame()
    f2 = TddLink(CFG_T, model, fc2, snr_db=None, seed=3).run_frame()
    with pytest.raises(Exception):
        achievable_rate([f1, f2], CFG_T, fc1)


def test_transient_time_only_hurts_tdd():
    """Doubling tau_ST strictly lowers the TDD rate; IFDD has no tau term."""
    model = ChannelModelConfig(n_taps=11, n_antennas=8, doppler_hz=0.0)
    rates_t = []
    for tau in (1e-6, 2e-6):
        fc = FrameConfig(1 / 3, tau, DuplexMode.TDD)
        link = TddLink(CFG_T, model, fc, snr_db=20.0, seed=4)
        frames = [link.run_frame() for _ in range(4)][1:]
        rates_t.append(achievable_rate(frames, CFG_T, fc))
    assert rates_t[1] < rates_t[0]

    rates_i = []
    for tau in (1e-6, 2e-6):
        fc = FrameConfig(1 / 3, tau, DuplexMode.IFDD)
        link = IfddLink(CFG_I, model, fc, snr_db=20.0, seed=4)
        frames = [link.run_frame() for _ in range(4)][1:]
        rates_i.append(achievable_rate(frames, CFG_I, fc))
    assert rates_i[1] == pytest.approx(rates_i[0], rel=1e-12)


def test_speed_to_doppler():
    # 75 km/h at 2.1 GHz is about 145.9 Hz
    assert speed_to_doppler(75.0, 2.1e9) == pytest.approx(145.9, abs=0.1)
    assert speed_to_doppler(0.0, 2.1e9) == 0.0


def _desk_point(mode, speed=45.0, pilot_rate=1 / 3, n_frames=20):
    n_sub = 256 if mode == DuplexMode.TDD else 512
    cp = 32 if mode == DuplexMode.TDD else 64
    return SweepPoint(
        mode=mode, pilot_rate=pilot_rate, n_antennas=16, speed_kmh=speed,
        snr_db=3.0, n_sub=n_sub, cp_samples=cp, n_frames=n_frames,
        doppler_scale=4.0,
    )


def test_sweep_singleton_matches_direct_run():
    point = _desk_point(DuplexMode.TDD)
    seeds = point_seeds(7, 0, 1)
    row = evaluate_point(point, seeds)
    cfg = OfdmConfig(point.bandwidth_hz, point.n_sub, point.cp_samples)
    model = ChannelModelConfig(n_taps=11, n_antennas=16,
                               doppler_hz=point.doppler_hz)
    fc = FrameConfig(point.pilot_rate, point.transient_s, DuplexMode.TDD)
    link = TddLink(cfg, model, fc, snr_db=3.0, seed=seeds[0])
    frames = [link.run_frame() for _ in range(point.n_frames + 1)][1:]
    assert row.rate_bps_hz == pytest.approx(achievable_rate(frames, cfg, fc),
                                            rel=1e-12)
    assert row.flagged == 0


def test_sweep_rows_reproducible():
    points = [_desk_point(DuplexMode.TDD, n_frames=6),
              _desk_point(DuplexMode.IFDD, n_frames=6)]
    a = sweep(points, master_seed=5, n_seeds=2)
    b = sweep(points, master_seed=5, n_seeds=2)
    for ra, rb in zip(a, b):
        assert ra == rb


def test_sweep_flags_bad_point_and_continues():
    bad = SweepPoint(mode=DuplexMode.TDD, pilot_rate=1 / 3, n_antennas=2,
                     speed_kmh=0.0, snr_db=3.0, n_sub=256, cp_samples=4,
                     channel_order=10, n_frames=2)  # order > CP
    good = _desk_point(DuplexMode.TDD, n_frames=2)
    rows = sweep([bad, good], master_seed=1, n_seeds=1)
    assert rows[0].flagged == 1 and np.isnan(rows[0].rate_bps_hz)
    assert rows[1].flagged == 0 and np.isfinite(rows[1].rate_bps_hz)


def test_rate_reports_within_modulation_capacity():
    for mode in (DuplexMode.TDD, DuplexMode.IFDD):
        row = evaluate_point(_desk_point(mode, n_frames=8), [11])
        assert 0.0 <= row.ber <= 0.5
        assert 0.0 <= row.mi_bpcu <= 2.0
        cfg_sym = 288 if mode == DuplexMode.TDD else 576
        n_dl = 256 if mode == DuplexMode.TDD else 340
        duty = n_dl / cfg_sym  # DL REs per sample upper bound
        assert row.rate_bps_hz <= 2.0 * duty * 1.02
