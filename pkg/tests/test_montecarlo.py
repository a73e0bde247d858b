import math

import numpy as np
import pytest

from wiretap_bench.channel import WiretapChannel, capacities
from wiretap_bench.errors import ConfigError
from wiretap_bench.montecarlo import (MAX_MESSAGES, SimConfig, confusion_count,
                                      generate_codebook, ml_decode, run_trials)


def test_codebook_single():
    cb = generate_codebook(8, 1, 2.0, np.random.default_rng(0))
    assert cb.shape == (1, 8)
    assert ml_decode(cb, np.full(8, 100.0)) == 0


def test_codebook_deterministic():
    a = generate_codebook(10, 64, 1.0, np.random.default_rng(123))
    b = generate_codebook(10, 64, 1.0, np.random.default_rng(123))
    assert np.array_equal(a, b)


def test_codebook_power():
    cb = generate_codebook(16, 65536, 1.0, np.random.default_rng(5))
    sd = math.sqrt(2.0 / cb.size)  # std of the mean of chi-square(1) draws
    assert abs(np.mean(cb ** 2) - 1.0) <= 3 * sd


def test_codebook_guard():
    with pytest.raises(ConfigError):
        generate_codebook(4, MAX_MESSAGES + 1, 1.0, np.random.default_rng(0))


def test_ml_decode_exact_codeword():
    cb = generate_codebook(6, 50, 1.0, np.random.default_rng(1))
    for k in (0, 17, 49):
        assert ml_decode(cb, cb[k]) == k


def test_ml_decode_hand_example():
    cb = np.array([[1.0, 1.0], [-1.0, -1.0]])
    assert ml_decode(cb, np.array([0.9, 1.1])) == 0


def test_ml_decode_tie_goes_low():
    cb = np.array([[1.0, 0.0], [-1.0, 0.0], [1.0, 0.0]])
    assert ml_decode(cb, np.array([0.0, 0.0])) == 0
    assert ml_decode(cb, np.array([1.0, 0.0])) == 0


def test_confusion_count_edges():
    cb = generate_codebook(8, 1, 1.0, np.random.default_rng(2))
    assert confusion_count(cb, cb[0], 0, 1.5, 0.05) == 0
    cb = generate_codebook(8, 40, 1.0, np.random.default_rng(3))
    assert confusion_count(cb, cb[3], 3, 1.5, 1e12) == 39


def test_confusion_count_brute_force():
    rng = np.random.default_rng(4)
    cb = generate_codebook(5, 300, 1.0, rng)
    z = cb[7] + rng.standard_normal(5) * math.sqrt(1.5)
    radius_sq = 5 * 1.5 * 1.05
    brute = sum(1 for k in range(300)
                if k != 7 and sum((z[i] - cb[k, i]) ** 2 for i in range(5)) <= radius_sq)
    assert confusion_count(cb, z, 7, 1.5, 0.05) == brute


def test_noiseless_bob():
    ch = WiretapChannel(1e-12, 1.5, 1.0)
    res = run_trials(SimConfig(10, 1.0, ch, 50, 3))
    assert res.pe_bob == 0.0


def test_config_errors(sim_channel):
    with pytest.raises(ConfigError):
        run_trials(SimConfig(16, 1.0, sim_channel, 0, 1))
    with pytest.raises(ConfigError):
        run_trials(SimConfig(30, 1.0, sim_channel, 1, 1))
    with pytest.raises(ConfigError):
        run_trials(SimConfig(8, 1.0, sim_channel, 1, -1))


def test_deterministic_across_threads(sim_channel):
    cfg = SimConfig(10, 1.0, sim_channel, 40, 77)
    a = run_trials(cfg, threads=1)
    b = run_trials(cfg, threads=4)
    c = run_trials(cfg)
    assert a == b == c


def test_seed_changes_result(sim_channel):
    a = run_trials(SimConfig(10, 1.0, sim_channel, 40, 1))
    b = run_trials(SimConfig(10, 1.0, sim_channel, 40, 2))
    assert a != b


def test_fixed_codebook_mode(sim_channel):
    cfg = SimConfig(10, 1.0, sim_channel, 60, 8, fresh_codebook_per_trial=False)
    res = run_trials(cfg)
    assert res == run_trials(cfg, threads=3)
    assert 0 <= res.pe_bob <= 1 and 0 <= res.pe_eve <= 1


def test_result_fields(sim_channel):
    res = run_trials(SimConfig(12, 1.0, sim_channel, 100, 11))
    c2 = capacities(sim_channel).c2
    assert res.messages == 4096
    assert res.predicted_confusion == pytest.approx(4095 * 2 ** (-12 * c2))
    assert res.sphere_estimate == pytest.approx(2 ** (12 * (1 - c2)))
    assert res.noise_outliers == 0
    assert res.confusion_mean >= 0
    for p, ci in ((res.pe_bob, res.pe_bob_ci), (res.pe_eve, res.pe_eve_ci)):
        assert ci == pytest.approx(1.959963984540054 * math.sqrt(p * (1 - p) / 100))


def test_error_trends_over_n(sim_channel):
    # R = 0.8 lies strictly between C2 ~ 0.37 and C1 ~ 1.73
    rows = [run_trials(SimConfig(n, 0.8, sim_channel, 300, 2024)) for n in (6, 11, 16)]
    for a, b in zip(rows, rows[1:]):
        slack = a.pe_bob_ci + b.pe_bob_ci
        assert b.pe_bob <= a.pe_bob + slack
        slack = a.pe_eve_ci + b.pe_eve_ci
        assert b.pe_eve >= a.pe_eve - slack
    assert rows[-1].pe_eve > rows[0].pe_eve
    assert rows[-1].pe_bob < rows[0].pe_bob


def test_confusion_rate_trend(sim_channel):
    c2 = capacities(sim_channel).c2
    rate = 0.8
    tol = {12: 0.3, 16: 0.2}
    for n, t in tol.items():
        res = run_trials(SimConfig(n, rate, sim_channel, 200, 99))
        assert abs(math.log2(res.confusion_mean + 1) / n - (rate - c2)) <= t
