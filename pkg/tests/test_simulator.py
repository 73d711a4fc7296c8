import math

import numpy as np
import pytest

from cdmaopt import (
    DimensionMismatch,
    SequenceSet,
    SimConfig,
    SystemParams,
    TauOutOfRange,
    TrialDraw,
    aperiodic_xcorr,
    interference_term,
    run_ber,
    run_trial,
)
from cdmaopt.simulator import correlator_outputs, delay_table, interference_samples
from cdmaopt.spectral import total_interference

from oracles import correlator_integral, q_function, random_unit_sphere


def test_xcorr_examples():
    s = np.array([1, -1, 1, 1, -1])
    assert aperiodic_xcorr(s, s, 0) == 5
    assert aperiodic_xcorr(s, s, 5) == 0 and aperiodic_xcorr(s, s, -5) == 0
    assert aperiodic_xcorr([1, 1], [1, -1], 1) == 1
    with pytest.raises(DimensionMismatch):
        aperiodic_xcorr([1, 1], [1, 1, 1], 0)


def test_xcorr_conjugates_desired_user(rng):
    a, b = random_unit_sphere(rng, 2, 6)
    for l in range(-5, 6):
        direct = sum(a[n + l] * np.conj(b[n]) for n in range(6) if 0 <= n + l < 6)
        assert aperiodic_xcorr(a, b, l) == pytest.approx(direct, abs=1e-12)


def test_delay_table_indexing(rng):
    a, b = random_unit_sphere(rng, 2, 7)
    t = delay_table(a, b)
    assert t.shape == (15,)
    for m in range(-7, 8):
        assert t[m + 7] == pytest.approx(aperiodic_xcorr(a, b, -m), abs=1e-12)


def test_interference_term_trivial_cases():
    s = np.array([1.0, -1.0, 1.0, 1.0])
    assert interference_term(s, s, 0.0, 0.0, -1, 1) == pytest.approx(4.0)
    assert interference_term(s, s, 0.0, 0.0, 1, 1, Tc=0.25) == pytest.approx(1.0)
    a, b = np.array([1.0, -1.0, -1.0]), np.array([1.0, 1.0, -1.0])
    assert interference_term(a, b, 1.3, math.pi / 2, 1, -1) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(TauOutOfRange):
        interference_term(s, s, 4.0, 0.0, 1, 1)


def test_interference_term_half_chip_example():
    a, b = np.array([1.0, 1.0]), np.array([1.0, -1.0])
    oracle = correlator_integral(a, b, 0.5, 0.0, 1, 1)
    assert interference_term(a, b, 0.5, 0.0, 1, 1) == pytest.approx(oracle, abs=1e-6 * 2)


def test_interference_term_matches_quadrature(rng):
    for _ in range(30):
        N = int(rng.integers(2, 20))
        Tc = float(rng.uniform(0.1, 3))
        a, b = random_unit_sphere(rng, 2, N)
        tau = float(rng.uniform(0, N * Tc))
        psi = float(rng.uniform(0, 2 * np.pi))
        bp, bc = rng.choice([-1, 1], size=2)
        got = interference_term(a, b, tau, psi, bp, bc, Tc)
        ref = correlator_integral(a, b, tau, psi, bp, bc, Tc)
        assert abs(got - ref) <= 1e-6 * N * Tc


def test_run_trial_noise_free_single_user():
    seqs = SequenceSet.from_array([[1, -1, 1]])
    p = SystemParams(N=3, K=1, P=2.0)
    draw = TrialDraw(np.array([]), np.array([]), np.array([]), np.array([]), -1, 0.7)
    z, ok = run_trial(seqs, 0, p, draw)
    assert z == pytest.approx(-math.sqrt(p.P / 2) * p.T) and ok


def test_run_trial_agrees_with_vectorised_engine(gold7):
    from cdmaopt.simulator import _draw_chunk, _stream

    p = SystemParams.from_ebn0_db(31, 7, 3.0)
    z, b = correlator_outputs(gold7, 2, p, 5, seed=8)
    d = _draw_chunk(_stream(8, 2, 0, 0), 5, 6, p.T)
    for u in range(5):
        draw = TrialDraw(d["tau"][u], d["psi"][u], d["b_prev"][u], d["b_cur"][u], int(d["b_i"][u]), float(d["noise"][u]))
        zu, ok = run_trial(gold7, 2, p, draw)
        assert zu == pytest.approx(z[u], abs=1e-9)
        assert ok == (b[u] * z[u] > 0)


def test_interference_moments(gold7):
    p = SystemParams(31, 7)
    I = interference_samples(gold7, 0, p, 200_000, seed=3)
    se = I.std() / math.sqrt(I.size)
    assert abs(I.mean()) <= 3 * se
    predicted = (p.P * p.T**2 / 2) * total_interference(gold7)[0] / (6 * 31**2)
    assert I.var() / predicted == pytest.approx(1.0, abs=0.03)


def test_correlator_mean_and_noise_variance():
    seqs = SequenceSet.from_array([[1, 1, -1, 1]])
    p = SystemParams(N=4, K=1, P=3.0, N0=2.0)
    z, b = correlator_outputs(seqs, 0, p, 400_000, seed=1)
    zp = z[b == 1]
    target = p.T * math.sqrt(p.P / 2)
    assert abs(zp.mean() - target) <= 3 * zp.std() / math.sqrt(zp.size)
    noise = z - b * target
    assert noise.var() == pytest.approx(p.noise_variance, rel=0.02)


def test_single_user_ber_near_q_function():
    seqs = SequenceSet.from_array([[1, -1, -1, 1, 1]])
    cfg = SimConfig(U=400_000, ebn0_db=[4.0], seed=12)
    rep = run_ber(seqs, SystemParams(5, 1), cfg, "awgn")
    expected = q_function(math.sqrt(2 * 10 ** 0.4))
    se = math.sqrt(expected * (1 - expected) / cfg.U)
    assert abs(rep.rows[0].ber - expected) <= 3 * se


def test_q_function_reference_value():
    assert q_function(math.sqrt(2 * 4.0)) == pytest.approx(2.339e-3, rel=1e-3)


def test_run_ber_deterministic_and_exact_ratio(gold7):
    cfg = SimConfig(U=3000, ebn0_db=[2.0, 5.0], seed=44)
    a = run_ber(gold7, SystemParams(31, 7), cfg, "g")
    b = run_ber(gold7, SystemParams(31, 7), cfg, "g")
    assert a.to_csv() == b.to_csv()
    for r in a.rows:
        assert r.ber == r.errors / (r.trials * 7)
    assert a.to_csv().splitlines()[0] == "label,ebn0_db,trials,errors,ber,seed"


def test_grid_points_are_order_independent(gold7):
    p = SystemParams(31, 7)
    full = run_ber(gold7, p, SimConfig(U=2000, ebn0_db=[1.0, 6.0], seed=5))
    # Same grid index -> same stream, regardless of the other points.
    solo = run_ber(gold7, p, SimConfig(U=2000, ebn0_db=[1.0], seed=5))
    assert full.rows[0].errors == solo.rows[0].errors


def test_subset_of_desired_users(gold7):
    rep = run_ber(gold7, SystemParams(31, 7), SimConfig(U=1000, ebn0_db=[3.0], seed=1, desired_users=[0, 3]))
    assert rep.rows[0].users == 2
    assert rep.rows[0].ber == rep.rows[0].errors / 2000


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(U=0, ebn0_db=[1.0], seed=1)
