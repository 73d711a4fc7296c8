import math

import numpy as np
import pytest

from cdmaopt import (
    SequenceSet,
    SystemParams,
    harmonic_mean_sq_sinr,
    pair_interference,
    random_sequences,
    run_algorithm1,
    solve_single,
)
from cdmaopt.metrics import mean_squared_sinr
from cdmaopt.optimizer import objective

from oracles import random_complex_set, random_unit_sphere


def user_objective(seqs, i, s):
    return sum(pair_interference(s, seqs[k]) for k in range(seqs.K) if k != i)


def test_single_user_zero_matrix():
    seqs = SequenceSet.from_array([[1, -1, 1, 1]])
    sol = solve_single(seqs, 0)
    assert sol.lambda_min == 0 and sol.objective == 0
    assert abs(np.vdot(sol.sequence.chips, sol.sequence.chips).real - 4) < 1e-12


def test_worked_case(all_ones_pair):
    sol = solve_single(all_ones_pair, 0)
    assert sol.lambda_min == pytest.approx(1.0, abs=1e-13)
    np.testing.assert_allclose(sol.sequence.chips, [1, -1], atol=1e-14)
    assert sol.objective == pytest.approx(user_objective(all_ones_pair, 0, sol.sequence.chips), rel=1e-8)


def test_solution_beats_incumbent_and_random_candidates(rng):
    for _ in range(20):
        K, N = int(rng.integers(2, 6)), int(rng.integers(2, 14))
        seqs = random_complex_set(rng, K, N)
        i = int(rng.integers(K))
        sol = solve_single(seqs, i)
        best = user_objective(seqs, i, sol.sequence.chips)
        assert best == pytest.approx(sol.objective, rel=1e-8, abs=1e-12)
        assert sol.objective <= user_objective(seqs, i, seqs[i].chips) * (1 + 1e-12)
        for cand in random_unit_sphere(rng, 200, N):
            assert user_objective(seqs, i, cand) >= best - 1e-8 * max(best, 1.0)


def test_single_user_run():
    seqs = SequenceSet.from_array([[1, 1, -1]])
    out, trace = run_algorithm1(seqs, L=5)
    np.testing.assert_allclose(out[0].chips, solve_single(seqs, 0).sequence.chips)
    assert np.all(trace.objectives == 0)


def test_monotone_from_random_complex_start(rng):
    seqs = random_complex_set(rng, 5, 12)
    _, trace = run_algorithm1(seqs, L=10)
    f = trace.objectives
    assert np.all(f[1:] <= f[:-1] * (1 + 1e-9) + 1e-12)


def test_sweep_composition():
    seqs = random_sequences(4, 9, seed=2)
    once, _ = run_algorithm1(seqs, L=1)
    twice, _ = run_algorithm1(once, L=1)
    direct, _ = run_algorithm1(seqs, L=2)
    assert twice == direct


def test_fixed_point_stops_early():
    seqs = random_sequences(3, 8, seed=4)
    conv, trace = run_algorithm1(seqs, L=400, eps=1e-6)
    assert trace.converged and len(trace.sweeps) < 400
    again, t2 = run_algorithm1(conv, L=1, eps=1e-6)
    f0, f1 = objective(conv), t2.objectives[-1]
    assert abs(f1 - f0) <= 1e-9 * max(f0, 1e-300) + 1e-15


def test_snapshots(gold7):
    final, trace = run_algorithm1(gold7, L=3, snapshot_at=(0, 1, 3))
    assert trace.snapshots[0] == gold7 and trace.snapshots[3] == final
    assert [u.user for u in trace.updates[:7]] == list(range(7))


def test_argument_validation(gold7):
    with pytest.raises(ValueError):
        run_algorithm1(gold7, L=0)
    with pytest.raises(ValueError):
        run_algorithm1(gold7, L=1, eps=0)


def test_harmonic_mean_cases(gold7):
    p = SystemParams(N=4, K=1, N0=0.3)
    single = SequenceSet.from_array([[1, 1, 1, 1]])
    assert harmonic_mean_sq_sinr(single, p) == pytest.approx(2 * p.P * p.T / p.N0)
    assert harmonic_mean_sq_sinr(single, p.with_noise(0.0)) == math.inf
    params = SystemParams.from_ebn0_db(31, 7, 6.0)
    arith, harm = mean_squared_sinr(gold7, params)
    assert harm <= arith
