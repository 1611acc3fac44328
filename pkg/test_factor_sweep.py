#!/usr/bin/env python3
"""
Testaa koetekijäpyyhkäisy, alkulukutyökalut, tekijöinti, haamut ja f-skannaus

Ajo: pytest test_factor_sweep.py
"""

import math
import time

import numpy as np
import pytest

import exponential_sums
import factor_sweep
from exponential_sums import FACTOR, NON_FACTOR, SumSpec, gauss_sum, truncation_bound
from factor_sweep import (
    FScanConfig, SweepConfig, count_primes, enumerate_trials, f_scan, factorize,
    find_ghosts, is_prime, primes_up_to, suppression_curve, sweep,
)

EXAMPLE_N = 157573
EXAMPLE_FACTORS = [13, 17, 23, 31]


# =============================================================================
# Alkuluvut
# =============================================================================

def test_enumerate_trials_examples():
    assert enumerate_trials(16) == [2, 3, 4]
    assert enumerate_trials(35 ** 2, 'primes') == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    assert enumerate_trials(4, 'primes') == [2]
    assert enumerate_trials(3) == []


def test_enumerate_trials_rejects_bad_input():
    with pytest.raises(ValueError):
        enumerate_trials(1)
    with pytest.raises(ValueError):
        enumerate_trials(100, 'odd')


def test_count_primes_examples():
    assert count_primes(35)[0] == 11
    assert count_primes(2)[0] == 1
    exact, estimate = count_primes(10 ** 6)
    assert exact == 78498
    assert estimate == pytest.approx(72382.4, abs=0.1)
    with pytest.raises(ValueError):
        count_primes(1)


def test_sieve_agrees_with_miller_rabin():
    sieve = set(primes_up_to(20000).tolist())
    for n in range(20001):
        assert is_prime(n) == (n in sieve), n


def test_is_prime_large_values():
    assert is_prime(2 ** 61 - 1)
    assert not is_prime((10 ** 9 + 7) * (10 ** 9 + 9))
    assert not is_prime(3215031751)  # vahva pseudoalkuluku kannoille 2, 3, 5, 7


def test_primes_policy_matches_sieve_restriction():
    rng = np.random.default_rng(5)
    for N in rng.integers(2, 10 ** 8, size=100):
        N = int(N)
        expected = [l for l in range(2, math.isqrt(N) + 1) if is_prime(l)]
        assert enumerate_trials(N, 'primes') == expected


# =============================================================================
# SweepConfig ja sweep
# =============================================================================

def test_sweep_config_defaults():
    config = SweepConfig(EXAMPLE_N)
    assert config.l_min == 2
    assert config.l_max == math.isqrt(EXAMPLE_N)
    assert config.truncation == 20


@pytest.mark.parametrize("kwargs", [
    dict(N=10, l_min=9, l_max=2),
    dict(N=10, l_min=1, l_max=3),
    dict(N=10, l_min=2, l_max=11),
    dict(N=10, trial_policy='odd'),
    dict(N=10, M=-1),
    dict(N=10, threshold=1.0),
    dict(N=10, samples=5),
    dict(N=10, samples=0, seed=1),
    dict(N=10, j=1),
])
def test_sweep_config_validation(kwargs):
    with pytest.raises(ValueError):
        SweepConfig(**kwargs)


def test_example_sweep():
    start = time.perf_counter()
    rows = sweep(SweepConfig(EXAMPLE_N, 2, 35, M=20))
    assert time.perf_counter() - start < 1.0
    assert [r.l for r in rows] == list(range(2, 36))
    assert [r.l for r in rows if r.verdict == FACTOR] == EXAMPLE_FACTORS
    for r in rows:
        if r.verdict == FACTOR:
            assert abs(r.magnitude - 1.0) <= 1e-12
            assert r.remainder == 0
        else:
            assert r.magnitude < 1.0 - 1e-6
            assert r.remainder != 0
        assert r.agrees


def test_example_sweep_row_18():
    row = sweep(SweepConfig(EXAMPLE_N, 18, 18, M=20))[0]
    assert row.verdict == NON_FACTOR
    assert row.remainder == 1
    assert row.magnitude == pytest.approx(0.118825, abs=1e-6)


def test_small_sweep():
    rows = sweep(SweepConfig(16, 2, 4))
    assert [(r.l, r.verdict) for r in rows] == [(2, FACTOR), (3, NON_FACTOR), (4, FACTOR)]


def test_sweep_primes_only():
    rows = sweep(SweepConfig(EXAMPLE_N, 2, 35, trial_policy='primes'))
    assert [r.l for r in rows] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    assert [r.l for r in rows if r.verdict == FACTOR] == EXAMPLE_FACTORS


def test_sweep_verdict_soundness():
    for N in range(2, 2001):
        for r in sweep(SweepConfig(N)):
            assert (r.verdict == FACTOR) == (N % r.l == 0), (N, r.l)
            assert (r.magnitude == 1.0) == (N % r.l == 0), (N, r.l)
            assert r.remainder == N % r.l


def test_sweep_parallel_matches_serial():
    config = SweepConfig(EXAMPLE_N, 2, 396)
    assert sweep(config, workers=4) == sweep(config)


def test_sweep_sampled_is_reproducible():
    config = SweepConfig(EXAMPLE_N, 2, 35, M=20, samples=20, seed=3)
    rows = sweep(config)
    assert rows == sweep(config, workers=3)
    assert [r.l for r in rows if r.magnitude == 1.0] == EXAMPLE_FACTORS


def test_sweep_generalized_power():
    rows = sweep(SweepConfig(EXAMPLE_N, 2, 35, M=20, j=3))
    assert [r.l for r in rows if r.magnitude == 1.0] == EXAMPLE_FACTORS


def test_sweep_logs_disagreement(caplog):
    # Yksi termi: jokainen ei-tekijä näyttää tekijältä itseisarvon perusteella
    rows = sweep(SweepConfig(EXAMPLE_N, 18, 19, M=0))
    assert not any(r.agrees for r in rows)
    assert 'eri mieltä' in caplog.text


# =============================================================================
# Tekijöinti
# =============================================================================

@pytest.mark.parametrize("N, expected", [
    (EXAMPLE_N, EXAMPLE_FACTORS), (8, [2, 2, 2]), (97, [97]), (2, [2]),
    (2 ** 31 - 1, [2 ** 31 - 1]), (999983 * 1000003, [999983, 1000003]),
])
def test_factorize_examples(N, expected):
    assert factorize(N) == expected


def test_factorize_all_numbers_to_10_5():
    primes = set(primes_up_to(10 ** 5).tolist())
    for N in range(2, 10 ** 5 + 1):
        factors = factorize(N)
        assert math.prod(factors) == N
        assert factors == sorted(factors)
        assert all(p in primes for p in factors), N


def test_factorize_random_up_to_10_12():
    rng = np.random.default_rng(17)
    for N in rng.integers(2, 10 ** 12, size=1000):
        N = int(N)
        factors = factorize(N)
        assert math.prod(factors) == N
        assert factors == sorted(factors)
        assert all(is_prime(p) for p in factors), N


def test_factorize_rejects_small():
    with pytest.raises(ValueError):
        factorize(1)


# =============================================================================
# Haamutekijät
# =============================================================================

def test_example_ghosts_are_suppressed():
    report = find_ghosts(EXAMPLE_N, M_small=1)
    assert report.ghosts
    assert report.M_suppressed == 20
    assert all(EXAMPLE_N % l for l, _ in report.ghosts)
    assert all(mag >= 0.95 for _, mag in report.ghosts)
    assert report.max_nonfactor_magnitude_at_suppressed < report.max_nonfactor_magnitude_at_small
    assert report.max_nonfactor_magnitude_at_suppressed == pytest.approx(0.707908035586595, abs=1e-9)


def test_single_term_makes_every_non_factor_a_ghost():
    report = find_ghosts(EXAMPLE_N, M_small=0)
    nonfactors = [l for l in range(2, math.isqrt(EXAMPLE_N) + 1) if EXAMPLE_N % l]
    assert [l for l, _ in report.ghosts] == nonfactors
    assert all(mag == 1.0 for _, mag in report.ghosts)


def test_find_ghosts_is_evaluated_in_bounded_blocks(monkeypatch):
    expected = find_ghosts(EXAMPLE_N, M_small=1)
    calls = []
    batch = factor_sweep.trial_partial_amplitudes

    def recording(N, trials, M, j=2):
        calls.append((len(trials), M))
        return batch(N, trials, M, j)

    monkeypatch.setattr(exponential_sums, 'AMPLITUDE_BLOCK_ELEMENTS', 100)
    monkeypatch.setattr(factor_sweep, 'trial_partial_amplitudes', recording)
    report = find_ghosts(EXAMPLE_N, M_small=1)

    assert len(calls) > 1
    assert all(rows * (M + 1) <= 100 for rows, M in calls)
    assert [l for l, _ in report.ghosts] == [l for l, _ in expected.ghosts]
    for (_, mag), (_, mag_expected) in zip(report.ghosts, expected.ghosts):
        assert mag == pytest.approx(mag_expected, abs=1e-15)
    assert report.max_nonfactor_magnitude_at_small == pytest.approx(
        expected.max_nonfactor_magnitude_at_small, abs=1e-15)
    assert report.max_nonfactor_magnitude_at_suppressed == pytest.approx(
        expected.max_nonfactor_magnitude_at_suppressed, abs=1e-15)


def test_find_ghosts_small_M_above_truncation_bound():
    report = find_ghosts(10000, M_small=30)
    assert report.M_suppressed == 10
    nonfactors = [l for l in range(2, 101) if 10000 % l]
    small = max(gauss_sum(SumSpec(10000, l, 30)).magnitude for l in nonfactors)
    suppressed = max(gauss_sum(SumSpec(10000, l, 10)).magnitude for l in nonfactors)
    assert report.max_nonfactor_magnitude_at_small == pytest.approx(small, abs=1e-13)
    assert report.max_nonfactor_magnitude_at_suppressed == pytest.approx(suppressed, abs=1e-13)


def test_find_ghosts_without_trials():
    report = find_ghosts(3)
    assert report.ghosts == []
    assert report.max_nonfactor_magnitude_at_small == 0.0


def test_find_ghosts_validation():
    with pytest.raises(ValueError):
        find_ghosts(EXAMPLE_N, M_small=-1)
    with pytest.raises(ValueError):
        find_ghosts(EXAMPLE_N, ghost_threshold=0.0)


def test_suppression_curve_examples():
    assert all(mag == 1.0 for _, mag in suppression_curve(EXAMPLE_N, 17, 20))
    curve = suppression_curve(10, 4, 2)
    assert [M for M, _ in curve] == [0, 1, 2]
    assert curve[0][1] == 1.0
    assert curve[2][1] == pytest.approx(1 / 3, abs=1e-15)


def test_suppression_curve_matches_gauss_sum():
    curve = suppression_curve(EXAMPLE_N, 18, 20)
    for M, mag in curve:
        assert mag == pytest.approx(gauss_sum(SumSpec(EXAMPLE_N, 18, M)).magnitude, abs=1e-13)


# =============================================================================
# f-skannaus
# =============================================================================

def test_integer_f_counterexample_scan():
    result = f_scan(FScanConfig(9267.5, 9269.5, 0.25, M=20, N=EXAMPLE_N))
    assert len(result.grid) == 9
    assert [p.f for p in result.peaks] == [9268.0, 9269.0]
    for p in result.peaks:
        assert abs(p.magnitude - 1.0) <= 1e-12
    ghost, real = result.peaks
    assert not ghost.integer_trial
    assert f"{ghost.trial:.7f}" == "17.0018343"
    assert real.integer_trial
    assert real.trial == 17.0


def test_scan_fractional_window_has_no_peak():
    result = f_scan(FScanConfig(0.4, 0.6, 0.1, M=2, N=EXAMPLE_N))
    assert len(result.grid) == 3
    assert result.peaks == []
    f_best, mag_best = max(result.grid, key=lambda point: point[1])
    assert f_best == pytest.approx(0.5)
    assert mag_best == pytest.approx(1 / 3, abs=1e-12)


def test_scan_integer_peaks_are_divisors_only_when_f_divides():
    # Jokainen kokonaisluku f on piikki; vain N/f:n kokonaislukuisuus erottaa tekijän
    for N in range(2, 301):
        result = f_scan(FScanConfig(1.0, float(N), 1.0, M=truncation_bound(N), N=N))
        assert [p.f for p in result.peaks] == [float(f) for f in range(1, N + 1)]
        for p in result.peaks:
            assert p.magnitude == 1.0
            f = int(p.f)
            if N % f == 0:
                assert p.integer_trial
                assert int(p.trial) == N // f
                assert N % int(p.trial) == 0
            else:
                assert not p.integer_trial, (N, f)


def test_scan_single_point():
    result = f_scan(FScanConfig(9269.0, 9269.0, 0.5, M=20, N=EXAMPLE_N))
    assert result.grid == [(9269.0, 1.0)]
    assert len(result.peaks) == 1


def test_scan_grid_includes_endpoint():
    config = FScanConfig(0.0, 1.0, 0.1, M=5, N=EXAMPLE_N)
    grid = config.grid()
    assert len(grid) == 11
    assert grid[-1] == pytest.approx(1.0)


def test_scan_zero_f_maps_to_infinite_trial():
    result = f_scan(FScanConfig(0.0, 0.0, 1.0, M=5, N=EXAMPLE_N))
    assert result.peaks[0].trial == math.inf
    assert not result.peaks[0].integer_trial


@pytest.mark.parametrize("kwargs", [
    dict(f_min=1.0, f_max=2.0, step=0.0),
    dict(f_min=1.0, f_max=2.0, step=-0.1),
    dict(f_min=3.0, f_max=2.0, step=0.1),
    dict(f_min=1.0, f_max=math.inf, step=0.1),
])
def test_scan_config_validation(kwargs):
    with pytest.raises(ValueError):
        FScanConfig(M=5, N=EXAMPLE_N, **kwargs)
