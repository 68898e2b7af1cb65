import math

import numpy as np
import pytest

from bellframe.exceptions import ContractError, DomainError, InsufficientDataError
from bellframe.frames import alice_directions, bob_directions, correlation_matrix, rotation_matrix
from bellframe.models import ChshResult, CountRecord, SamplingSpec, ViolationClass
from bellframe.noise import (
    MAX_MEAN_PAIRS,
    classify_violation,
    estimate_chsh,
    estimate_correlator,
    noisy_curve,
    simulate_chsh,
    simulate_counts,
)
from bellframe.quantum import X_AXIS, Z_AXIS, correlator, werner


def record(n_pp, n_pm, n_mp, n_mm, setting=(0, 0)):
    return CountRecord(setting=setting, n_pp=n_pp, n_pm=n_pm, n_mp=n_mp, n_mm=n_mm, duration=1.0, rate=1.0)


def with_sigma(s_max, sigma):
    return ChshResult(combos=(s_max, 0.0, 0.0, 0.0), s_max=s_max, best_combo_index=0, sigma=sigma)


def test_singlet_never_shows_parallel_outcomes(singlet_state):
    for seed in range(20):
        rec = simulate_counts(singlet_state, Z_AXIS, Z_AXIS, rate=1500, duration=1, seed=seed)
        assert rec.n_pp == 0 and rec.n_mm == 0
        assert rec.total > 0


def test_maximally_mixed_counts_are_balanced():
    rec = simulate_counts(werner(0), Z_AXIS, X_AXIS, rate=1e6, duration=1, seed=4)
    counts = np.array([rec.n_pp, rec.n_pm, rec.n_mp, rec.n_mm])
    assert np.all(np.abs(counts / rec.total - 0.25) < 0.005)


def test_simulation_is_seeded(experimental_state):
    first = simulate_counts(experimental_state, Z_AXIS, X_AXIS, 1500, 2, seed=99)
    assert simulate_counts(experimental_state, Z_AXIS, X_AXIS, 1500, 2, seed=99) == first


@pytest.mark.parametrize('rate, duration', [(0, 1), (-5, 1), (1500, 0), (1500, -1)])
def test_simulation_rejects_non_positive_rate_or_duration(singlet_state, rate, duration):
    with pytest.raises(DomainError):
        simulate_counts(singlet_state, Z_AXIS, Z_AXIS, rate, duration, seed=1)


@pytest.mark.parametrize('rate, duration', [(1e16, 1e4), (1e9, 1e4), (float('inf'), 1)])
def test_simulation_rejects_unsampleable_pair_counts(experimental_state, rate, duration):
    with pytest.raises(DomainError, match='expected pair count'):
        simulate_counts(experimental_state, Z_AXIS, Z_AXIS, rate, duration, seed=1)


def test_largest_pair_count_is_accepted(experimental_state):
    rec = simulate_counts(experimental_state, Z_AXIS, X_AXIS, MAX_MEAN_PAIRS, 1, seed=1)
    assert rec.total == pytest.approx(MAX_MEAN_PAIRS, rel=1e-4)


def test_canonical_settings_estimates_near_truth(singlet_state):
    est = simulate_chsh(singlet_state, 0, 0, 0, rate=1500, duration=2, seed=2024)
    truth = correlation_matrix(singlet_state, alice_directions(rotation_matrix(0, 0, 0)), bob_directions()).e
    for i in range(2):
        for j in range(2):
            assert abs(truth[i][j]) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
            assert abs(est.e_hat[i][j] - truth[i][j]) <= 4 * est.sigma_e[i][j]


@pytest.mark.parametrize('counts, e_hat, sigma', [
    ((0, 50, 50, 0), -1.0, 0.0),
    ((25, 25, 25, 25), 0.0, 0.1),
    ((40, 10, 10, 40), 0.6, math.sqrt(0.64 / 100)),
])
def test_estimate_correlator(counts, e_hat, sigma):
    assert estimate_correlator(record(*counts)) == pytest.approx((e_hat, sigma))


def test_estimate_correlator_needs_counts():
    with pytest.raises(InsufficientDataError):
        estimate_correlator(record(0, 0, 0, 0))


def test_estimate_chsh_adds_sigmas_in_quadrature():
    records = [
        record(25, 25, 25, 25, setting=(0, 0)),
        record(40, 10, 10, 40, setting=(0, 1)),
        record(40, 10, 10, 40, setting=(1, 0)),
        record(10, 40, 40, 10, setting=(1, 1)),
    ]
    est = estimate_chsh(records)
    assert est.e_hat == ((0.0, 0.6), (0.6, -0.6))
    expected = math.sqrt(0.1 ** 2 + 3 * 0.64 / 100)
    assert est.result.sigma == pytest.approx(expected)
    assert est.result.s_max == pytest.approx(1.8)


def test_estimate_chsh_needs_all_four_settings():
    with pytest.raises(DomainError):
        estimate_chsh([record(1, 1, 1, 1)])


@pytest.mark.parametrize('s_max, sigma, expected', [
    (2.81, 0.01, ViolationClass.VIOLATES_BY_SIGMA),
    (1.991, 0.007, ViolationClass.NO_VIOLATION),
    (2.005, 0.01, ViolationClass.VIOLATES_MEAN_ONLY),
])
def test_classification(s_max, sigma, expected):
    assert classify_violation(with_sigma(s_max, sigma)) is expected


def test_classification_needs_sigma():
    with pytest.raises(ContractError):
        classify_violation(ChshResult(combos=(2.5, 0, 0, 0), s_max=2.5, best_combo_index=0))


def test_estimator_consistency_at_large_counts(experimental_state):
    a, b = Z_AXIS, bob_directions().first
    truth = correlator(experimental_state, a, b)
    inside = 0
    for seed in range(1000):
        e_hat, sigma = estimate_correlator(simulate_counts(experimental_state, a, b, 1e6, 1, seed=seed))
        inside += abs(e_hat - truth) < 5 * sigma
    assert inside >= 990


def test_two_sigma_coverage(singlet_state):
    # E = 0 for perpendicular directions; about 3000 pairs per trial.
    trials = 4000
    covered = 0
    for seed in range(trials):
        e_hat, sigma = estimate_correlator(simulate_counts(singlet_state, Z_AXIS, X_AXIS, 1500, 2, seed=seed))
        covered += abs(e_hat) <= 2 * sigma
    assert 0.94 <= covered / trials <= 0.97


def test_sigma_scales_with_inverse_root_duration(experimental_state):
    def mean_sigma(duration):
        return np.mean([
            simulate_chsh(experimental_state, 0, 0, 0, 1500, duration, seed=s).result.sigma
            for s in range(200)
        ])

    assert mean_sigma(2) / mean_sigma(4) == pytest.approx(math.sqrt(2), rel=0.05)


def test_error_bars_match_the_laboratory_scale(experimental_state):
    est = simulate_chsh(experimental_state, 0, 0, 0, rate=1500, duration=20, seed=7)
    assert 0.003 < est.result.sigma < 0.02
    assert est.result.s_max == pytest.approx(2.806, abs=5 * est.result.sigma)


def test_long_runs_classify_the_extremes(experimental_state):
    best = simulate_chsh(experimental_state, 0, 0, 0, rate=1500, duration=200, seed=1)
    assert classify_violation(best) is ViolationClass.VIOLATES_BY_SIGMA
    aligned = simulate_chsh(experimental_state, 45, 0, 0, rate=1500, duration=200, seed=1)
    assert classify_violation(aligned) is ViolationClass.NO_VIOLATION


def test_noisy_curve_fractions(experimental_state):
    spec = SamplingSpec(phi_grid=[0, 90])
    rows = noisy_curve(experimental_state, spec, rate=1500, duration=20, seed=3)
    assert [row.phi for row in rows] == [0, 90]
    assert rows[0].f_sigma == 1.0
    assert rows[1].f_mean == 0.0
    for row in rows:
        assert row.f_sigma <= row.f_mean
        assert len(row.points) == 19
