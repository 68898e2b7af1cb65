import itertools
import math

import numpy as np
import pytest

from bellframe.chsh import (
    STANDARD_COMBO_INDEX,
    TSIRELSON_BOUND,
    CorrelationMatrix,
    chsh_combinations,
    closed_form_s,
    is_violation,
    s_max_batch,
)
from bellframe.exceptions import DomainError
from bellframe.frames import MeasurementPair, alice_directions, bob_directions, correlation_matrix, rotation_matrix
from bellframe.models import ChshResult
from bellframe.quantum import X_AXIS, Z_AXIS, werner
from bellframe.sampling import chsh_grid
from tests.conftest import SQRT2, random_pair

SIGN_PATTERNS = list(itertools.product((1, -1), repeat=4))


def textbook_matrix(state):
    return correlation_matrix(state, alice_directions(rotation_matrix(0, 0, 0)), bob_directions())


def result_with(s_max):
    return ChshResult(combos=(s_max, 0.0, 0.0, 0.0), s_max=s_max, best_combo_index=0)


def test_textbook_settings_reach_tsirelson_bound(singlet_state):
    result = chsh_combinations(textbook_matrix(singlet_state))
    assert result.s_max == pytest.approx(2 * SQRT2, abs=1e-12)
    assert result.combos[STANDARD_COMBO_INDEX] == pytest.approx(2 * SQRT2, abs=1e-12)


def test_relabeling_one_setting_hides_the_textbook_combination(singlet_state):
    relabeled = textbook_matrix(singlet_state).relabel(bob_signs=(-1, 1))
    result = chsh_combinations(relabeled)
    assert result.combos[STANDARD_COMBO_INDEX] == pytest.approx(0.0, abs=1e-12)
    assert result.s_max == pytest.approx(2 * SQRT2, abs=1e-12)


def test_relabeling_both_of_bobs_settings_negates_the_combination(singlet_state):
    result = chsh_combinations(textbook_matrix(singlet_state).relabel(bob_signs=(-1, -1)))
    assert result.combos[STANDARD_COMBO_INDEX] == pytest.approx(-2 * SQRT2, abs=1e-12)
    assert result.s_max == pytest.approx(2 * SQRT2, abs=1e-12)


def test_identical_settings_never_violate(singlet_state):
    same = MeasurementPair(Z_AXIS, X_AXIS)
    e = correlation_matrix(singlet_state, same, same)
    assert np.allclose(e.e, [[-1, 0], [0, -1]], atol=1e-12)
    for signs in SIGN_PATTERNS:
        result = chsh_combinations(e.relabel(signs[:2], signs[2:]))
        assert result.s_max == pytest.approx(2.0, abs=1e-12)
        assert not is_violation(result)


def test_combinations_layout():
    e = CorrelationMatrix([[0.1, 0.2], [0.3, 0.4]])
    result = chsh_combinations(e)
    assert result.combos == pytest.approx((0.1 + 0.2 + 0.3 - 0.4, 0.1 + 0.2 - 0.3 + 0.4, 0.1 - 0.2 + 0.3 + 0.4, -0.1 + 0.2 + 0.3 + 0.4))
    assert result.s_max == max(abs(c) for c in result.combos)
    assert result.best_combo_index == 3


def test_correlation_matrix_rejects_entries_outside_unit_interval():
    with pytest.raises(DomainError):
        CorrelationMatrix([[1.1, 0], [0, 0]])
    with pytest.raises(DomainError):
        CorrelationMatrix([[1, 0, 0], [0, 1, 0]])


def test_relabeling_invariance_is_exact(rng):
    for _ in range(1000):
        e = CorrelationMatrix(rng.uniform(-1, 1, size=(2, 2)))
        reference = chsh_combinations(e).s_max
        for signs in SIGN_PATTERNS:
            assert chsh_combinations(e.relabel(signs[:2], signs[2:])).s_max == reference


def test_s_max_equals_largest_magnitude_exactly(rng):
    for _ in range(200):
        result = chsh_combinations(CorrelationMatrix(rng.uniform(-1, 1, size=(2, 2))))
        assert result.s_max == max(abs(c) for c in result.combos)
        assert abs(result.combos[result.best_combo_index]) == result.s_max


def test_batch_matches_scalar(rng):
    stack = rng.uniform(-1, 1, size=(100, 2, 2))
    batch = s_max_batch(stack)
    for e, s in zip(stack, batch):
        assert chsh_combinations(CorrelationMatrix(e)).s_max == s


def test_deterministic_strategies_respect_local_bound():
    for a1, a2, b1, b2 in SIGN_PATTERNS:
        e = CorrelationMatrix([[a1 * b1, a1 * b2], [a2 * b1, a2 * b2]])
        assert chsh_combinations(e).s_max <= 2.0


def test_tsirelson_bound_for_random_states_and_settings(rng):
    for _ in range(500):
        state = werner(float(rng.uniform(0, 1)))
        for _ in range(20):
            e = correlation_matrix(state, random_pair(rng), random_pair(rng))
            assert chsh_combinations(e).s_max <= TSIRELSON_BOUND + 1e-9


@pytest.mark.parametrize('s_max, expected', [
    (2 * SQRT2, True),
    (2.0, False),
    (1.984, False),
    (2.0 + 1e-10, False),
    (2.0 + 1e-6, True),
])
def test_is_violation_is_strict(s_max, expected):
    assert is_violation(result_with(s_max)) is expected


@pytest.mark.parametrize('theta, visibility, expected', [
    (0, 1, 2 * SQRT2),
    (45, 1, 2.0),
    (45, 0.992, 1.984),
])
def test_closed_form_values(theta, visibility, expected):
    assert closed_form_s(theta, visibility) == pytest.approx(expected, abs=1e-12)


def test_closed_form_symmetries():
    for theta in np.arange(0, 360, 7.3):
        s = closed_form_s(theta, 0.9)
        assert closed_form_s(theta + 90, 0.9) == pytest.approx(s, abs=1e-12)
        assert closed_form_s(-theta, 0.9) == pytest.approx(s, abs=1e-12)
    thetas = np.arange(0, 360, 0.5)
    values = [closed_form_s(t, 1.0) for t in thetas]
    minima = thetas[np.isclose(values, min(values), atol=1e-12)]
    assert list(minima) == [45.0, 135.0, 225.0, 315.0]


@pytest.mark.parametrize('visibility', [1.0, 0.992, 0.6])
def test_closed_form_agrees_with_correlator_pipeline(visibility):
    thetas = np.round(np.arange(0, 3600) * 0.1, 10)
    pipeline = chsh_grid(werner(visibility), thetas, phi=0.0)
    closed = np.array([closed_form_s(t, visibility) for t in thetas])
    assert np.max(np.abs(pipeline - closed)) <= 1e-10
