import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phiregret.simplex import (
    LossOutOfRange,
    NegativeEntry,
    RowSumMismatch,
    row_switch_count,
    self_degree,
    uniformity,
    validate_loss,
    validate_prob_vector,
    validate_stochastic,
)
from phiregret.checks import MATRIX_KINDS, random_stochastic

E = np.eye(3)


def test_identity_is_stochastic():
    assert np.array_equal(validate_stochastic(np.eye(3), 1e-9), np.eye(3))


def test_row_sum_mismatch_reports_row():
    m = np.array([[0.5, 0.5, 0.1], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(RowSumMismatch) as info:
        validate_stochastic(m, 1e-9)
    assert info.value.row == 0


def test_tiny_negative_is_clamped():
    m = np.array([[1 + 1e-12, -1e-12, 0], [0, 1, 0], [0, 0, 1]])
    out = validate_stochastic(m, 1e-9)
    assert np.array_equal(out[0], [1.0, 0.0, 0.0])


def test_negative_entry_rejected():
    m = np.array([[1.1, -0.1], [0, 1]])
    with pytest.raises(NegativeEntry) as info:
        validate_stochastic(m)
    assert (info.value.row, info.value.col) == (0, 1)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        validate_stochastic(np.ones((2, 3)) / 3)


@pytest.mark.parametrize("rows, expected", [
    (np.eye(3), 1),
    ([E[0], E[0], E[0]], 3),
    ([E[0], E[0], E[1]], 2),
])
def test_uniformity_examples(rows, expected):
    assert uniformity(np.array(rows)) == expected


@pytest.mark.parametrize("rows, expected", [
    (np.eye(4), 4),
    ([E[0], E[0], E[0]], 1),
    # rows 2 and 3 both map to themselves
    ([E[1], E[1], E[2]], 2),
])
def test_self_degree_examples(rows, expected):
    assert self_degree(np.array(rows)) == expected


def test_row_switch_examples():
    v, w = np.array([1.0, 0]), np.array([0.5, 0.5])
    assert row_switch_count(np.tile(v, (4, 1))) == 0
    assert row_switch_count(np.eye(4)) == 3
    assert row_switch_count(np.stack([v, v, w, w])) == 1


def test_computed_matrices_compare_with_tolerance():
    m = np.tile([0.3, 0.7], (2, 1))
    m[1] += [1e-14, -1e-14]
    assert uniformity(m) == 1
    assert uniformity(m, tol=1e-12) == 2
    assert row_switch_count(m) == 0


def test_loss_validation_is_strict():
    validate_loss([1.0, -1.0])
    with pytest.raises(LossOutOfRange):
        validate_loss([1.0 + 1e-15, 0.0])
    with pytest.raises(LossOutOfRange):
        validate_loss([np.nan, 0.0])
    with pytest.raises(LossOutOfRange):
        validate_loss([0.0], d=2)


def test_prob_vector_validation():
    assert np.allclose(validate_prob_vector([0.25, 0.75]), [0.25, 0.75])
    with pytest.raises(RowSumMismatch):
        validate_prob_vector([0.5, 0.6])


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(MATRIX_KINDS))
def test_measure_ranges_and_idempotence(n, seed, kind):
    phi = random_stochastic(np.random.default_rng(seed), n, kind)
    once = validate_stochastic(phi)
    assert np.array_equal(validate_stochastic(once), once)
    assert 1 <= uniformity(once) <= n
    assert 0 <= self_degree(once) <= n
    assert (self_degree(once) == n) == np.array_equal(once, np.eye(n))
