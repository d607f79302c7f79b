import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phiregret.checks import random_relabeling, random_stochastic
from phiregret.relabel import (
    Relabeling,
    RelabelingError,
    build_default,
    collapse_distribution,
    dyadic_size,
    lift_comparator_self,
    lift_comparator_uniform,
    lift_loss,
)
from phiregret.simplex import row_switch_count, self_degree, uniformity


def blocks(r):
    return [list(b) for b in r.forward]


@pytest.mark.parametrize("d, expected", [
    (4, [[0], [1], [2], [3]]),
    (3, [[0, 1], [2], [3]]),
    (5, [[0, 1], [2, 3], [4, 5], [6], [7]]),
])
def test_default_blocks(d, expected):
    assert blocks(build_default(d)) == expected


def test_dyadic_size():
    assert dyadic_size(1) == (1, 0)
    assert dyadic_size(3) == (4, 2)
    assert dyadic_size(64) == (64, 6)
    assert dyadic_size(65) == (128, 7)
    with pytest.raises(RelabelingError):
        dyadic_size(0)


def test_structure_for_many_sizes():
    for d in range(1, 258):
        r = build_default(d)
        assert r.d_bar >= d and r.d_bar < 2 * d or d == 1
        assert sorted(s for b in r.forward for s in b) == list(range(r.d_bar))
        for i, b in enumerate(r.forward):
            assert 1 <= len(b) <= 2
            assert all(r.inverse[s] == i for s in b)


def test_rejects_bad_blocks():
    with pytest.raises(RelabelingError):
        Relabeling.from_blocks([3, 1])
    with pytest.raises(RelabelingError):
        Relabeling.from_blocks([1, 1, 1])  # does not fill 4 slots
    with pytest.raises(RelabelingError):
        Relabeling.from_forward([(0, 1), (1, 2), (3, 3)])


def test_relabeling_is_read_only():
    r = build_default(3)
    with pytest.raises(ValueError):
        r.inverse[0] = 2


def test_lift_loss_examples():
    a, b, c = 0.1, -0.4, 0.9
    assert np.allclose(lift_loss([a, b, c], build_default(3)), [a, a, b, c])
    l = np.array([0.2, -0.3, 0.5, 1.0])
    assert np.array_equal(lift_loss(l, build_default(4)), l)
    assert np.array_equal(lift_loss([1, -1], build_default(2)), [1, -1])


def test_collapse_examples():
    r = build_default(3)
    assert np.allclose(collapse_distribution([0.1, 0.2, 0.3, 0.4], r), [0.3, 0.3, 0.4])
    assert np.allclose(collapse_distribution(np.full(4, 0.25), r), [0.5, 0.25, 0.25])
    p = np.array([0.1, 0.2, 0.3, 0.4])
    assert np.array_equal(collapse_distribution(p, build_default(4)), p)


def test_uniform_lift_examples():
    r = build_default(3)
    const = np.zeros((3, 3))
    const[:, 0] = 1
    assert np.allclose(lift_comparator_uniform(const, r), np.tile([0.5, 0.5, 0, 0], (4, 1)))
    expected = np.array([[.5, .5, 0, 0], [.5, .5, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert np.allclose(lift_comparator_uniform(np.eye(3), r), expected)
    phi = random_stochastic(np.random.default_rng(0), 4)
    assert np.array_equal(lift_comparator_uniform(phi, build_default(4)), phi)


def test_self_lift_examples():
    r = build_default(3)
    assert np.array_equal(lift_comparator_self(np.eye(3), r), np.eye(4))
    E = np.eye(3)
    phi = np.stack([E[1], E[1], E[2]])
    F = np.eye(4)
    assert np.array_equal(lift_comparator_self(phi, r), np.stack([F[2], F[2], F[2], F[3]]))
    phi = random_stochastic(np.random.default_rng(1), 8)
    assert np.allclose(lift_comparator_self(phi, build_default(8)), phi)


@settings(max_examples=200, deadline=None)
@given(d=st.integers(1, 40), seed=st.integers(0, 2**32 - 1))
def test_lifts_preserve_losses_and_complexity(d, seed):
    rng = np.random.default_rng(seed)
    r = random_relabeling(rng, d)
    phi = random_stochastic(rng, d)
    p_bar = rng.dirichlet(np.ones(r.d_bar))
    l = rng.uniform(-1, 1, d)
    p = collapse_distribution(p_bar, r)
    assert abs(p.sum() - 1) < 1e-12
    assert np.isclose(p @ l, p_bar @ lift_loss(l, r), atol=1e-12)
    want = p @ phi @ l
    uni = lift_comparator_uniform(phi, r)
    slf = lift_comparator_self(phi, r)
    for lifted in (uni, slf):
        assert np.allclose(lifted.sum(axis=1), 1.0, atol=1e-12)
        assert abs(p_bar @ lifted @ lift_loss(l, r) - want) <= 1e-9
    assert row_switch_count(uni) <= 2 * (d - uniformity(phi))
    assert r.d_bar - self_degree(slf) <= 2 * (d - self_degree(phi))
