import numpy as np
import pytest

from phiregret.harness.comparators import ComparatorSpec, realize
from phiregret.harness.regret import Trace, best_swap_comparator
from phiregret.simplex import self_degree, uniformity


@pytest.fixture
def trace(rng):
    return Trace(rng.dirichlet(np.ones(6), 40), rng.uniform(-1, 1, (40, 6)))


def test_constant(trace):
    phi = realize(ComparatorSpec("constant", {"u": 2}), trace)
    assert np.all(phi[:, 2] == 1) and uniformity(phi) == 6
    u = [0.5, 0.5, 0, 0, 0, 0]
    assert np.allclose(realize(ComparatorSpec("constant", {"u": u}), trace), np.tile(u, (6, 1)))


def test_block_constant_explicit(trace):
    phi = realize(ComparatorSpec("block_constant", {"k": 3, "rows": [0, 1, [0, 0, 0.5, 0.5, 0, 0]]}), trace)
    assert uniformity(phi) == 4
    assert np.all(phi[:4, 0] == 1) and phi[4, 1] == 1 and phi[5, 2] == 0.5


def test_block_constant_hindsight(trace):
    for k in (1, 3, 6):
        phi = realize(ComparatorSpec("block_constant", {"k": k}), trace)
        assert uniformity(phi) >= 6 - k + 1


def test_self_modified(trace):
    phi = realize(ComparatorSpec("self_modified", {"k": 2, "targets": {"0": 3, "5": 1}}), trace)
    assert self_degree(phi) == 4 and phi[0, 3] == 1 and phi[5, 1] == 1
    phi = realize(ComparatorSpec("self_modified", {"k": 2}), trace)
    assert self_degree(phi) >= 4


def test_random_stochastic_seeded(trace):
    a = realize(ComparatorSpec("random_stochastic", {"seed": 4}), trace)
    b = realize(ComparatorSpec("random_stochastic", {"seed": 4}), trace)
    assert np.array_equal(a, b)
    assert np.allclose(a.sum(axis=1), 1)


def test_best_swap(trace):
    assert np.array_equal(realize(ComparatorSpec("best_swap"), trace), best_swap_comparator(trace))


def test_invalid(trace):
    with pytest.raises(ValueError):
        ComparatorSpec("mystery")
    with pytest.raises(ValueError):
        realize(ComparatorSpec("block_constant", {"k": 9}), trace)
    with pytest.raises(ValueError):
        realize(ComparatorSpec("block_constant", {"k": 2, "rows": [0]}), trace)
    with pytest.raises(ValueError):
        realize(ComparatorSpec("self_modified", {"k": 1, "targets": {"0": 1, "1": 0}}), trace)
    with pytest.raises(ValueError):
        realize(ComparatorSpec("constant", {"u": 7}), trace)
    with pytest.raises(ValueError):
        realize(ComparatorSpec("constant", {"v": 1}), trace)


def test_labels_are_canonical():
    assert ComparatorSpec("block_constant", {"k": 2}).label() == '{"k":2}'
    assert ComparatorSpec("best_swap").label() == "{}"
