import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phiregret import haar
from phiregret.checks import random_stochastic
from phiregret.haar import CoefficientVector, FeatureId, Kind, Rep


def test_feature_counts_and_order():
    assert len(haar.enumerate_features(2)) == 5
    feats = haar.enumerate_features(4)
    assert len(feats) == 17
    assert feats[0] == FeatureId.identity()
    assert feats[1:5] == [FeatureId.ones(j) for j in range(4)]
    assert feats[5:9] == [FeatureId.wavelet(2, 1, j) for j in range(4)]
    assert feats[9] == FeatureId.wavelet(1, 1, 0)
    assert feats[-1] == FeatureId.wavelet(1, 2, 3)


def test_not_power_of_two():
    with pytest.raises(haar.NotPowerOfTwo):
        haar.enumerate_features(6)


def test_haar_vectors_d4():
    H = [haar.haar_vector(2, 0, 4), haar.haar_vector(2, 1, 4),
         haar.haar_vector(1, 1, 4), haar.haar_vector(1, 2, 4)]
    assert [list(h) for h in H] == [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 0, 0], [0, 0, 1, -1]]


def test_supports():
    assert haar.support(FeatureId.wavelet(1, 2, 0), 4) == range(2, 4)
    assert haar.support(FeatureId.wavelet(2, 1, 0), 4) == range(0, 4)
    assert haar.support(FeatureId.ones(3), 8) == range(0, 8)
    with pytest.raises(haar.IdentityHasNoRowSupport):
        haar.support(FeatureId.identity(), 4)


def test_feature_inner_examples():
    assert haar.feature_inner(np.eye(4), FeatureId.wavelet(1, 1, 0)) == 1
    assert haar.feature_inner(np.eye(4), FeatureId.identity()) == 4
    for j in range(4):
        assert haar.feature_inner(np.full((4, 4), 0.25), FeatureId.ones(j)) == 1


def test_feature_inner_matches_dense(rng):
    m = rng.normal(size=(8, 8))
    for f in haar.enumerate_features(8):
        assert np.isclose(haar.feature_inner(m, f), np.sum(m * haar.feature_matrix(f, 8)))


def test_column_haar_matches_feature_inner(rng):
    m = rng.normal(size=(16, 16))
    ones, wav = haar.column_haar(m)
    flat = np.concatenate([[np.trace(m)], ones, wav.ravel()])
    direct = [haar.feature_inner(m, f) for f in haar.enumerate_features(16)]
    assert np.allclose(flat, direct)


def test_analyze_examples():
    c = haar.analyze(np.full((4, 4), 0.25), Rep.REP1)
    assert np.allclose(c.ones, 0.25) and not np.any(c.wavelet) and c.identity == 0
    c = haar.analyze(np.eye(4), Rep.REP2)
    assert c.identity == 1 and not np.any(c.ones) and not np.any(c.wavelet)
    u = np.array([0.1, 0.2, 0.3, 0.4])
    c = haar.analyze(np.tile(u, (4, 1)), Rep.REP1)
    assert np.allclose(c.ones, u) and not np.any(c.wavelet)


def test_synthesize_examples(rng):
    c = CoefficientVector.zeros(4)
    c[FeatureId.identity()] = 1
    assert np.array_equal(haar.synthesize(c), np.eye(4))
    c = CoefficientVector.zeros(4)
    c[FeatureId.ones(0)] = 1
    expected = np.zeros((4, 4))
    expected[:, 0] = 1
    assert np.array_equal(haar.synthesize(c), expected)
    phi = random_stochastic(rng, 8)
    assert np.abs(haar.synthesize(haar.analyze(phi)) - phi).max() <= 1e-10


def test_synthesize_matches_dense_sum(rng):
    d_bar = 8
    feats = haar.enumerate_features(d_bar)
    x = rng.normal(size=len(feats))
    dense = sum(v * haar.feature_matrix(f, d_bar) for v, f in zip(x, feats))
    assert np.allclose(haar.synthesize(CoefficientVector.from_flat(x, d_bar)), dense)


def test_synthesize_is_linear(rng):
    n = 16 * 16 + 1
    a, b = rng.normal(size=n), rng.normal(size=n)
    lhs = haar.synthesize(CoefficientVector.from_flat(2.5 * a - 0.5 * b, 16))
    rhs = 2.5 * haar.synthesize(CoefficientVector.from_flat(a, 16)) - 0.5 * haar.synthesize(
        CoefficientVector.from_flat(b, 16))
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_coefficient_vector_access():
    c = CoefficientVector.zeros(4)
    f = FeatureId.wavelet(1, 2, 3)
    c[f] = 0.5
    assert c[f] == 0.5
    assert c.to_dict() == {f: 0.5}
    assert CoefficientVector.from_dict({f: 0.5}, 4).to_dict() == {f: 0.5}
    flat = c.flat()
    assert flat[haar.enumerate_features(4).index(f)] == 0.5


def test_feature_ids_have_readable_repr():
    assert repr(FeatureId.identity()) == "Identity"
    assert repr(FeatureId.ones(2)) == "AllOnesColumn(2)"
    assert "s=1" in repr(FeatureId.wavelet(1, 1, 0))


def test_identity_only_basis_at_size_one():
    assert haar.enumerate_features(1) == [FeatureId.identity(), FeatureId.ones(0)]
    c = haar.analyze(np.ones((1, 1)))
    assert np.array_equal(haar.synthesize(c), np.ones((1, 1)))


@settings(max_examples=150, deadline=None)
@given(S=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_column_sums_bounded_and_block_zeros(S, seed):
    rng = np.random.default_rng(seed)
    d_bar = 1 << S
    phi = random_stochastic(rng, d_bar)
    assert haar.analyze(phi, Rep.REP1).column_sums().max() <= 1 + 1e-12
    assert haar.analyze(phi, Rep.REP2).column_sums().max() <= 2 + 1e-12
    s = int(rng.integers(1, S + 1))
    l = int(rng.integers(1, (1 << (S - s)) + 1))
    rows = haar.support(FeatureId.wavelet(s, l, 0), d_bar)
    phi[rows.start:rows.stop] = phi[rows.start]
    c = haar.analyze(phi, Rep.REP1)
    assert all(c[FeatureId.wavelet(s, l, j)] == 0.0 for j in range(d_bar))


def test_kinds_cover_features():
    kinds = {f.kind for f in haar.enumerate_features(4)}
    assert kinds == set(Kind)
