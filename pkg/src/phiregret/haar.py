"""Haar basis on R^{d_bar} and the overcomplete matrix feature set.

A matrix feature is either the identity matrix, an all-ones column
``1 (x) e_j`` or a wavelet column ``h^{(s,l)} (x) e_j``: the Haar vector
``h^{(s,l)}`` placed in column ``j``. Without the identity the features form
an orthogonal basis of the ``d_bar x d_bar`` matrices.

Scales ``s`` and locations ``l`` follow the usual 1-based convention
(``s`` in ``1..S``, ``l`` in ``1..2**(S-s)``); row and column indices are
0-based. Features are never materialised during learning: column inner
products and synthesis run a Haar pyramid in ``O(d_bar**2)``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class HaarError(ValueError):
    pass


class NotPowerOfTwo(HaarError):
    pass


class IdentityHasNoRowSupport(HaarError):
    pass


class Kind(Enum):
    IDENTITY = "identity"
    ONES = "ones"
    WAVELET = "wavelet"


class Rep(Enum):
    """Coefficient conventions for a comparator.

    ``REP1`` expands the matrix itself with zero identity weight; ``REP2``
    puts weight one on the identity and expands ``phi - I``.
    """

    REP1 = 1
    REP2 = 2


@dataclass(frozen=True)
class FeatureId:
    kind: Kind
    s: int = 0
    l: int = 0
    j: int = 0

    @classmethod
    def identity(cls):
        return cls(Kind.IDENTITY)

    @classmethod
    def ones(cls, j):
        return cls(Kind.ONES, j=j)

    @classmethod
    def wavelet(cls, s, l, j):
        return cls(Kind.WAVELET, s, l, j)

    def __repr__(self):
        if self.kind is Kind.IDENTITY:
            return "Identity"
        if self.kind is Kind.ONES:
            return f"AllOnesColumn({self.j})"
        return f"Wavelet(s={self.s}, l={self.l}, j={self.j})"


def log2_exact(d_bar):
    if d_bar < 1 or d_bar & (d_bar - 1):
        raise NotPowerOfTwo(f"{d_bar} is not a power of two")
    return d_bar.bit_length() - 1


def wavelet_row(s, l, S):
    """Position of ``h^{(s,l)}`` in the stacked wavelet array (coarsest first)."""
    return (1 << (S - s)) - 1 + (l - 1)


def enumerate_features(d_bar):
    """All ``d_bar**2 + 1`` features in canonical order.

    Identity, then all-ones columns by ``j``, then wavelets by descending
    scale, ascending location, ascending column.
    """
    S = log2_exact(d_bar)
    feats = [FeatureId.identity()]
    feats.extend(FeatureId.ones(j) for j in range(d_bar))
    for s in range(S, 0, -1):
        for l in range(1, (1 << (S - s)) + 1):
            feats.extend(FeatureId.wavelet(s, l, j) for j in range(d_bar))
    return feats


def support(f, d_bar):
    """Rows on which the feature's Haar vector is nonzero."""
    if f.kind is Kind.IDENTITY:
        raise IdentityHasNoRowSupport("the identity feature is not a column feature")
    if f.kind is Kind.ONES:
        return range(d_bar)
    width = 1 << f.s
    start = width * (f.l - 1)
    if start + width > d_bar:
        raise HaarError(f"{f!r} does not fit in d_bar={d_bar}")
    return range(start, start + width)


def haar_vector(s, l, d_bar):
    """Dense ``h^{(s,l)}``; ``l=0`` gives the all-ones vector."""
    h = np.zeros(d_bar, dtype=np.int64)
    if l == 0:
        h[:] = 1
        return h
    rows = support(FeatureId.wavelet(s, l, 0), d_bar)
    half = len(rows) // 2
    h[rows.start:rows.start + half] = 1
    h[rows.start + half:rows.stop] = -1
    return h


def feature_matrix(f, d_bar):
    """Dense integer matrix of a feature. Meant for tests and small checks."""
    if f.kind is Kind.IDENTITY:
        return np.eye(d_bar, dtype=np.int64)
    m = np.zeros((d_bar, d_bar), dtype=np.int64)
    m[:, f.j] = haar_vector(f.s, 0 if f.kind is Kind.ONES else f.l, d_bar)
    return m


def feature_norm_sq(f, d_bar):
    if f.kind is Kind.IDENTITY:
        return d_bar
    return len(support(f, d_bar))


def feature_inner(m, f):
    """``<m, b>`` touching only the rows in the feature's support."""
    m = np.asarray(m, dtype=float)
    d_bar = m.shape[0]
    if f.kind is Kind.IDENTITY:
        return float(np.trace(m))
    rows = support(f, d_bar)
    col = m[rows.start:rows.stop, f.j]
    if f.kind is Kind.ONES:
        return float(col.sum())
    half = len(col) // 2
    return float(col[:half].sum() - col[half:].sum())


def column_haar(m):
    """Inner products of every column of ``m`` with every Haar vector.

    Returns ``(ones, wav)`` where ``ones[j] = <m, 1 (x) e_j>`` and
    ``wav[wavelet_row(s, l, S), j] = <m, h^{(s,l)} (x) e_j>``.
    """
    m = np.asarray(m, dtype=float)
    d_bar = m.shape[0]
    S = log2_exact(d_bar)
    wav = np.empty((d_bar - 1, m.shape[1]))
    block = m
    for s in range(1, S + 1):
        pairs = block.reshape(-1, 2, m.shape[1])
        n = pairs.shape[0]
        wav[n - 1:2 * n - 1] = pairs[:, 0] - pairs[:, 1]
        block = pairs[:, 0] + pairs[:, 1]
    return block[0].copy(), wav


def column_synthesize(ones, wav):
    """Inverse of the pyramid: ``sum_j ones[j] 1(x)e_j + sum wav * h(x)e_j``."""
    ones = np.asarray(ones, dtype=float)
    wav = np.asarray(wav, dtype=float)
    d_bar = ones.shape[0]
    rows = ones[None, :]
    n = 1
    while n < d_bar:
        w = wav[n - 1:2 * n - 1]
        rows = np.stack([rows + w, rows - w], axis=1).reshape(2 * n, d_bar)
        n *= 2
    return rows


@dataclass
class CoefficientVector:
    """Real coefficients for every feature, stored densely by feature kind."""

    identity: float
    ones: np.ndarray
    wavelet: np.ndarray

    @classmethod
    def zeros(cls, d_bar):
        log2_exact(d_bar)
        return cls(0.0, np.zeros(d_bar), np.zeros((d_bar - 1, d_bar)))

    @property
    def d_bar(self):
        return self.ones.shape[0]

    def __getitem__(self, f):
        if f.kind is Kind.IDENTITY:
            return self.identity
        if f.kind is Kind.ONES:
            return float(self.ones[f.j])
        return float(self.wavelet[wavelet_row(f.s, f.l, log2_exact(self.d_bar)), f.j])

    def __setitem__(self, f, value):
        if f.kind is Kind.IDENTITY:
            self.identity = float(value)
        elif f.kind is Kind.ONES:
            self.ones[f.j] = value
        else:
            self.wavelet[wavelet_row(f.s, f.l, log2_exact(self.d_bar)), f.j] = value

    def flat(self):
        """Coefficients in ``enumerate_features`` order."""
        return np.concatenate([[self.identity], self.ones, self.wavelet.ravel()])

    @classmethod
    def from_flat(cls, x, d_bar):
        x = np.asarray(x, dtype=float)
        if x.shape != (d_bar * d_bar + 1,):
            raise HaarError(f"expected {d_bar * d_bar + 1} coefficients, got {x.shape}")
        return cls(float(x[0]), x[1:d_bar + 1].copy(), x[d_bar + 1:].reshape(d_bar - 1, d_bar).copy())

    @classmethod
    def from_dict(cls, mapping, d_bar):
        c = cls.zeros(d_bar)
        for f, v in mapping.items():
            c[f] = v
        return c

    def to_dict(self, skip_zeros=True):
        feats = enumerate_features(self.d_bar)
        return {f: float(v) for f, v in zip(feats, self.flat()) if v != 0 or not skip_zeros}

    def column_sums(self):
        """``sum_j |c(h, j)|`` for every Haar vector ``h``: all-ones first, then wavelets."""
        return np.concatenate([[np.abs(self.ones).sum()], np.abs(self.wavelet).sum(axis=1)])


def analyze(phi_bar, rep=Rep.REP1):
    """Coefficients of ``phi_bar`` under the chosen representation."""
    m = np.array(phi_bar, dtype=float)
    d_bar = m.shape[0]
    S = log2_exact(d_bar)
    rep = Rep(rep)
    if rep is Rep.REP2:
        m[np.arange(d_bar), np.arange(d_bar)] -= 1.0
    ones, wav = column_haar(m)
    widths = np.concatenate([[1 << s] * (1 << (S - s)) for s in range(S, 0, -1)]) if S else np.zeros(0)
    return CoefficientVector(
        identity=0.0 if rep is Rep.REP1 else 1.0,
        ones=ones / d_bar,
        wavelet=wav / widths[:, None] if S else wav,
    )


def synthesize(c, d_bar=None):
    """Dense matrix ``sum_b c(b) b``."""
    if d_bar is not None and d_bar != c.d_bar:
        raise HaarError(f"coefficients are for d_bar={c.d_bar}, not {d_bar}")
    m = column_synthesize(c.ones, c.wavelet)
    m[np.arange(c.d_bar), np.arange(c.d_bar)] += c.identity
    return m
