"""Probability vectors, right-stochastic matrices and comparator complexity.

Vectors and matrices are plain numpy arrays. The helpers here validate them
and compute the two complexity measures of an action modification rule:
its uniformity (largest group of identical rows) and its degree of self-map
(number of rows equal to their own unit vector).
"""

import numpy as np

ROW_TOL = 1e-12


class SimplexError(ValueError):
    pass


class NegativeEntry(SimplexError):
    def __init__(self, row, col, value):
        super().__init__(f"negative entry {value!r} at ({row}, {col})")
        self.row = row
        self.col = col


class RowSumMismatch(SimplexError):
    def __init__(self, row, total):
        super().__init__(f"row {row} sums to {total!r}, expected 1")
        self.row = row
        self.total = total


class LossOutOfRange(SimplexError):
    pass


def validate_stochastic(m, tol=1e-9):
    """Return a cleaned copy of ``m`` whose rows lie exactly on the simplex.

    Entries in ``[-tol, 0)`` are clamped to zero and each row is rescaled to
    sum to one. Anything further off raises.

    Raises
    ------
    NegativeEntry
        An entry is below ``-tol``.
    RowSumMismatch
        A row sum differs from 1 by more than ``tol``.
    """
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SimplexError(f"expected a square matrix, got shape {m.shape}")
    bad = np.argwhere(m < -tol)
    if len(bad):
        i, j = bad[0]
        raise NegativeEntry(int(i), int(j), float(m[i, j]))
    m = np.maximum(m, 0.0)
    sums = m.sum(axis=1)
    off = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if len(off):
        raise RowSumMismatch(int(off[0]), float(sums[off[0]]))
    # rows already at rounding level are left alone so a second pass is a no-op
    drift = np.abs(sums - 1.0) > 4 * m.shape[1] * np.finfo(float).eps
    m[drift] /= sums[drift, None]
    return m


def validate_prob_vector(p, tol=1e-9):
    p = np.array(p, dtype=float)
    if p.ndim != 1:
        raise SimplexError(f"expected a vector, got shape {p.shape}")
    if np.any(p < -tol):
        i = int(np.argmin(p))
        raise NegativeEntry(0, i, float(p[i]))
    p = np.maximum(p, 0.0)
    total = p.sum()
    if abs(total - 1.0) > tol:
        raise RowSumMismatch(0, float(total))
    return p / total


def validate_loss(l, d=None):
    """Check that ``l`` is a finite vector in ``[-1, 1]^d`` (no slack)."""
    l = np.array(l, dtype=float)
    if l.ndim != 1:
        raise LossOutOfRange(f"expected a vector, got shape {l.shape}")
    if d is not None and l.shape[0] != d:
        raise LossOutOfRange(f"expected length {d}, got {l.shape[0]}")
    if not np.all(np.isfinite(l)) or np.any(np.abs(l) > 1.0):
        raise LossOutOfRange(f"loss entries must lie in [-1, 1]: {l}")
    return l


def _row_groups(m, tol):
    """Group row indices of ``m`` into classes of (approximately) equal rows."""
    if tol == 0.0:
        _, inverse, counts = np.unique(m, axis=0, return_inverse=True, return_counts=True)
        return np.asarray(inverse).ravel(), counts
    labels = -np.ones(len(m), dtype=int)
    reps = []
    for i, row in enumerate(m):
        for k, r in enumerate(reps):
            if np.max(np.abs(row - r)) <= tol:
                labels[i] = k
                break
        else:
            labels[i] = len(reps)
            reps.append(row)
    return labels, np.bincount(labels)


def uniformity(phi, tol=0.0):
    """Multiplicity of the most frequent row of ``phi``.

    ``tol=0`` compares rows bit-for-bit, which suits programmatically built
    comparators; pass a small ``tol`` for matrices that went through
    floating-point arithmetic.
    """
    phi = np.asarray(phi, dtype=float)
    _, counts = _row_groups(phi, tol)
    return int(counts.max())


def self_degree(phi, tol=0.0):
    """Number of indices ``i`` whose row is the unit vector ``e_i``."""
    phi = np.asarray(phi, dtype=float)
    dev = np.abs(phi - np.eye(len(phi))).max(axis=1)
    return int(np.count_nonzero(dev <= tol))


def row_switch_count(m, tol=ROW_TOL):
    """Number of adjacent row pairs that differ entrywise by more than ``tol``."""
    m = np.asarray(m, dtype=float)
    if len(m) < 2:
        return 0
    diff = np.abs(np.diff(m, axis=0)).max(axis=1)
    return int(np.count_nonzero(diff > tol))


def apply(phi, p):
    """Image of the distribution ``p`` under the linear map ``phi``."""
    return np.asarray(p) @ np.asarray(phi)


def uniform_matrix(n):
    return np.full((n, n), 1.0 / n)
