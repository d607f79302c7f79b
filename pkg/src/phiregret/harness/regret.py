"""Exact regret accounting on a recorded interaction.

Everything derives from the ``d x d`` matrix ``G = P^T L`` whose entry
``G[i, j] = sum_t p_{t,i} l_{t,j}`` is the loss that the mass placed on
expert ``i`` would have earned on expert ``j``. The phi-regret is then
``trace(G) - <phi, G>``, linear in each row of ``phi``.
"""

import math
from dataclasses import dataclass, field

import numpy as np


class DimensionMismatch(ValueError):
    pass


class EpsOutOfRange(ValueError):
    pass


@dataclass
class Trace:
    P: np.ndarray  # (T, d) predictions
    L: np.ndarray  # (T, d) losses
    seed: int | None = None
    algorithm: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=float).reshape(len(self.P), -1)
        self.L = np.asarray(self.L, dtype=float).reshape(len(self.L), -1)
        if self.P.shape != self.L.shape:
            raise DimensionMismatch(f"predictions {self.P.shape} vs losses {self.L.shape}")

    @property
    def T(self):
        return self.P.shape[0]

    @property
    def d(self):
        return self.P.shape[1]

    def prefix(self, t):
        return Trace(self.P[:t], self.L[:t], self.seed, self.algorithm, self.meta)

    def cross_loss(self):
        return self.P.T @ self.L

    def learner_loss(self):
        return math.fsum(np.einsum("ti,ti->t", self.P, self.L))


def regret_of(trace, phi):
    """``sum_t <p_t, l_t> - sum_t <phi(p_t), l_t>`` with exact summation."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (trace.d, trace.d):
        raise DimensionMismatch(f"phi has shape {phi.shape}, trace has d={trace.d}")
    moved = trace.P - trace.P @ phi
    return math.fsum(np.einsum("ti,ti->t", moved, trace.L))


def _vertex_map(targets, d):
    phi = np.zeros((d, d))
    phi[np.arange(d), targets] = 1.0
    return phi


def best_swap_comparator(trace):
    """Swap rule maximising the regret: each expert goes to its cheapest target.

    Ties go to the smallest target index.
    """
    G = trace.cross_loss()
    return _vertex_map(np.argmin(G, axis=1), trace.d)


def swap_regret(trace):
    return regret_of(trace, best_swap_comparator(trace))


def external_regret(trace):
    """Regret against the best single expert; may be negative."""
    cum = trace.L.sum(axis=0)
    return trace.learner_loss() - math.fsum(trace.L[:, int(np.argmin(cum))])


def internal_regret(trace):
    """Largest gain from rerouting one expert to another, floored at zero.

    The floor reflects the supremum over rules that move a vanishing part
    of one expert's mass.
    """
    d = trace.d
    if d < 2:
        return 0.0
    G = trace.cross_loss()
    gains = np.diag(G)[:, None] - G
    np.fill_diagonal(gains, -np.inf)
    i, j = np.unravel_index(np.argmax(gains), gains.shape)
    phi = np.eye(d)
    phi[i] = 0.0
    phi[i, j] = 1.0
    return max(0.0, regret_of(trace, phi))


def quantile_index(cum_loss, eps):
    d = len(cum_loss)
    if not (1.0 / d - 1e-12 <= eps <= 1.0 + 1e-12):
        raise EpsOutOfRange(f"eps={eps} outside [1/{d}, 1]")
    rank = max(1, min(d, math.ceil(eps * d - 1e-9)))
    order = np.argsort(cum_loss, kind="stable")
    return int(order[rank - 1])


def quantile_regret(trace, eps):
    """Regret against the ``ceil(eps d)``-th best expert (ties by index)."""
    i = quantile_index(trace.L.sum(axis=0), eps)
    return trace.learner_loss() - math.fsum(trace.L[:, i])


def best_uniform_comparator(trace, k):
    """Best vertex rule whose uniformity is at least ``d - k + 1``.

    All but ``k - 1`` experts share a common target; the remaining experts
    are routed to their own cheapest targets. The common target and the
    free experts are chosen to maximise the regret, so the value is
    non-decreasing in ``k``.
    """
    d = trace.d
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")
    G = trace.cross_loss()
    own_best = np.argmin(G, axis=1)
    own_cost = G[np.arange(d), own_best]
    best = None
    for c in range(d):
        saving = G[:, c] - own_cost
        free = np.argsort(-saving, kind="stable")[:k - 1]
        cost = G[:, c].sum() - saving[free].sum()
        if best is None or cost < best[0]:
            best = (cost, c, free)
    _, c, free = best
    targets = np.full(d, c)
    targets[free] = own_best[free]
    return _vertex_map(targets, d)


def best_self_comparator(trace, k):
    """Best vertex rule that leaves at least ``d - k`` experts in place."""
    d = trace.d
    if not 0 <= k <= d:
        raise ValueError(f"k must lie in [0, {d}], got {k}")
    G = trace.cross_loss()
    own_best = np.argmin(G, axis=1)
    saving = np.diag(G) - G[np.arange(d), own_best]
    free = np.argsort(-saving, kind="stable")[:k]
    targets = np.arange(d)
    targets[free] = own_best[free]
    return _vertex_map(targets, d)
