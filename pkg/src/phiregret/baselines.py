"""Reference learners: anytime MWU, internal-regret MWU and Blum-Mansour.

All three share the predict/update protocol of ``PhiLearner``. Learning
rates are anytime, ``eta_t = sqrt(ln N / t)`` with ``N`` the number of
things being weighted.
"""

import math

import numpy as np

from .fixed_point import FixedPointConfig, stationary_fixed_point
from .learner import OutOfOrderCall
from .simplex import validate_loss


def mwu_distribution(cum_loss, eta):
    """``p_i proportional to exp(-eta * cum_loss_i)``, computed in log space."""
    z = -eta * np.asarray(cum_loss, dtype=float)
    w = np.exp(z - z.max(axis=-1, keepdims=True))
    return w / w.sum(axis=-1, keepdims=True)


def anytime_eta(n, t):
    return math.sqrt(math.log(n) / t) if n > 1 else 0.0


class _Protocol:
    def __init__(self, d):
        self.d = d
        self.t = 0
        self._pending = False
        self.last = None

    def predict(self):
        if self._pending:
            raise OutOfOrderCall("predict called twice without update")
        self._pending = True
        self.last = self._predict()
        return self.last

    def update(self, l):
        if not self._pending:
            raise OutOfOrderCall("update called before predict")
        l = validate_loss(l, self.d)
        self._update(l)
        self.t += 1
        self._pending = False


class MWU(_Protocol):
    def __init__(self, d):
        super().__init__(d)
        self.cum_loss = np.zeros(d)

    def _predict(self):
        return mwu_distribution(self.cum_loss, anytime_eta(self.d, self.t + 1))

    def _update(self, l):
        self.cum_loss += l


class BlumMansour(_Protocol):
    """One MWU per row of the swap matrix; row ``i`` is charged ``p_i * l``."""

    def __init__(self, d, fp_cfg=None):
        super().__init__(d)
        self.fp_cfg = fp_cfg or FixedPointConfig()
        self.cum_loss = np.zeros((d, d))
        self.Q = None

    def _predict(self):
        self.Q = mwu_distribution(self.cum_loss, anytime_eta(self.d, self.t + 1))
        return stationary_fixed_point(self.Q, self.fp_cfg)

    def _update(self, l):
        self.cum_loss += np.outer(self.last, l)


class InternalMWU(_Protocol):
    """MWU over the ``d(d-1)`` rules that reroute one expert to another.

    The prediction is a fixed point of the weighted mixture of rule matrices.
    A rule ``i -> j`` is charged ``p_i (l_j - l_i)``, its loss relative to
    playing ``p`` itself.
    """

    def __init__(self, d, fp_cfg=None):
        super().__init__(d)
        self.fp_cfg = fp_cfg or FixedPointConfig()
        self.cum_loss = np.zeros((d, d))
        self.off = ~np.eye(d, dtype=bool)
        self.n_rules = d * (d - 1)

    def rule_weights(self):
        eta = anytime_eta(self.n_rules, self.t + 1)
        w = np.zeros((self.d, self.d))
        if self.n_rules == 0:
            return w
        w[self.off] = mwu_distribution(self.cum_loss[self.off], eta)
        return w

    def _predict(self):
        w = self.rule_weights()
        # sum_{i->j} w_ij (I with row i replaced by e_j)
        Q = np.diag(1.0 - w.sum(axis=1)) + w
        return stationary_fixed_point(Q, self.fp_cfg)

    def _update(self, l):
        self.cum_loss += self.last[:, None] * (l[None, :] - l[:, None])
