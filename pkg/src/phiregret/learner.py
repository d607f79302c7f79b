"""Wavelet-feature phi-regret learner for prediction with expert advice.

Each round the learner

1. asks one scalar learner per matrix feature for a coefficient,
2. synthesises the improper matrix ``sum_b coef_b * b``,
3. projects it onto the stochastic matrices,
4. takes a fixed point on the augmented slots and collapses it to experts.

After the losses arrive it lifts them to the slots, forms the rank-one
gradient ``p_bar (x) l_bar``, pushes it through the gradient map of the
projection and hands each scalar learner the inner product of the result
with its feature.
"""

from dataclasses import dataclass

import numpy as np

from . import haar
from .constraint import ProjectionRecord, process_gradient, project
from .fixed_point import FixedPointConfig, stationary_fixed_point
from .relabel import build_default, collapse_distribution, lift_loss
from .scalar import ScalarLearnerBank
from .simplex import validate_loss

LIPSCHITZ = 2.0


class OutOfOrderCall(RuntimeError):
    pass


def eps_schedule(r):
    """Scalar-learner hyperparameter for every feature, in canonical order."""
    d, d_bar = r.d, r.d_bar
    blocks = r.slot_block_sizes.astype(float)
    ones = d_bar / (d * d * blocks)
    wav = np.tile(1.0 / (d * d * blocks), d_bar - 1)
    return np.concatenate([[1.0], ones, wav])


@dataclass
class RoundRecord:
    projection: ProjectionRecord
    p_bar: np.ndarray
    p: np.ndarray
    l_bar: np.ndarray | None = None
    g_improper: np.ndarray | None = None


class PhiLearner:
    def __init__(self, d, relabeling=None, fp_cfg=None):
        self.relabeling = relabeling if relabeling is not None else build_default(d)
        if self.relabeling.d != d:
            raise ValueError(f"relabeling is for d={self.relabeling.d}, not {d}")
        self.d = d
        self.d_bar = self.relabeling.d_bar
        self.fp_cfg = fp_cfg or FixedPointConfig()
        self.features = haar.enumerate_features(self.d_bar)
        self.eps = eps_schedule(self.relabeling)
        self.learners = ScalarLearnerBank(self.eps, G=LIPSCHITZ)
        self.t = 0
        self.last = None
        self._pending = False

    @property
    def n_features(self):
        return len(self.learners)

    def coefficients(self):
        return haar.CoefficientVector.from_flat(self.learners.predict(), self.d_bar)

    def predict(self):
        if self._pending:
            raise OutOfOrderCall("predict called twice without update")
        coef = self.coefficients()
        improper = haar.synthesize(coef)
        rec = project(improper)
        p_bar = stationary_fixed_point(rec.phi_proper, self.fp_cfg)
        p = collapse_distribution(p_bar, self.relabeling)
        self.last = RoundRecord(rec, p_bar, p)
        self._pending = True
        return p

    def update(self, l):
        if not self._pending:
            raise OutOfOrderCall("update called before predict")
        l = validate_loss(l, self.d)
        rec = self.last
        l_bar = lift_loss(l, self.relabeling)
        g_bar = np.outer(rec.p_bar, l_bar)
        g_imp = process_gradient(g_bar, rec.projection)
        ones, wav = haar.column_haar(g_imp)
        grads = np.concatenate([[np.trace(g_imp)], ones, wav.ravel()])
        self.learners.update(grads)
        rec.l_bar = l_bar
        rec.g_improper = g_imp
        self.t += 1
        self._pending = False
        return grads

    # aliases matching the protocol vocabulary
    step_predict = predict
    step_update = update
