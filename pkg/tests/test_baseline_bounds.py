"""Empirical regret guarantees of the comparison baselines over the adversary battery."""

import math

import numpy as np
import pytest

from phiregret.harness import AdversarySpec, ExperimentConfig
from phiregret.harness.adversaries import KINDS
from phiregret.harness.experiment import play
from phiregret.harness.regret import external_regret, internal_regret, swap_regret


def _trace(algorithm, d, T, kind, seed=0):
    return play(ExperimentConfig(algorithm, d, T, AdversarySpec(kind, {}), (), seed, checkpoints=[T]))[0]


@pytest.mark.slow
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("d,T", [(2, 100_000), (8, 20_000), (64, 20_000)])
def test_mwu_external_bound(kind, d, T):
    trace = _trace("mwu", d, T, kind)
    for t in (T // 100, T // 10, T):
        assert external_regret(trace.prefix(t)) <= 2 * math.sqrt(t * math.log(d)) + 10


@pytest.mark.slow
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("d", [2, 8])
def test_internal_mwu_bound(kind, d):
    T = 10_000
    trace = _trace("internal_mwu", d, T, kind)
    assert internal_regret(trace) <= 4 * math.sqrt(T * math.log(d))


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["iid_uniform", "swap_trap"])
@pytest.mark.parametrize("d", [4, 8])
def test_blum_mansour_swap_slope(kind, d):
    horizons = (1_000, 10_000, 100_000)
    trace = _trace("blum_mansour", d, horizons[-1], kind)
    regs = [swap_regret(trace.prefix(t)) for t in horizons]
    slope = np.polyfit(np.log(horizons), np.log(regs), 1)[0]
    print(f"blum_mansour d={d} {kind}: swap regrets {regs}, slope {slope:.3f}")
    assert 0.4 <= slope <= 0.6
