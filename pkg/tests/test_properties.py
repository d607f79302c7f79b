"""Full-size randomised invariant checks not already covered by the acceptance suite."""

import pytest

from phiregret import checks

NAMES = [
    "sparsity_count",
    "relabel_structure",
    "lift_loss_preservation",
    "reduction_identity",
    "learner_rounds",
    "swap_supremum",
    "quantile_monotone",
]


@pytest.mark.parametrize("name", NAMES)
def test_check(name):
    res = checks.run_check(name, seed=0)
    print(res.line())
    assert res.passed, res.detail


def test_every_check_is_exercised_somewhere():
    from test_acceptance import ACCEPTANCE_CHECKS

    assert set(NAMES) | set(ACCEPTANCE_CHECKS) == set(checks.CHECKS)


def test_failures_are_reported_not_raised(monkeypatch):
    def boom(rng, scale):
        raise RuntimeError("kaput")

    monkeypatch.setitem(checks.CHECKS, "boom", boom)
    res = checks.run_check("boom")
    assert not res.passed and "kaput" in res.detail
