"""Comparator specifications and their realisation as stochastic matrices.

Class-valued comparators (``block_constant`` and ``self_modified`` without
explicit rows) realise to the regret-maximising member of their class on
the given trace, which is what the scaling checks measure.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ..simplex import validate_prob_vector, validate_stochastic
from .adversaries import substream
from .regret import best_self_comparator, best_swap_comparator, best_uniform_comparator

KINDS = ("constant", "block_constant", "self_modified", "random_stochastic", "best_swap")


@dataclass(frozen=True)
class ComparatorSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown comparator kind {self.kind!r}; expected one of {KINDS}")

    def label(self):
        return json.dumps(self.params, sort_keys=True, separators=(",", ":"))


def _row(value, d):
    if isinstance(value, (int, np.integer)):
        if not 0 <= value < d:
            raise ValueError(f"expert index {value} out of range for d={d}")
        row = np.zeros(d)
        row[value] = 1.0
        return row
    return validate_prob_vector(np.asarray(value, dtype=float))


def _constant(d, trace, u):
    return np.tile(_row(u, d), (d, 1))


def _block_constant(d, trace, k, rows=None):
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")
    if rows is None:
        return best_uniform_comparator(trace, k)
    if len(rows) != k:
        raise ValueError(f"block_constant needs {k} rows, got {len(rows)}")
    # the first d-k+1 experts share rows[0]; each later expert has its own row
    shared = d - k + 1
    phi = np.empty((d, d))
    phi[:shared] = _row(rows[0], d)
    for m, r in enumerate(rows[1:]):
        phi[shared + m] = _row(r, d)
    return phi


def _self_modified(d, trace, k, targets=None):
    if not 0 <= k <= d:
        raise ValueError(f"k must lie in [0, {d}], got {k}")
    if targets is None:
        return best_self_comparator(trace, k)
    if len(targets) > k:
        raise ValueError(f"self_modified with k={k} got {len(targets)} targets")
    phi = np.eye(d)
    for i, target in targets.items():
        i = int(i)
        if not 0 <= i < d:
            raise ValueError(f"expert index {i} out of range for d={d}")
        phi[i] = _row(target, d)
    return phi


def _random_stochastic(d, trace, seed=0):
    return substream(seed, "comparator/random_stochastic").dirichlet(np.ones(d), size=d)


def _best_swap(d, trace):
    return best_swap_comparator(trace)


_BUILDERS = {
    "constant": _constant,
    "block_constant": _block_constant,
    "self_modified": _self_modified,
    "random_stochastic": _random_stochastic,
    "best_swap": _best_swap,
}


def realize(spec, trace):
    try:
        phi = _BUILDERS[spec.kind](trace.d, trace, **spec.params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {spec.kind}: {exc}") from None
    return validate_stochastic(phi)
