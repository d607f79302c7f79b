"""Fixed points of right-stochastic matrices (stationary distributions).

The primary route is a dense LU solve of ``(phi^T - I) p = 0`` with one
equation swapped for ``sum(p) = 1``. When the matrix is reducible the
system is singular and we fall back to power iteration of the lazy chain
``p <- (p + phi^T p) / 2`` from the uniform vector, which converges for any
stochastic matrix; iterates are taken at powers of two by repeated squaring.
If that still misses the tolerance we restrict to the first closed
communicating class, which is irreducible with a unique stationary vector.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components


class NoConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class FixedPointConfig:
    tol: float = 1e-10
    max_power_iters: int | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def power_iters(self, n):
        if self.max_power_iters is not None:
            return self.max_power_iters
        return int(math.ceil(10 * n * math.log(1.0 / self.tol)))


def residual(phi, p):
    return float(np.abs(p - p @ phi).sum())


def _clean(p):
    p = np.maximum(p, 0.0)
    total = p.sum()
    if not np.isfinite(total) or total <= 0.0:
        return None
    return p / total


def _solve(phi):
    n = phi.shape[0]
    a = phi.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        with np.errstate(all="ignore"):
            p = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(p)):
        return None
    return _clean(p)


def _closed_class(phi):
    n = phi.shape[0]
    graph = phi > 0.0
    _, labels = connected_components(graph, directed=True, connection="strong")
    for c in np.unique(labels):
        members = labels == c
        if not np.any(graph[np.ix_(members, ~members)]):
            idx = np.flatnonzero(members)
            sub = phi[np.ix_(idx, idx)]
            sub = sub / sub.sum(axis=1, keepdims=True)
            q = _solve(sub) if len(idx) > 1 else np.ones(1)
            if q is None:
                return None
            p = np.zeros(n)
            p[idx] = q
            return p
    return None


def _power(phi, cfg):
    n = phi.shape[0]
    u = np.full(n, 1.0 / n)
    lazy = 0.5 * (np.eye(n) + phi)
    # after k squarings ``lazy`` is the 2**k-step operator
    for _ in range(max(1, cfg.power_iters(n)).bit_length() + 1):
        p = u @ lazy
        p /= p.sum()
        if residual(phi, p) <= cfg.tol:
            return p
        lazy = lazy @ lazy
        lazy /= lazy.sum(axis=1, keepdims=True)
    return None


def stationary_fixed_point(phi, cfg=FixedPointConfig()):
    """Return ``p`` on the simplex with ``||p - phi^T p||_1 <= cfg.tol``.

    Raises
    ------
    NoConvergence
        None of the routes met the tolerance.
    """
    phi = np.asarray(phi, dtype=float)
    for method in (_solve, lambda m: _power(m, cfg), _closed_class):
        p = method(phi)
        if p is not None and residual(phi, p) <= cfg.tol:
            return p
    raise NoConvergence(f"no fixed point within residual {cfg.tol}")
