"""Randomised invariant and bound checks for every component.

Each check draws from its own seeded substream, runs a batch of random
instances and returns a ``CheckResult``. ``run_all`` drives the lot and is
what ``phiregret verify`` calls; the test-suite calls individual checks.
``scale`` shrinks or grows the instance counts.
"""

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import haar
from .constraint import process_gradient, project
from .fixed_point import FixedPointConfig, residual, stationary_fixed_point
from .harness.adversaries import substream
from .harness.regret import (
    Trace,
    best_swap_comparator,
    quantile_regret,
    regret_of,
)
from .learner import PhiLearner
from .relabel import (
    Relabeling,
    build_default,
    check_relabeling,
    collapse_distribution,
    lift_comparator_self,
    lift_comparator_uniform,
    lift_loss,
)
from .scalar import EXP_CAP, ScalarLearner, bet, regret_guarantee
from .simplex import row_switch_count, self_degree, uniformity

MATRIX_KINDS = ("dense", "sparse", "vertex", "mode", "permutation", "block", "self_mix", "absorbing")
U_GRID = (0.0, 0.01, -0.01, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0)
SCALAR_SLACK = 3.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _count(n, scale):
    return max(1, int(round(n * scale)))


# ---------------------------------------------------------------- generators

def random_stochastic(rng, n, kind=None):
    """Random ``n x n`` right-stochastic matrix of the requested flavour."""
    kind = kind or MATRIX_KINDS[rng.integers(len(MATRIX_KINDS))]
    if kind == "dense":
        return rng.dirichlet(np.ones(n), size=n)
    if kind == "sparse":
        m = np.zeros((n, n))
        for i in range(n):
            cols = rng.choice(n, size=rng.integers(1, min(n, 3) + 1), replace=False)
            m[i, cols] = rng.dirichlet(np.ones(len(cols)))
        return m
    if kind == "vertex":
        m = np.zeros((n, n))
        m[np.arange(n), rng.integers(0, n, n)] = 1.0
        return m
    if kind == "mode":
        m = np.tile(rng.dirichlet(np.ones(n)), (n, 1))
        odd = rng.random(n) < rng.uniform(0.0, 0.5)
        m[odd] = rng.dirichlet(np.ones(n), size=int(odd.sum()))
        return m
    if kind == "permutation":
        m = np.zeros((n, n))
        m[np.arange(n), rng.permutation(n)] = 1.0
        return m
    if kind == "block":
        m = np.zeros((n, n))
        cut = int(rng.integers(1, n)) if n > 1 else 1
        for lo, hi in ((0, cut), (cut, n)):
            if hi > lo:
                m[lo:hi, lo:hi] = random_stochastic(rng, hi - lo, "sparse")
        return m
    if kind == "self_mix":
        m = np.eye(n)
        moved = rng.random(n) < rng.uniform(0.0, 1.0)
        m[moved] = random_stochastic(rng, n, "sparse")[moved]
        return m
    if kind == "absorbing":
        m = np.zeros((n, n))
        for i in range(n):
            m[i, i:] = rng.dirichlet(np.ones(n - i))
        return m
    raise ValueError(f"unknown matrix kind {kind!r}")


def random_dyadic(rng, max_log=6):
    return 1 << int(rng.integers(1, max_log + 1))


def random_relabeling(rng, d):
    """Random block sizes (each 1 or 2) filling the dyadic size of ``d``."""
    r = build_default(d)
    sizes = list(r.block_sizes)
    rng.shuffle(sizes)
    return Relabeling.from_blocks(sizes)


def dyadic_trace(rng, d, T):
    """Trace whose arithmetic is exact in binary floating point."""
    P = np.array([rng.multinomial(8, np.ones(d) / d) for _ in range(T)]) / 8.0
    L = rng.integers(-4, 5, size=(T, d)) / 4.0
    return Trace(P, L)


# ---------------------------------------------------------------- haar

def check_haar_orthogonality(rng, scale=1.0):
    worst = []
    for S in range(1, 8):
        d_bar = 1 << S
        H = np.stack([haar.haar_vector(S, 0, d_bar)] +
                     [haar.haar_vector(s, l, d_bar) for s in range(S, 0, -1)
                      for l in range(1, (1 << (S - s)) + 1)])
        gram = H @ H.T
        if np.any(gram - np.diag(np.diag(gram))):
            worst.append(d_bar)
        if d_bar <= 16:
            feats = [f for f in haar.enumerate_features(d_bar) if f.kind is not haar.Kind.IDENTITY]
            F = np.stack([haar.feature_matrix(f, d_bar).ravel() for f in feats])
            G = F @ F.T
            if np.any(G - np.diag(np.diag(G))):
                worst.append(d_bar)
            norms = np.array([haar.feature_norm_sq(f, d_bar) for f in feats])
            if np.any(np.diag(G) != norms):
                worst.append(d_bar)
    return not worst, "orthogonal for d_bar in 2..128" if not worst else f"failed at {worst}"


def check_round_trip(rng, scale=1.0):
    n = _count(1000, scale)
    err = 0.0
    for _ in range(n):
        d_bar = random_dyadic(rng, 6)
        phi = random_stochastic(rng, d_bar)
        for rep in haar.Rep:
            back = haar.synthesize(haar.analyze(phi, rep))
            err = max(err, float(np.abs(back - phi).max()))
    return err <= 1e-10, f"{n} matrices, max entry error {err:.2e}"


def check_coefficient_bound(rng, scale=1.0):
    n = _count(500, scale)
    worst = {1: 0.0, 2: 0.0}
    for _ in range(n):
        d_bar = random_dyadic(rng, 6)
        phi = random_stochastic(rng, d_bar)
        for rep in haar.Rep:
            worst[rep.value] = max(worst[rep.value], float(haar.analyze(phi, rep).column_sums().max()))
    ok = worst[1] <= 1 + 1e-12 and worst[2] <= 2 + 1e-12
    return ok, f"{n} matrices, max column-sum Rep1 {worst[1]:.6f} (<=1), Rep2 {worst[2]:.6f} (<=2)"


def check_constant_block_zeros(rng, scale=1.0):
    n = _count(500, scale)
    bad = 0
    for _ in range(n):
        d_bar = random_dyadic(rng, 6)
        S = haar.log2_exact(d_bar)
        phi = random_stochastic(rng, d_bar)
        s = int(rng.integers(1, S + 1))
        l = int(rng.integers(1, (1 << (S - s)) + 1))
        rows = haar.support(haar.FeatureId.wavelet(s, l, 0), d_bar)
        phi[rows.start:rows.stop] = phi[rows.start]
        c = haar.analyze(phi, haar.Rep.REP1)
        if np.any(c.wavelet[haar.wavelet_row(s, l, S)] != 0.0):
            bad += 1
        # nested wavelets inside a constant block vanish as well
        for s2 in range(1, s):
            for l2 in range((rows.start >> s2) + 1, (rows.stop >> s2) + 1):
                if np.any(c.wavelet[haar.wavelet_row(s2, l2, S)] != 0.0):
                    bad += 1
    return bad == 0, f"{n} constant-block instances, {bad} nonzero coefficients"


def check_sparsity_count(rng, scale=1.0):
    n = _count(300, scale)
    bad = 0
    for _ in range(n):
        d_bar = random_dyadic(rng, 6)
        S = haar.log2_exact(d_bar)
        phi = random_stochastic(rng, d_bar, rng.choice(["mode", "vertex", "self_mix"]))
        c = haar.analyze(phi, haar.Rep.REP1)
        switches = row_switch_count(phi, tol=0.0)
        for s in range(1, S + 1):
            lo = haar.wavelet_row(s, 1, S)
            active = np.count_nonzero(np.abs(c.wavelet[lo:lo + (1 << (S - s))]).sum(axis=1))
            bad += active > switches
    return bad == 0, f"{n} matrices, {bad} scales with more active locations than row switches"


# ---------------------------------------------------------------- relabel

def _random_comparator(rng, d):
    return random_stochastic(rng, d, rng.choice(["mode", "vertex", "self_mix", "sparse", "dense"]))


def check_relabel_structure(rng, scale=1.0):
    bad = []
    for d in range(1, 258):
        for r in (build_default(d), random_relabeling(rng, d)):
            try:
                check_relabeling(r)
            except ValueError as exc:
                bad.append((d, str(exc)))
    return not bad, "valid for d in 1..257" if not bad else f"{bad[:3]}"


def check_uniform_lift_switches(rng, scale=1.0):
    n = _count(500, scale)
    bad = 0
    for _ in range(n):
        d = int(rng.integers(1, 65))
        r = random_relabeling(rng, d)
        phi = _random_comparator(rng, d)
        lifted = lift_comparator_uniform(phi, r)
        bad += row_switch_count(lifted) > 2 * (d - uniformity(phi))
    return bad == 0, f"{n} comparators, {bad} violations of switches <= 2(d - d_unif)"


def check_self_lift_degree(rng, scale=1.0):
    n = _count(500, scale)
    bad = 0
    for _ in range(n):
        d = int(rng.integers(1, 65))
        r = random_relabeling(rng, d)
        phi = _random_comparator(rng, d)
        lifted = lift_comparator_self(phi, r)
        bad += r.d_bar - self_degree(lifted) > 2 * (d - self_degree(phi))
    return bad == 0, f"{n} comparators, {bad} violations of d_bar - d_self <= 2(d - d_self)"


def check_loss_preservation(rng, scale=1.0):
    n = _count(200, scale)
    err = 0.0
    for _ in range(n):
        d = int(rng.integers(1, 65))
        r = random_relabeling(rng, d)
        phi = _random_comparator(rng, d)
        p_bar = rng.dirichlet(np.ones(r.d_bar))
        l = rng.uniform(-1, 1, d)
        want = collapse_distribution(p_bar, r) @ phi @ l
        for lift in (lift_comparator_uniform, lift_comparator_self):
            got = p_bar @ lift(phi, r) @ lift_loss(l, r)
            err = max(err, abs(got - want))
    return err <= 1e-9, f"{n} triples, max loss gap {err:.2e}"


# ---------------------------------------------------------------- constraint oracle

def _improper_tuple(rng):
    d_bar = random_dyadic(rng, 6)
    imp = rng.uniform(-2, 2, (d_bar, d_bar))
    if rng.random() < 0.2:
        imp[rng.integers(d_bar)] = -np.abs(imp[0])  # force a zero-norm row
    p_bar = rng.dirichlet(np.ones(d_bar) * rng.choice([0.1, 1.0]))
    l_bar = rng.uniform(-1, 1, d_bar)
    return imp, p_bar, l_bar


def check_projection_inequality(rng, scale=1.0):
    n = _count(500, scale)
    worst = -np.inf
    for _ in range(n):
        imp, p_bar, l_bar = _improper_tuple(rng)
        rec = project(imp)
        g = np.outer(p_bar, l_bar)
        g_imp = process_gradient(g, rec)
        star = random_stochastic(rng, len(p_bar))
        lhs = np.sum(g * (rec.phi_proper - star))
        rhs = np.sum(g_imp * (imp - star))
        worst = max(worst, lhs - rhs)
    return worst <= 1e-9, f"{n} tuples, max(lhs - rhs) = {worst:.2e}"


def support_mass(p_bar):
    """Mass of ``p_bar`` on each wavelet support, in wavelet-array order."""
    out = np.empty(len(p_bar) - 1)
    block = np.asarray(p_bar, dtype=float)
    while len(block) > 1:
        block = block.reshape(-1, 2).sum(axis=1)
        n = len(block)
        out[n - 1:2 * n - 1] = block
    return out


def gradient_bound_excess(g_imp, p_bar):
    """Largest excess of a feature gradient over its bound (<= 0 means fine)."""
    ones, wav = haar.column_haar(g_imp)
    over = [
        float(np.max(np.abs(ones)) - 2.0 * p_bar.sum()),
        float(abs(np.trace(g_imp)) - 2.0),
    ]
    if len(p_bar) > 1:
        over.append(float(np.max(np.abs(wav) - 2.0 * support_mass(p_bar)[:, None])))
    return max(over)


def check_gradient_bounds(rng, scale=1.0):
    n = _count(500, scale)
    worst = -np.inf
    for _ in range(n):
        imp, p_bar, l_bar = _improper_tuple(rng)
        rec = project(imp)
        g_imp = process_gradient(np.outer(p_bar, l_bar), rec)
        worst = max(worst, gradient_bound_excess(g_imp, p_bar))
    return worst <= 1e-12, f"{n} tuples, max excess over bound {worst:.2e}"


# ---------------------------------------------------------------- scalar learner

def _oblivious_sequences(rng, T, G):
    half = T // 2
    return {
        "constant+G": np.full(T, G),
        "constant-G": np.full(T, -G),
        "alternating": G * (-1.0) ** np.arange(T),
        "random_sign": G * rng.choice([-1.0, 1.0], T),
        "random_uniform": rng.uniform(-G, G, T),
        "small_drift": np.full(T, -0.01 * G),
        "switch": np.concatenate([np.full(half, -G), np.full(T - half, G)]),
        "quiet_then_burst": np.concatenate([np.zeros(half), np.full(T - half, -G)]),
    }


def _predictions(c, eps, G):
    S = np.concatenate([[0.0], -np.cumsum(c)[:-1]])
    A = np.concatenate([[0.0], np.cumsum(np.abs(c))[:-1]])
    return bet(S, A, eps, G), S, A


def _sign_adversary(T, eps, G):
    lrn = ScalarLearner(eps, G)
    c = np.empty(T)
    x = np.empty(T)
    for t in range(T):
        x[t] = lrn.predict()
        c[t] = G if x[t] >= 0 else -G
        lrn.update(c[t])
    return c, x


def scalar_battery(rng, T=100_000, G=2.0, eps_grid=(1.0, 1.0 / 9, 1.0 / 4096)):
    """Yield ``(name, eps, c, x)`` for every sequence of the battery."""
    for eps in eps_grid:
        for name, c in _oblivious_sequences(rng, T, G).items():
            x, _, _ = _predictions(c, eps, G)
            yield name, eps, c, x
        c, x = _sign_adversary(T, eps, G)
        yield "sign_adversary", eps, c, x


def check_scalar_contract(rng, scale=1.0):
    T = _count(100_000, scale)
    G = 2.0
    violations, worst, capped, runs = 0, -np.inf, 0, 0
    for name, eps, c, x in scalar_battery(rng, T, G):
        runs += 1
        with np.errstate(over="ignore", invalid="ignore"):
            learner_loss = float(np.sum(c * x))
        abs_sum = float(np.abs(c).sum())
        S = -np.cumsum(c)
        V = 2.0 * (G * G + G * np.cumsum(np.abs(c)))
        capped += bool(np.any(S * S / (2 * V) >= EXP_CAP))
        if not np.all(np.isfinite(x)):
            violations += 1
            continue
        for u in U_GRID:
            regret = learner_loss - u * float(c.sum())
            bound = regret_guarantee(abs_sum, u, eps, G)
            ratio = regret / bound
            worst = max(worst, ratio)
            violations += not regret <= SCALAR_SLACK * bound
        violations += not learner_loss <= regret_guarantee(abs_sum, 0.0, eps, G)
    return violations == 0, (f"{runs} sequences x {len(U_GRID)} comparators at T={T}, "
                             f"worst regret/bound {worst:.3f} (limit {SCALAR_SLACK}), "
                             f"{violations} violations; {capped} sequences reached the exponent cap")


# ---------------------------------------------------------------- fixed point

def check_fixed_point(rng, scale=1.0):
    n = _count(1000, scale)
    worst = 0.0
    for k in range(n):
        d_bar = [2, 4, 8, 16, 64][k % 5]
        phi = random_stochastic(rng, d_bar, MATRIX_KINDS[k % len(MATRIX_KINDS)])
        p = stationary_fixed_point(phi, FixedPointConfig())
        if abs(p.sum() - 1.0) > 1e-12 or np.any(p < 0):
            return False, f"output off the simplex for instance {k}"
        worst = max(worst, residual(phi, p))
    return worst <= 1e-9, f"{n} matrices (incl. reducible and periodic), max residual {worst:.2e}"


def check_reduction_identity(rng, scale=1.0):
    n = _count(200, scale)
    err = 0.0
    for _ in range(n):
        d_bar = random_dyadic(rng, 6)
        phi = random_stochastic(rng, d_bar)
        star = random_stochastic(rng, d_bar)
        l = rng.uniform(-1, 1, d_bar)
        p = stationary_fixed_point(phi)
        lhs = (p - p @ star) @ l
        rhs = np.sum(np.outer(p, l) * (phi - star))
        err = max(err, abs(lhs - rhs))
    return err <= 1e-9, f"{n} instances, max gap {err:.2e}"


# ---------------------------------------------------------------- learner

def check_learner_rounds(rng, scale=1.0):
    """Valid predictions, in-range scalar inputs and exact regret telescoping."""
    runs = _count(12, scale)
    worst_tel, worst_grad, worst_exp = 0.0, -np.inf, 0.0
    for _ in range(runs):
        d = int(rng.integers(1, 20))
        T = int(rng.integers(50, 300))
        r = random_relabeling(rng, d)
        lrn = PhiLearner(d, r)
        star = _random_comparator(rng, d)
        lifts = [lift_comparator_uniform(star, r), lift_comparator_self(star, r)]
        trace_side, internal = [], [[], []]
        for _ in range(T):
            p = lrn.predict()
            if abs(p.sum() - 1) > 1e-9 or np.any(p < 0):
                return False, "invalid prediction"
            l = rng.uniform(-1, 1, d)
            grads = lrn.update(l)
            rec = lrn.last
            if np.max(np.abs(grads)) > 2.0:
                return False, "scalar input outside [-2, 2]"
            worst_grad = max(worst_grad, gradient_bound_excess(rec.g_improper, rec.p_bar))
            trace_side.append((p - p @ star) @ l)
            g = np.outer(rec.p_bar, rec.l_bar)
            for k, lifted in enumerate(lifts):
                internal[k].append(np.sum(g * (rec.projection.phi_proper - lifted)))
        worst_exp = max(worst_exp, float(lrn.learners.exponents().max()))
        a = math.fsum(trace_side)
        for seq in internal:
            worst_tel = max(worst_tel, abs(a - math.fsum(seq)) / T)
    ok = worst_tel <= 1e-6 and worst_grad <= 1e-12 and worst_exp < EXP_CAP
    return ok, (f"{runs} runs, telescoping gap/T {worst_tel:.2e}, "
                f"max excess over gradient bound {worst_grad:.2e}, max exponent {worst_exp:.2f}")


# ---------------------------------------------------------------- regret accounting

def check_supremum(rng, scale=1.0):
    n = _count(20, scale)
    worst = -np.inf
    for _ in range(n):
        d = int(rng.integers(1, 9))
        T = int(rng.integers(1, 200))
        tr = Trace(rng.dirichlet(np.ones(d), T), rng.uniform(-1, 1, (T, d)))
        best = regret_of(tr, best_swap_comparator(tr))
        for _ in range(100):
            worst = max(worst, regret_of(tr, random_stochastic(rng, d)) - best)
    return worst <= 1e-9, f"{n} traces x 100 comparators, max excess over swap {worst:.2e}"


def check_quantile_monotone(rng, scale=1.0):
    n = _count(200, scale)
    bad = 0
    for _ in range(n):
        d = int(rng.integers(1, 17))
        T = int(rng.integers(1, 50))
        tr = dyadic_trace(rng, d, T)
        vals = [quantile_regret(tr, k / d) for k in range(1, d + 1)]
        bad += any(a < b for a, b in zip(vals, vals[1:]))
    return bad == 0, f"{n} traces, {bad} non-monotone"


def check_brute_force_swap(rng, scale=1.0):
    n = _count(200, scale)
    bad = 0
    for _ in range(n):
        d = int(rng.integers(1, 5))
        T = int(rng.integers(1, 9))
        tr = dyadic_trace(rng, d, T)
        best_val, best_map = -np.inf, None
        for targets in itertools.product(range(d), repeat=d):
            phi = np.zeros((d, d))
            phi[np.arange(d), targets] = 1.0
            v = regret_of(tr, phi)
            if v > best_val:
                best_val, best_map = v, phi
        got = best_swap_comparator(tr)
        bad += not (regret_of(tr, got) == best_val and np.array_equal(got, best_map))
    return bad == 0, f"{n} traces, {bad} mismatches with exhaustive search"


CHECKS = {
    "haar_orthogonality": check_haar_orthogonality,
    "haar_round_trip": check_round_trip,
    "coefficient_bound": check_coefficient_bound,
    "constant_block_zeros": check_constant_block_zeros,
    "sparsity_count": check_sparsity_count,
    "relabel_structure": check_relabel_structure,
    "uniform_lift_switches": check_uniform_lift_switches,
    "self_lift_degree": check_self_lift_degree,
    "lift_loss_preservation": check_loss_preservation,
    "projection_inequality": check_projection_inequality,
    "gradient_bounds": check_gradient_bounds,
    "scalar_contract": check_scalar_contract,
    "fixed_point_residual": check_fixed_point,
    "reduction_identity": check_reduction_identity,
    "learner_rounds": check_learner_rounds,
    "swap_supremum": check_supremum,
    "quantile_monotone": check_quantile_monotone,
    "brute_force_swap": check_brute_force_swap,
}


def run_check(name, seed=0, scale=1.0):
    start = time.perf_counter()
    try:
        passed, detail = CHECKS[name](substream(seed, f"check/{name}"), scale)
    except Exception as exc:  # a crash is a failed check, reported not raised
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(name, bool(passed), detail, time.perf_counter() - start)


def run_all(seed=0, scale=1.0, names=None):
    return [run_check(n, seed, scale) for n in (names or CHECKS)]
