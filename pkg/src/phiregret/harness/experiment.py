"""Experiment configuration, the protocol loop and the regret report."""

import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from ..baselines import MWU, BlumMansour, InternalMWU
from ..learner import PhiLearner
from .adversaries import AdversarySpec, adversary_next, make_adversary
from .comparators import ComparatorSpec, realize
from .regret import (
    Trace,
    external_regret,
    internal_regret,
    quantile_regret,
    regret_of,
    swap_regret,
)

ALGORITHMS = {
    "wavelet": PhiLearner,
    "mwu": MWU,
    "internal_mwu": InternalMWU,
    "blum_mansour": BlumMansour,
}

CSV_COLUMNS = (
    "run_id",
    "algorithm",
    "d",
    "T_checkpoint",
    "adversary",
    "comparator_kind",
    "comparator_params",
    "regret_value",
    "wallclock_ms",
)

SUPREMUM_SLACK = 1e-9


class ConfigError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class SupremumViolated(AssertionError):
    pass


def default_checkpoints(T):
    """Powers of two up to ``T``, plus ``T`` itself so the final value is always reported."""
    return tuple(sorted({1 << k for k in range(T.bit_length())} | {T}))


def default_quantile_grid(d):
    return tuple(e for e in sorted({1.0 / d, 0.25, 0.5, 1.0}) if e >= 1.0 / d)


def _positive_int(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ConfigError(path, f"expected a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    d: int
    T: int
    adversary: AdversarySpec
    comparators: tuple
    seed: int
    checkpoints: tuple | None = None
    quantile_eps: tuple | None = None
    timing: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError("experiment.algorithm",
                              f"expected one of {sorted(ALGORITHMS)}, got {self.algorithm!r}")
        d = _positive_int(self.d, "experiment.d")
        T = _positive_int(self.T, "experiment.T")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) \
                or not 0 <= self.seed < 2**64:
            raise ConfigError("experiment.seed", f"expected an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "comparators", tuple(self.comparators))
        if self.checkpoints is None:
            object.__setattr__(self, "checkpoints", default_checkpoints(T))
        else:
            cps = []
            for n, c in enumerate(self.checkpoints):
                c = _positive_int(c, f"experiment.checkpoints[{n}]")
                if c > T:
                    raise ConfigError(f"experiment.checkpoints[{n}]", f"{c} exceeds T={T}")
                cps.append(c)
            object.__setattr__(self, "checkpoints", tuple(sorted(set(cps))))
        if self.quantile_eps is None:
            object.__setattr__(self, "quantile_eps", default_quantile_grid(d))
        else:
            for n, e in enumerate(self.quantile_eps):
                if not 1.0 / d - 1e-12 <= e <= 1.0 + 1e-12:
                    raise ConfigError(f"experiment.quantile_eps[{n}]", f"{e} outside [1/{d}, 1]")
            object.__setattr__(self, "quantile_eps", tuple(float(e) for e in self.quantile_eps))

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "d": self.d,
            "T": self.T,
            "seed": self.seed,
            "checkpoints": list(self.checkpoints),
            "quantile_eps": list(self.quantile_eps),
            "adversary": {"kind": self.adversary.kind, **self.adversary.params},
            "comparators": [{"kind": c.kind, **c.params} for c in self.comparators],
        }

    def run_id(self):
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def with_overrides(self, **changes):
        fields = {
            "algorithm": self.algorithm, "d": self.d, "T": self.T,
            "adversary": self.adversary, "comparators": self.comparators, "seed": self.seed,
            "checkpoints": self.checkpoints, "quantile_eps": self.quantile_eps,
            "timing": self.timing,
        }
        # derived defaults must follow a changed d or T
        if "T" in changes and "checkpoints" not in changes:
            fields["checkpoints"] = None
        if "d" in changes and "quantile_eps" not in changes:
            fields["quantile_eps"] = None
        fields.update(changes)
        return ExperimentConfig(**fields)


@dataclass
class ReportRow:
    T_checkpoint: int
    comparator_kind: str
    comparator_params: str
    regret_value: float
    wallclock_ms: float | None


@dataclass
class RegretReport:
    run_id: str
    algorithm: str
    d: int
    adversary: str
    rows: list = field(default_factory=list)

    def value(self, kind, params=None, T=None):
        """Look up one regret; ``T`` defaults to the last checkpoint."""
        T = T if T is not None else max(r.T_checkpoint for r in self.rows)
        key = params if isinstance(params, str) or params is None else _params_label(params)
        for r in self.rows:
            if r.T_checkpoint == T and r.comparator_kind == kind and (key is None or r.comparator_params == key):
                return r.regret_value
        raise KeyError((kind, params, T))

    def records(self):
        for r in self.rows:
            yield {
                "run_id": self.run_id,
                "algorithm": self.algorithm,
                "d": self.d,
                "T_checkpoint": r.T_checkpoint,
                "adversary": self.adversary,
                "comparator_kind": r.comparator_kind,
                "comparator_params": r.comparator_params,
                "regret_value": r.regret_value,
                "wallclock_ms": r.wallclock_ms,
            }

    def check_supremum(self):
        """Swap regret must dominate every other regret at each checkpoint."""
        by_t = {}
        for r in self.rows:
            by_t.setdefault(r.T_checkpoint, []).append(r)
        for t, rows in by_t.items():
            swap = next(r.regret_value for r in rows if r.comparator_kind == "swap")
            for r in rows:
                if r.regret_value > swap + SUPREMUM_SLACK * max(1.0, abs(swap)):
                    raise SupremumViolated(
                        f"T={t}: {r.comparator_kind}{r.comparator_params}={r.regret_value} > swap={swap}")


def _params_label(params):
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def make_learner(cfg):
    return ALGORITHMS[cfg.algorithm](cfg.d)


def play(cfg):
    """Run the protocol loop; return the trace and elapsed ms at each checkpoint."""
    learner = make_learner(cfg)
    adv = make_adversary(cfg.adversary, cfg.d, cfg.T, cfg.seed)
    P = np.empty((cfg.T, cfg.d))
    L = np.empty((cfg.T, cfg.d))
    marks = set(cfg.checkpoints)
    clock = {}
    start = time.perf_counter()
    for t in range(cfg.T):
        p = learner.predict()
        l = adversary_next(adv, p, t)
        learner.update(l)
        P[t] = p
        L[t] = l
        if t + 1 in marks:
            clock[t + 1] = (time.perf_counter() - start) * 1e3
    trace = Trace(P, L, seed=cfg.seed, algorithm=cfg.algorithm)
    return trace, clock


def evaluate(cfg, trace, clock=None):
    report = RegretReport(cfg.run_id(), cfg.algorithm, cfg.d, cfg.adversary.kind)
    for t in cfg.checkpoints:
        tr = trace.prefix(t)
        ms = clock.get(t) if (clock and cfg.timing) else None

        def add(kind, params, value):
            report.rows.append(ReportRow(t, kind, params, float(value), ms))

        add("external", "{}", external_regret(tr))
        add("internal", "{}", internal_regret(tr))
        add("swap", "{}", swap_regret(tr))
        for e in cfg.quantile_eps:
            add("quantile", _params_label({"eps": e}), quantile_regret(tr, e))
        for spec in cfg.comparators:
            add(spec.kind, spec.label(), regret_of(tr, realize(spec, tr)))
    report.check_supremum()
    return report


def run_experiment(cfg):
    trace, clock = play(cfg)
    return evaluate(cfg, trace, clock), trace


def _fmt(value):
    if value is None:
        return ""
    return repr(float(value))


def write_csv(reports, stream, header=True):
    w = csv.writer(stream, lineterminator="\n")
    if header:
        w.writerow(CSV_COLUMNS)
    for rep in reports:
        for rec in rep.records():
            rec["regret_value"] = _fmt(rec["regret_value"])
            rec["wallclock_ms"] = _fmt(rec["wallclock_ms"])
            w.writerow([rec[c] for c in CSV_COLUMNS])


def write_json(reports, stream):
    json.dump([rec for rep in reports for rec in rep.records()], stream, indent=1)
    stream.write("\n")


def render(reports, fmt="csv"):
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(reports, buf)
    elif fmt == "json":
        write_json(reports, buf)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue()
