"""TOML experiment and sweep configs.

A run config looks like::

    comparators = [{kind = "block_constant", k = 4}, {kind = "best_swap"}]

    [experiment]
    algorithm = "wavelet"
    d = 8
    T = 2000
    seed = 7
    # checkpoints = [100, 1000, 2000]     optional
    # quantile_eps = [0.125, 0.5]         optional

    [adversary]
    kind = "segmented"
    segments = 4

A sweep config adds a ``[sweep]`` table whose keys (``algorithm``, ``d``,
``T``, ``adversary``, ``seed``) hold lists; the grid is their product.
Per-kind adversary parameters for the sweep go in ``[adversary_params.<kind>]``.
"""

import itertools
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .adversaries import AdversarySpec
from .comparators import ComparatorSpec
from .experiment import ConfigError, ExperimentConfig

SWEEP_AXES = ("algorithm", "d", "T", "adversary", "seed")
_EXPERIMENT_KEYS = {"algorithm", "d", "T", "seed", "checkpoints", "quantile_eps"}


def _require(table, key, path):
    if key not in table:
        raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
    return table[key]


def _table(value, path):
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected a table, got {type(value).__name__}")
    return value


def _spec(cls, table, path):
    table = dict(_table(table, path))
    kind = _require(table, "kind", path)
    params = {k: v for k, v in table.items() if k != "kind"}
    try:
        return cls(kind, params)
    except ValueError as exc:
        raise ConfigError(f"{path}.kind", str(exc)) from None


def config_from_dict(data, seed=None):
    exp = _table(_require(data, "experiment", ""), "experiment")
    unknown = set(exp) - _EXPERIMENT_KEYS
    if unknown:
        raise ConfigError(f"experiment.{sorted(unknown)[0]}", "unknown field")
    for key in ("algorithm", "d", "T", "seed"):
        _require(exp, key, "experiment")
    adversary = _spec(AdversarySpec, _require(data, "adversary", ""), "adversary")
    raw = _require(data, "comparators", "")
    if not isinstance(raw, list):
        raise ConfigError("comparators", "expected an array of tables")
    comparators = tuple(_spec(ComparatorSpec, c, f"comparators[{n}]") for n, c in enumerate(raw))
    return ExperimentConfig(
        algorithm=exp["algorithm"],
        d=exp["d"],
        T=exp["T"],
        adversary=adversary,
        comparators=comparators,
        seed=exp["seed"] if seed is None else seed,
        checkpoints=exp.get("checkpoints"),
        quantile_eps=exp.get("quantile_eps"),
    )


def read_toml(path):
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(str(path), f"invalid TOML: {exc}") from None


def load_config(path, seed=None):
    return config_from_dict(read_toml(path), seed=seed)


def sweep_from_dict(data, seed=None):
    """Expand a sweep table into a list of configs in a fixed order."""
    grid = _table(data.get("sweep", {}), "sweep")
    unknown = set(grid) - set(SWEEP_AXES)
    if unknown:
        raise ConfigError(f"sweep.{sorted(unknown)[0]}", f"not a sweep axis; choose from {SWEEP_AXES}")
    base = dict(data)
    base.pop("sweep", None)
    extra = _table(base.pop("adversary_params", {}), "adversary_params")
    exp = dict(base.get("experiment", {}))
    # axes swept below need no value in [experiment]
    for axis in ("algorithm", "d", "T", "seed"):
        if axis in grid:
            exp.setdefault(axis, grid[axis][0] if grid[axis] else None)
    base["experiment"] = exp
    if "adversary" in grid and "adversary" not in base:
        base["adversary"] = {"kind": grid["adversary"][0]}
    if seed is not None and "seed" in grid:
        raise ConfigError("sweep.seed", "cannot combine a seed axis with --seed")
    template = config_from_dict(base, seed=seed)

    axes = [a for a in SWEEP_AXES if a in grid]
    for a in axes:
        if not isinstance(grid[a], list) or not grid[a]:
            raise ConfigError(f"sweep.{a}", "expected a non-empty array")
    configs = []
    for combo in itertools.product(*(grid[a] for a in axes)):
        changes = dict(zip(axes, combo))
        if "adversary" in changes:
            kind = changes.pop("adversary")
            params = extra.get(kind, template.adversary.params if kind == template.adversary.kind else {})
            try:
                changes["adversary"] = AdversarySpec(kind, params)
            except ValueError as exc:
                raise ConfigError("sweep.adversary", str(exc)) from None
        configs.append(template.with_overrides(**changes))
    return configs


def load_sweep(path, seed=None):
    return sweep_from_dict(read_toml(path), seed=seed)
