"""Summary tables from result CSVs.

Rows are grouped by everything except ``run_id``, ``regret_value`` and
``wallclock_ms``, so repeated seeds of one setting collapse to a single
line with count, mean, standard deviation, min and max.
"""

import csv
import io
import json
import statistics
from collections import defaultdict

from .experiment import CSV_COLUMNS

GROUP_KEYS = ("algorithm", "d", "adversary", "comparator_kind", "comparator_params", "T_checkpoint")
SUMMARY_COLUMNS = GROUP_KEYS + ("n_runs", "mean", "std", "min", "max", "mean_wallclock_ms")


def read_rows(paths):
    rows = []
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"{path}: missing columns {sorted(missing)}")
            rows.extend(reader)
    return rows


def summarize(rows, final_only=False):
    if final_only:
        last = defaultdict(int)
        for r in rows:
            last[r["run_id"]] = max(last[r["run_id"]], int(r["T_checkpoint"]))
        rows = [r for r in rows if int(r["T_checkpoint"]) == last[r["run_id"]]]
    groups = defaultdict(list)
    for r in rows:
        groups[tuple(r[k] for k in GROUP_KEYS)].append(r)

    def order(key):
        alg, d, adv, kind, params, t = key
        return (alg, int(d), adv, kind, params, int(t))

    table = []
    for key in sorted(groups, key=order):
        vals = [float(r["regret_value"]) for r in groups[key]]
        clocks = [float(r["wallclock_ms"]) for r in groups[key] if r["wallclock_ms"]]
        table.append({
            **dict(zip(GROUP_KEYS, key)),
            "n_runs": len(vals),
            "mean": statistics.fmean(vals),
            "std": statistics.stdev(vals) if len(vals) > 1 else 0.0,
            "min": min(vals),
            "max": max(vals),
            "mean_wallclock_ms": statistics.fmean(clocks) if clocks else None,
        })
    return table


def render_summary(table, fmt="csv"):
    buf = io.StringIO()
    if fmt == "json":
        json.dump(table, buf, indent=1)
        buf.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in table:
            w.writerow({k: "" if v is None else v for k, v in row.items()})
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return buf.getvalue()
