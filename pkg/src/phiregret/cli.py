"""Command line entry point: ``phiregret run|sweep|verify|report``."""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import checks
from .harness import report as summary
from .harness.config import load_config, load_sweep
from .harness.experiment import ConfigError, render, run_experiment


def _u64(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_one(cfg):
    report, _ = run_experiment(cfg)
    return report


def cmd_run(args):
    cfg = load_config(args.config, seed=args.seed)
    if args.no_timing:
        cfg = cfg.with_overrides(timing=False)
    _emit(render([_run_one(cfg)], args.format), args.out)
    return 0


def cmd_sweep(args):
    cfgs = load_sweep(args.config, seed=args.seed)
    if args.no_timing:
        cfgs = [c.with_overrides(timing=False) for c in cfgs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_run_one, cfgs))
    else:
        reports = [_run_one(c) for c in cfgs]
    # results are gathered in grid order, so output does not depend on --jobs
    _emit(render(reports, args.format), args.out)
    return 0


def cmd_verify(args):
    results = []
    for name in args.only or checks.CHECKS:
        res = checks.run_check(name, seed=args.seed or 0, scale=args.scale)
        results.append(res)
        if args.format == "csv":
            print(res.line(), flush=True)
    if args.format == "json":
        print(json.dumps([r.__dict__ for r in results], indent=1))
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=sys.stderr)
    return 1 if failed else 0


def cmd_report(args):
    rows = summary.read_rows(args.csv)
    table = summary.summarize(rows, final_only=args.final)
    _emit(summary.render_summary(table, args.format), args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="phiregret", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--seed", type=_u64, help="override the config seed")
        p.add_argument("--out", help="write results here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    p = sub.add_parser("run", help="run one experiment from a TOML config")
    p.add_argument("config")
    common(p)
    p.add_argument("--no-timing", action="store_true", help="leave wallclock_ms empty for byte-stable output")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run the grid described by a sweep config")
    p.add_argument("config")
    common(p, jobs=True)
    p.add_argument("--no-timing", action="store_true", help="leave wallclock_ms empty for byte-stable output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant and property suite")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="csv prints one line per check, json a list of records")
    p.add_argument("--scale", type=float, default=1.0, help="multiply instance counts")
    p.add_argument("--only", nargs="+", choices=sorted(checks.CHECKS), metavar="CHECK")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="aggregate result CSVs into a summary table")
    p.add_argument("csv", nargs="+")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--final", action="store_true", help="keep only each run's last checkpoint")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
