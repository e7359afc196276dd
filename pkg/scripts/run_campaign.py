"""Run a seeded compositional-correctness campaign and print one line per trial.

    python3 scripts/run_campaign.py --trials 500 --seed 3 --max-states 5
"""

import argparse
import sys
import time

from cftc.checker import Bounds
from cftc.generate import GenParams
from cftc.harness import Status, run_campaign


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", default="0")
    ap.add_argument("--max-states", type=int, default=4)
    ap.add_argument("--ports", type=int, default=3)
    ap.add_argument("--domain-size", type=int, default=2)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--env-depth", type=int, default=3)
    ap.add_argument("--max-offers", type=int, default=2)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--quiet", action="store_true", help="only print the summary and violations")
    args = ap.parse_args(argv)

    params = GenParams(args.max_states, args.ports, args.domain_size)
    bounds = Bounds(args.depth, args.env_depth, args.max_offers)
    start = time.perf_counter()
    summary = run_campaign(args.trials, args.seed, params, bounds, args.jobs)
    for trial, line in zip(summary.trials, summary.lines()):
        if not args.quiet or trial.report.status is Status.VIOLATION or not trial.transfer_ok:
            print(line)
    print(summary.lines()[-1])
    print(f"# {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return 1 if summary.violations or summary.transfer_failures or summary.strict_failures else 0


if __name__ == "__main__":
    sys.exit(main())
