"""Sweep the axiom suite over growing exhaustive fleets.

    python scripts/axiom_fleet.py --max-worlds 4 --jobs 4
"""

from __future__ import annotations

import argparse
import time

from topopal.lab.suites import load_suite, run_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-worlds", type=int, default=3)
    ap.add_argument("--suite", default="axioms")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--save-counterexamples", metavar="DIR")
    args = ap.parse_args()

    base = load_suite(args.suite)
    for n in range(1, args.max_worlds + 1):
        t0 = time.perf_counter()
        report = run_suite(base.with_overrides(max_worlds=n), jobs=args.jobs,
                           save_dir=args.save_counterexamples)
        print(f"== n <= {n}  ({time.perf_counter() - t0:.1f}s)")
        print(report.to_text())


if __name__ == "__main__":
    main()
