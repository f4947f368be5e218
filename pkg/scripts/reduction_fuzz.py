"""Reduce seeded random formulas and report step counts, size growth and
which schemes fire, checking each result on random models.

    python scripts/reduction_fuzz.py --count 2000 --depth 4 --seed 1
"""

from __future__ import annotations

import argparse
import random
import statistics
from collections import Counter

import numpy as np

from topopal.lab.fleet import FleetBatch
from topopal.lab.generators import random_formula, random_model
from topopal.reduction import reduce
from topopal.syntax import size


def main() -> None:
    ap = argparse.ArgumentParser(description="reduction fuzzing")
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--models", type=int, default=50)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    mrng = random.Random(args.seed + 1)
    fleet = FleetBatch.from_models(random_model(mrng.randrange(1 << 30), mrng.randint(1, 4))
                                   for _ in range(args.models))
    steps, growth, schemes = [], [], Counter()
    bad = 0
    for _ in range(args.count):
        f = random_formula(rng, args.depth, ["p", "q"])
        tr = reduce(f)
        steps.append(len(tr))
        growth.append(size(tr.output) / size(f))
        schemes.update(s.scheme for s in tr.steps)
        bad += not np.array_equal(fleet.extension(f), fleet.extension(tr.output))
        fleet.memo.clear()
    print(f"{args.count} formulas of depth <= {args.depth}, checked on {args.models} models")
    print(f"steps: median {statistics.median(steps)}, max {max(steps)}")
    print(f"size ratio output/input: median {statistics.median(growth):.2f}, max {max(growth):.1f}")
    print("scheme counts: " + ", ".join(f"{k} {v}" for k, v in sorted(schemes.items())))
    print(f"disagreements: {bad}")


if __name__ == "__main__":
    main()
