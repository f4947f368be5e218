"""Where do the interior-based and the precondition-based announcement
readings come apart?  Counts differing scenarios on random covers.

    python scripts/pre_vs_int.py --trials 300 --worlds 4
"""

from __future__ import annotations

import argparse
import random

from topopal.lab.generators import random_formula, random_model
from topopal.model import Evaluator, Mode


def main() -> None:
    ap = argparse.ArgumentParser(description="pre vs int announcement semantics")
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--worlds", type=int, default=4)
    ap.add_argument("--formulas", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    forms = [random_formula(rng, 3, ["p", "q"], interior=False) for _ in range(args.formulas)]
    differing = total = 0
    example = None
    for t in range(args.trials):
        m = random_model(rng.randrange(1 << 30), rng.randint(1, args.worlds))
        ei, ep = Evaluator(m, Mode.INT), Evaluator(m, Mode.PRE)
        # scenarios both readings accept
        for u in set(m.ranges(Mode.INT)) & set(m.ranges(Mode.PRE)):
            for f in forms:
                a, b = ei.ext(f, u), ep.ext(f, u)
                total += bin(u).count("1")
                differing += bin(a ^ b).count("1")
                if a != b and example is None:
                    example = (m, u, f)
    print(f"{differing} of {total} shared scenario evaluations differ")
    if example:
        m, u, f = example
        print(f"first: {f} at range {m.universe.format(u)} of a model with family "
              f"{[m.universe.format(s) for s in m.raw_family.members]}")


if __name__ == "__main__":
    main()
