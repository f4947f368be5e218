"""Draw the target-wall grid and where the Moore formula b & ~K b is
locally true, knowable after effort, or neither.

Legend: '#' blocked cell outside int(B), 'o' int(B) with int(mu) true and
<>K mu false, '!' a point contradicting that, '.' outside B.
"""

from __future__ import annotations

import argparse

from topopal.lab.builtins import builtin_document, grid_world
from topopal.model import Evaluator, Mode
from topopal.syntax import Effort, Int, Know, Prop


def main() -> None:
    ap = argparse.ArgumentParser(description="Moore formula on the target-wall grid")
    ap.add_argument("--width", type=int, default=12)
    ap.add_argument("--height", type=int, default=9)
    ap.add_argument("--cell", type=int, default=3)
    args = ap.parse_args()

    m = builtin_document("target-wall", width=args.width, height=args.height, cell=args.cell).to_model()
    full = m.universe.full
    b = Prop("b")
    mu = b & ~Know(b)
    ev = Evaluator(m, Mode.INT)
    bset, inside = ev.ext(b, full), ev.ext(Int(b), full)
    local, effort = ev.ext(Int(mu), full), ev.ext(Effort(Know(mu)), full)
    print(f"{len(m.universe)} worlds, {len(m.topology.opens)} opens, "
          f"|B| = {bin(bset).count('1')}, |int(B)| = {bin(inside).count('1')}")
    for j in reversed(range(args.height)):
        row = []
        for i in range(args.width):
            k = m.world_index(grid_world(i, j))
            if inside >> k & 1:
                row.append("o" if local >> k & 1 and not effort >> k & 1 else "!")
            else:
                row.append("#" if bset >> k & 1 else ".")
        print(" ".join(row))
    print(f"K mu holds at {sum(ev.ext(Know(mu), u) != 0 for u in m.topology.opens)} ranges")


if __name__ == "__main__":
    main()
