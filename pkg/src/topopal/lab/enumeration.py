"""Every labelled topology on a small world set.

A finite topology is determined by the minimal neighbourhood ``N(x)`` of
each point, and a choice of sets ``N(x)`` comes from a topology exactly when
``x in N(x)`` and ``y in N(x)`` implies ``N(y) <= N(x)`` (the specialisation
preorder).  We search over such choices and close each into its opens.
"""

from __future__ import annotations

from typing import Iterator

from ..topology import Topology, WorldSet

MAX_WORLDS = 4


def default_worlds(n: int) -> WorldSet:
    return WorldSet(tuple(f"w{i}" for i in range(n)))


def _neighbourhood_systems(n: int) -> Iterator[tuple[int, ...]]:
    full = (1 << n) - 1
    choices = [[m for m in range(full + 1) if m >> i & 1] for i in range(n)]
    nb = [0] * n

    def consistent(k: int) -> bool:
        # the new point k against every point fixed so far, both directions
        for j in range(k + 1):
            if nb[k] >> j & 1 and nb[j] & ~nb[k]:
                return False
            if nb[j] >> k & 1 and nb[k] & ~nb[j]:
                return False
        return True

    def dfs(k: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield tuple(nb)
            return
        for m in choices[k]:
            nb[k] = m
            if consistent(k):
                yield from dfs(k + 1)
        nb[k] = 0

    yield from dfs(0)


def _opens(nb: tuple[int, ...]) -> set[int]:
    opens = {0}
    for m in set(nb):
        opens |= {o | m for o in opens}
    return opens


def enumerate_topologies(n: int, worlds: WorldSet | None = None) -> Iterator[Topology]:
    """Yield each distinct topology on ``n`` worlds once (1, 4, 29, 355 of them)."""
    if not 1 <= n <= MAX_WORLDS:
        raise ValueError(f"world count must be between 1 and {MAX_WORLDS}, got {n}")
    ws = worlds or default_worlds(n)
    if len(ws) != n:
        raise ValueError("world set has the wrong size")
    for nb in _neighbourhood_systems(n):
        # different neighbourhood systems give different topologies, so no dedup needed
        yield Topology(ws, _opens(nb), check=False)
