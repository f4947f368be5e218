"""Seeded random models and formulas, and exhaustive formula pools."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from ..model import SubsetModel
from ..syntax import (BOT, TOP, And, Announce, Effort, Formula, Int, Know, Not, Prop)
from ..topology import SubsetFamily, WorldSet, generate_topology

MAX_RANDOM_WORLDS = 8
PROP_NAMES = "pqrstuvw"


def prop_names(n: int) -> list[str]:
    if n <= len(PROP_NAMES):
        return list(PROP_NAMES[:n])
    return [f"p{i}" for i in range(n)]


def random_model(seed: int, n_worlds: int, n_props: int = 2) -> SubsetModel:
    """Random cover of ``n_worlds`` worlds, closed into a topology, with a
    random valuation.  The cover is kept as the raw family."""
    if not 1 <= n_worlds <= MAX_RANDOM_WORLDS:
        raise ValueError(f"n_worlds must be between 1 and {MAX_RANDOM_WORLDS}")
    rng = random.Random(seed)
    ws = WorldSet(tuple(f"w{i}" for i in range(n_worlds)))
    full = ws.full
    cover = [rng.randint(1, full) for _ in range(rng.randint(0, n_worlds + 1))]
    fam = SubsetFamily(ws, tuple(cover) + (full,))
    val = {p: rng.randint(0, full) for p in prop_names(n_props)}
    return SubsetModel(ws, generate_topology(fam), val, fam)


def random_formula(rng: random.Random, depth: int, props: Sequence[str], *,
                   announce: bool = True, effort: bool = False, interior: bool = True) -> Formula:
    """Random formula of depth at most ``depth`` over ``props``."""
    if depth <= 0 or rng.random() < 0.15:
        r = rng.random()
        if r < 0.06:
            return TOP
        if r < 0.1:
            return BOT
        return Prop(rng.choice(props))
    ops = ["not", "and", "and", "K"]
    if interior:
        ops.append("int")
    if announce:
        ops += ["ann", "ann"]
    if effort:
        ops.append("effort")
    op = rng.choice(ops)

    def sub() -> Formula:
        return random_formula(rng, depth - 1, props, announce=announce, effort=effort, interior=interior)

    if op == "not":
        return Not(sub())
    if op == "and":
        return And(sub(), sub())
    if op == "K":
        return Know(sub())
    if op == "int":
        return Int(sub())
    if op == "effort":
        return Effort(sub())
    return Announce(sub(), sub())


DEFAULT_OPS = ("not", "and", "K", "int")


def formula_pool(depth: int, props: Iterable[str], ops: Iterable[str] = DEFAULT_OPS,
                 constants: bool = True) -> list[Formula]:
    """All formulas of depth at most ``depth`` built from ``ops``, without duplicates.

    ``ops`` may contain ``not``, ``and``, ``K``, ``int``, ``ann`` and ``effort``.
    """
    ops = set(ops)
    unknown = ops - {"not", "and", "K", "int", "ann", "effort"}
    if unknown:
        raise ValueError(f"unknown pool operators: {sorted(unknown)}")
    level: list[Formula] = [Prop(p) for p in props]
    if constants:
        level.append(TOP)
    pool = list(level)
    seen = set(pool)
    for _ in range(depth):
        new = []
        current = list(pool)
        for f in current:
            if "not" in ops:
                new.append(Not(f))
            if "K" in ops:
                new.append(Know(f))
            if "int" in ops:
                new.append(Int(f))
            if "effort" in ops:
                new.append(Effort(f))
        for f, g in itertools.product(current, repeat=2):
            if "and" in ops:
                new.append(And(f, g))
            if "ann" in ops:
                new.append(Announce(f, g))
        for f in new:
            if f not in seen:
                seen.add(f)
                pool.append(f)
    return pool


def el_formulas(depth: int, props: Iterable[str]) -> list[Formula]:
    """The pool of announcement-free, interior-free formulas up to ``depth``."""
    return formula_pool(depth, props, ops=("not", "and", "K"))
