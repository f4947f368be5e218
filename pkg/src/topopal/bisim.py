"""Partial bisimulations between subset models.

A relation between scenarios of two models is a partial bisimulation when
every related pair ``(x, U) ~ (x', U')`` satisfies

* BASE  -- ``x`` and ``x'`` agree on every proposition;
* FORTH -- every ``y`` in ``U`` is related (at ranges ``U``, ``U'``) to some ``y'`` in ``U'``;
* BACK  -- every ``y'`` in ``U'`` is related to some ``y`` in ``U``.

Relations serialise one pair per line as ``worldA,rangeA ~ worldB,rangeB``
where ranges are ``ALL``, a named family member, or an explicit ``{w1,w2}``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .model import Evaluator, InvalidScenario, Mode, Scenario, SubsetModel, scenarios
from .syntax import Formula, Fragment, fragment, render
from .topology import bits

Pair = tuple[Scenario, Scenario]


@dataclass(frozen=True)
class BisimRelation:
    left: SubsetModel
    right: SubsetModel
    pairs: frozenset[Pair]

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: Pair) -> bool:
        return pair in self.pairs

    def __or__(self, other: BisimRelation) -> BisimRelation:
        return BisimRelation(self.left, self.right, self.pairs | other.pairs)

    def sorted_pairs(self) -> list[Pair]:
        ia, ib = self.left.universe.index, self.right.universe.index
        return sorted(self.pairs, key=lambda p: (p[0].range, ia[p[0].world], p[1].range, ib[p[1].world]))


@dataclass(frozen=True)
class BisimVerdict:
    ok: bool
    pair: Pair | None = None
    condition: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Disagreement:
    pair: Pair
    formula: Formula
    left: bool
    right: bool


def shared_props(a: SubsetModel, b: SubsetModel) -> list[str]:
    return sorted(set(a.valuation) | set(b.valuation))


def _base(a: SubsetModel, b: SubsetModel, i: int, j: int, props: list[str]) -> bool:
    return all((a.valuation.get(p, 0) >> i & 1) == (b.valuation.get(p, 0) >> j & 1) for p in props)


def identity_relation(m: SubsetModel, mode: Mode = Mode.INT) -> BisimRelation:
    return BisimRelation(m, m, frozenset((s, s) for s in scenarios(m, mode)))


def is_partial_bisimulation(a: SubsetModel, b: SubsetModel, r: BisimRelation | Iterable[Pair],
                            props: Iterable[str] | None = None, mode: Mode = Mode.INT) -> BisimVerdict:
    pairs = r.pairs if isinstance(r, BisimRelation) else frozenset(r)
    props = sorted(props) if props is not None else shared_props(a, b)
    groups: dict[tuple[int, int], set[tuple[int, int]]] = defaultdict(set)
    for s, t in pairs:
        for m, sc in ((a, s), (b, t)):
            if not m.is_range(sc.range, mode) or not sc.range >> m.world_index(sc.world) & 1:
                raise InvalidScenario(f"({sc.world}, {m.universe.format(sc.range)}) is not a scenario")
        groups[s.range, t.range].add((a.world_index(s.world), b.world_index(t.world)))

    for s, t in sorted(pairs, key=lambda p: (p[0].range, p[0].world, p[1].range, p[1].world)):
        i, j = a.world_index(s.world), b.world_index(t.world)
        if not _base(a, b, i, j, props):
            return BisimVerdict(False, (s, t), "BASE", "worlds disagree on some proposition")
        g = groups[s.range, t.range]
        left_cov = 0
        right_cov = 0
        for x, y in g:
            left_cov |= 1 << x
            right_cov |= 1 << y
        missing = s.range & ~left_cov
        if missing:
            w = a.universe.format(missing)
            return BisimVerdict(False, (s, t), "FORTH", f"{w} in the left range have no partner")
        missing = t.range & ~right_cov
        if missing:
            w = b.universe.format(missing)
            return BisimVerdict(False, (s, t), "BACK", f"{w} in the right range have no partner")
    return BisimVerdict(True)


def largest_partial_bisimulation(a: SubsetModel, b: SubsetModel, props: Iterable[str] | None = None,
                                 mode: Mode = Mode.INT) -> BisimRelation:
    """Greatest partial bisimulation, by repeatedly deleting violating pairs."""
    props = sorted(props) if props is not None else shared_props(a, b)
    rel: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for u in a.ranges(mode):
        for v in b.ranges(mode):
            ws = {(i, j) for i in bits(u) for j in bits(v) if _base(a, b, i, j, props)}
            if ws:
                rel[u, v] = ws
    changed = True
    while changed:
        changed = False
        doomed = []
        for (u, v), ws in rel.items():
            left = right = 0
            for i, j in ws:
                left |= 1 << i
                right |= 1 << j
            # FORTH/BACK at ranges (u, v) only look at pairs with the same ranges
            if left != u or right != v:
                doomed.append((u, v))
        for key in doomed:
            del rel[key]
            changed = True
    an, bn = a.universe.names, b.universe.names
    pairs = frozenset((Scenario(an[i], u), Scenario(bn[j], v))
                      for (u, v), ws in rel.items() for i, j in ws)
    return BisimRelation(a, b, pairs)


def check_invariance(a: SubsetModel, b: SubsetModel, r: BisimRelation, formulas: Iterable[Formula],
                     allow_non_el: bool = False) -> list[Disagreement]:
    """Evaluate each formula on both sides of every related pair; report disagreements."""
    formulas = list(formulas)
    if not allow_non_el:
        for f in formulas:
            if fragment(f) is not Fragment.EL:
                raise ValueError(f"invariance is only guaranteed for EL formulas, got {render(f)}")
    ea, eb = Evaluator(a, Mode.INT), Evaluator(b, Mode.INT)
    out = []
    for s, t in r.sorted_pairs():
        i, j = a.world_index(s.world), b.world_index(t.world)
        for f in formulas:
            lv = ea.holds(i, s.range, f)
            rv = eb.holds(j, t.range, f)
            if lv != rv:
                out.append(Disagreement((s, t), f, lv, rv))
    return out


def format_relation(r: BisimRelation) -> str:
    lines = [f"{s.world},{r.left.range_name(s.range)} ~ {t.world},{r.right.range_name(t.range)}"
             for s, t in r.sorted_pairs()]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_relation(text: str, a: SubsetModel, b: SubsetModel) -> BisimRelation:
    pairs = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            left, right = (part.strip() for part in line.split("~"))
            wa, ra = (x.strip() for x in left.split(",", 1))
            wb, rb = (x.strip() for x in right.split(",", 1))
        except ValueError:
            raise ValueError(f"line {lineno}: expected 'world,range ~ world,range'") from None
        a.world_index(wa)
        b.world_index(wb)
        pairs.add((Scenario(wa, a.resolve_range(ra)), Scenario(wb, b.resolve_range(rb))))
    return BisimRelation(a, b, frozenset(pairs))
