"""Subset models, epistemic scenarios and the formula evaluator.

Three announcement semantics are supported:

``INT``
    the announcement precondition is local truth (the world lies in the
    interior of the announced formula's extension) and the range shrinks to
    that interior.
``PRE``
    the precondition is that the world satisfies the formula *and* the
    extension is itself an admissible range; the range shrinks to the
    extension.
``NAIVE``
    classical truth as precondition and the extension as new range; when the
    extension is not an admissible range the update is undefined and
    :class:`UndefinedUpdate` is raised.

Evaluation works on extensions: ``Evaluator.ext(f, u)`` is the bit mask of
worlds in range ``u`` satisfying ``f`` there, memoised per ``(f, u)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .syntax import And, Announce, Bot, Effort, Formula, Int, Know, Not, Prop, Top, parse, render
from .topology import SubsetFamily, Topology, WorldSet, bits, generate_topology, interior

__all__ = [
    "Mode", "SubsetModel", "Scenario", "Evaluator",
    "SemanticsError", "UndefinedUpdate", "ModeError", "InvalidScenario",
    "scenarios", "extension", "evaluate", "satisfying_scenarios",
]


class Mode(enum.Enum):
    INT = "int"
    PRE = "pre"
    NAIVE = "naive"


class SemanticsError(ValueError):
    pass


class ModeError(SemanticsError):
    """Connective not interpretable in the requested mode or model."""


class InvalidScenario(SemanticsError):
    pass


class UndefinedUpdate(SemanticsError):
    """Naive announcement whose extension is not an admissible range."""

    def __init__(self, announced: Formula, range_: int, extension: int, universe: WorldSet):
        self.announced = announced
        self.range = range_
        self.extension = extension
        super().__init__(
            f"announcement of {render(announced, sugar=True)} at range {universe.format(range_)} "
            f"would move to {universe.format(extension)}, which is not an epistemic range")


@dataclass(frozen=True, order=True)
class Scenario:
    world: str
    range: int


@dataclass(frozen=True)
class SubsetModel:
    """Worlds, a topology, a valuation and optionally the raw family it came from.

    ``valuation`` maps proposition names to bit masks; undeclared propositions
    are false everywhere.  ``raw_family`` is only consulted by ``PRE`` mode.
    ``range_names`` labels some ranges for command-line use and does not take
    part in equality.
    """

    universe: WorldSet
    topology: Topology | None
    valuation: Mapping[str, int]
    raw_family: SubsetFamily | None = None
    range_names: Mapping[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        full = self.universe.full
        for p, m in self.valuation.items():
            if m < 0 or m & ~full:
                raise ValueError(f"valuation of {p!r} lies outside the universe")
        if self.topology is not None and self.topology.universe != self.universe:
            raise ValueError("topology is over a different universe")
        if self.raw_family is not None and self.raw_family.universe != self.universe:
            raise ValueError("raw family is over a different universe")
        if self.topology is None and self.raw_family is None:
            raise ValueError("a model needs a topology or a raw family")
        object.__setattr__(self, "valuation", dict(self.valuation))

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def build(cls, worlds: Sequence[str], family: Iterable[Iterable[str]],
              valuation: Mapping[str, Iterable[str]], *, generate: bool = False,
              keep_raw: bool | None = None) -> SubsetModel:
        """Convenience constructor from world names.

        With ``generate`` the family is closed into a topology and (unless
        ``keep_raw`` is false) also kept as the raw family.
        """
        ws = WorldSet.of(worlds)
        fam = SubsetFamily.of(ws, family)
        val = {p: ws.mask(v) for p, v in valuation.items()}
        if generate:
            raw = fam if keep_raw is not False else None
            return cls(ws, generate_topology(fam), val, raw)
        return cls(ws, Topology(ws, fam.members), val, fam if keep_raw else None)

    @property
    def props(self) -> list[str]:
        return sorted(self.valuation)

    def world_index(self, w: str) -> int:
        try:
            return self.universe.index[w]
        except KeyError:
            raise InvalidScenario(f"unknown world {w!r}") from None

    def resolve_range(self, name: str) -> int:
        """``ALL`` is the universe; other names come from ``range_names``."""
        if name == "ALL":
            return self.universe.full
        if name in self.range_names:
            return self.range_names[name]
        if name.startswith("{") and name.endswith("}"):
            inner = name[1:-1].strip()
            return self.universe.mask([w.strip() for w in inner.split(",")] if inner else [])
        raise InvalidScenario(f"unknown range name {name!r}")

    def range_name(self, mask: int) -> str:
        if mask == self.universe.full:
            return "ALL"
        for n, m in self.range_names.items():
            if m == mask:
                return n
        return self.universe.format(mask)

    def scenario(self, world: str, range_: str | int = "ALL") -> Scenario:
        u = self.resolve_range(range_) if isinstance(range_, str) else range_
        return Scenario(world, u)

    def ranges(self, mode: Mode) -> list[int]:
        """Admissible nonempty epistemic ranges, in canonical order."""
        if mode is Mode.PRE and self.raw_family is not None:
            return [m for m in dict.fromkeys(self.raw_family.members) if m]
        if self.topology is None:
            raise ModeError(f"{mode.value} mode needs a topology")
        return [o for o in self.topology.opens if o]

    def is_range(self, u: int, mode: Mode) -> bool:
        if mode is Mode.PRE:
            # PRE accepts the raw knowledge states and, when present, the opens
            # of the generated topology (so the whole space is a range).
            return ((self.raw_family is not None and u in self.raw_family)
                    or (self.topology is not None and u in self.topology))
        return self.topology is not None and u in self.topology

    def pre_family(self) -> frozenset[int]:
        if self.raw_family is not None:
            return frozenset(self.raw_family.members)
        assert self.topology is not None
        return frozenset(self.topology.opens)


class Evaluator:
    """Memoised extension computation for one model and one mode."""

    def __init__(self, model: SubsetModel, mode: Mode = Mode.INT):
        self.model = model
        self.mode = mode
        self.topology = model.topology
        self.memo: dict[tuple[Formula, int], int] = {}
        self._pre = model.pre_family() if mode is Mode.PRE else frozenset()

    def _topo(self, f: Formula) -> Topology:
        if self.topology is None:
            raise ModeError(f"{render(f)} needs a topology, but the model only has a raw family")
        return self.topology

    def ext(self, f: Formula, u: int) -> int:
        key = (f, u)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        r = self._ext(f, u)
        self.memo[key] = r
        return r

    def _ext(self, f: Formula, u: int) -> int:
        if isinstance(f, Prop):
            return self.model.valuation.get(f.name, 0) & u
        if isinstance(f, Top):
            return u
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Not):
            return u & ~self.ext(f.sub, u)
        if isinstance(f, And):
            left = self.ext(f.left, u)
            return left & self.ext(f.right, u) if left else 0
        if isinstance(f, Know):
            return u if self.ext(f.sub, u) == u else 0
        if isinstance(f, Int):
            return interior(self._topo(f), self.ext(f.sub, u))
        if isinstance(f, Announce):
            e = self.ext(f.announced, u)
            if self.mode is Mode.INT:
                i = interior(self._topo(f), e)
                return (u & ~i) | self.ext(f.body, i)
            if self.mode is Mode.PRE:
                if e not in self._pre:
                    return u
                return (u & ~e) | self.ext(f.body, e)
            if e == 0:
                return u
            if e not in self._topo(f):
                raise UndefinedUpdate(f.announced, u, e, self.model.universe)
            return (u & ~e) | self.ext(f.body, e)
        if isinstance(f, Effort):
            t = self._effort_topology(f)
            out = 0
            for v in t.opens_within(u):
                if v:
                    out |= self.ext(f.sub, v)
            return out
        raise TypeError(f"not a formula: {f!r}")

    def _effort_topology(self, f: Formula) -> Topology:
        if self.mode is Mode.PRE:
            raise ModeError("the effort modality is only interpreted in int and naive modes")
        return self._topo(f)

    def holds(self, i: int, u: int, f: Formula) -> bool:
        """Truth at scenario (world ``i``, range ``u``).

        Announcements and Boolean structure are followed pointwise, so an
        undefined naive update is only reported when the scenario reaches it.
        """
        if isinstance(f, Not):
            return not self.holds(i, u, f.sub)
        if isinstance(f, And):
            return self.holds(i, u, f.left) and self.holds(i, u, f.right)
        if isinstance(f, Announce):
            e = self.ext(f.announced, u)
            if self.mode is Mode.INT:
                new = interior(self._topo(f), e)
                if not new >> i & 1:
                    return True
            elif self.mode is Mode.PRE:
                if not (e >> i & 1 and e in self._pre):
                    return True
                new = e
            else:
                if not e >> i & 1:
                    return True
                if e not in self._topo(f):
                    raise UndefinedUpdate(f.announced, u, e, self.model.universe)
                new = e
            return self.holds(i, new, f.body)
        if isinstance(f, Effort):
            t = self._effort_topology(f)
            return any(self.holds(i, v, f.sub) for v in t.opens_within(u) if v >> i & 1)
        return bool(self.ext(f, u) >> i & 1)


def _formula(f: Formula | str) -> Formula:
    return parse(f) if isinstance(f, str) else f


def scenarios(m: SubsetModel, mode: Mode = Mode.INT) -> list[Scenario]:
    """All pairs (x, U) with x in U and U an admissible range for ``mode``."""
    names = m.universe.names
    return [Scenario(names[i], u) for u in m.ranges(mode) for i in bits(u)]


def _check_scenario(m: SubsetModel, s: Scenario, mode: Mode) -> int:
    i = m.world_index(s.world)
    if not m.is_range(s.range, mode):
        raise InvalidScenario(
            f"{m.universe.format(s.range)} is not an epistemic range in {mode.value} mode")
    if not s.range >> i & 1:
        raise InvalidScenario(f"world {s.world} is not in range {m.universe.format(s.range)}")
    return i


def extension(m: SubsetModel, f: Formula | str, range_: int, mode: Mode = Mode.INT,
              evaluator: Evaluator | None = None) -> int:
    """Worlds of ``range_`` where ``f`` holds with ``range_`` as epistemic range."""
    if not m.is_range(range_, mode):
        raise InvalidScenario(
            f"{m.universe.format(range_)} is not an epistemic range in {mode.value} mode")
    ev = evaluator or Evaluator(m, mode)
    return ev.ext(_formula(f), range_)


def evaluate(m: SubsetModel, s: Scenario, f: Formula | str, mode: Mode = Mode.INT,
             evaluator: Evaluator | None = None) -> bool:
    i = _check_scenario(m, s, mode)
    ev = evaluator or Evaluator(m, mode)
    return ev.holds(i, s.range, _formula(f))


def satisfying_scenarios(m: SubsetModel, f: Formula | str, mode: Mode = Mode.INT,
                         ranges: Iterable[int] | None = None) -> list[Scenario]:
    f = _formula(f)
    ev = Evaluator(m, mode)
    wanted = None if ranges is None else set(ranges)
    out = []
    for s in scenarios(m, mode):
        if wanted is not None and s.range not in wanted:
            continue
        if ev.holds(m.universe.index[s.world], s.range, f):
            out.append(s)
    return out
