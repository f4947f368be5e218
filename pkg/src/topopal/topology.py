"""Finite topologies over an ordered world set, with subsets as bit masks.

World ``i`` of a :class:`WorldSet` corresponds to bit ``1 << i``.  A
:class:`Topology` keeps its full family of open sets; membership, interior
and basis questions are all answered from that family or from the minimal
open neighbourhood of each point (which determines a finite topology).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

DEFAULT_MAX_OPENS = 1 << 20


class TopologyError(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _canonical(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(masks), key=lambda m: (popcount(m), m)))


@dataclass(frozen=True)
class WorldSet:
    """Ordered, duplicate-free list of world identifiers."""

    names: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        names = tuple(str(n) for n in self.names)
        if not names:
            raise ValueError("a world set must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("world identifiers must be unique")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, names: Iterable[str]) -> WorldSet:
        return cls(tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    @property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    def mask(self, worlds: Iterable[str]) -> int:
        m = 0
        for w in worlds:
            try:
                m |= 1 << self.index[w]
            except KeyError:
                raise ValueError(f"unknown world {w!r}") from None
        return m

    def members(self, mask: int) -> list[str]:
        if mask & ~self.full:
            raise ValueError("subset lies outside the universe")
        return [self.names[i] for i in bits(mask)]

    def format(self, mask: int) -> str:
        return "{" + ",".join(self.members(mask)) + "}"


@dataclass(frozen=True)
class SubsetFamily:
    """An arbitrary family of subsets, e.g. a raw subset space or a cover."""

    universe: WorldSet
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(self.members)
        for m in members:
            if m < 0 or m & ~self.universe.full:
                raise ValueError(f"family member {m:#b} lies outside the universe")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, universe: WorldSet, sets: Iterable[Iterable[str]]) -> SubsetFamily:
        return cls(universe, tuple(universe.mask(s) for s in sets))

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members


@dataclass(frozen=True)
class TopologyCheck:
    ok: bool
    reason: str = ""
    witness: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_topology(fam: SubsetFamily | Topology) -> TopologyCheck:
    """Check that a family contains the empty set and the universe and is
    closed under pairwise intersection and union.  Reports the first failure."""
    members = list(dict.fromkeys(fam.members if isinstance(fam, SubsetFamily) else fam.opens))
    full = fam.universe.full
    present = set(members)
    if 0 not in present:
        return TopologyCheck(False, "missing empty set", (0,))
    if full not in present:
        return TopologyCheck(False, "missing universe", (full,))
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if a & b not in present:
                return TopologyCheck(False, "not closed under intersection", (a, b))
            if a | b not in present:
                return TopologyCheck(False, "not closed under union", (a, b))
    return TopologyCheck(True)


class Topology:
    """A topology on a finite world set, stored as its full family of opens."""

    __slots__ = ("universe", "opens", "_open_set", "_nbhd")

    def __init__(self, universe: WorldSet, opens: Iterable[int], *, check: bool = True):
        self.universe = universe
        self.opens = _canonical(opens)
        self._open_set = frozenset(self.opens)
        if check:
            verdict = verify_topology(self)
            if not verdict:
                raise TopologyError(f"not a topology: {verdict.reason}")
        nbhd = []
        for i in range(len(universe)):
            m = universe.full
            for o in self.opens:
                if o >> i & 1:
                    m &= o
            nbhd.append(m)
        self._nbhd = tuple(nbhd)

    @classmethod
    def discrete(cls, universe: WorldSet) -> Topology:
        return cls(universe, range(universe.full + 1), check=False)

    @classmethod
    def indiscrete(cls, universe: WorldSet) -> Topology:
        return cls(universe, (0, universe.full), check=False)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Topology) and self.universe == other.universe
                and self._open_set == other._open_set)

    def __hash__(self) -> int:
        return hash((self.universe, self._open_set))

    def __repr__(self) -> str:
        shown = ", ".join(self.universe.format(o) for o in self.opens[:8])
        more = ", ..." if len(self.opens) > 8 else ""
        return f"Topology({len(self.opens)} opens: {shown}{more})"

    def __len__(self) -> int:
        return len(self.opens)

    def __contains__(self, mask: int) -> bool:
        return mask in self._open_set

    def neighbourhood(self, i: int) -> int:
        """Smallest open set containing world ``i``."""
        return self._nbhd[i]

    def interior(self, a: int) -> int:
        return interior(self, a)

    def opens_within(self, u: int) -> list[int]:
        return [o for o in self.opens if o & ~u == 0]

    def subspace(self, keep: int) -> tuple[WorldSet, Topology, list[int]]:
        """Relative topology on the worlds in ``keep``.

        Returns the new world set, topology, and the old indices kept (in order).
        """
        kept = list(bits(keep))
        if not kept:
            raise ValueError("cannot restrict to the empty set")
        ws = WorldSet(tuple(self.universe.names[i] for i in kept))
        return ws, Topology(ws, {compress_mask(o & keep, kept) for o in self.opens}, check=False), kept


def compress_mask(mask: int, kept: Sequence[int]) -> int:
    """Renumber ``mask`` onto the positions listed in ``kept``."""
    out = 0
    for j, i in enumerate(kept):
        if mask >> i & 1:
            out |= 1 << j
    return out


def generate_topology(fam: SubsetFamily, max_opens: int = DEFAULT_MAX_OPENS) -> Topology:
    """Smallest topology containing ``fam`` (plus the empty set and universe).

    Each point's minimal neighbourhood is the intersection of the generators
    containing it; the opens are exactly the unions of such neighbourhoods.
    """
    ws = fam.universe
    full = ws.full
    gens = [m for m in fam.members if m] + [full]
    nbhds = set()
    for i in range(len(ws)):
        m = full
        for g in gens:
            if g >> i & 1:
                m &= g
        nbhds.add(m)
    opens = {0}
    for nb in sorted(nbhds):
        opens |= {o | nb for o in opens}
        if len(opens) > max_opens:
            raise TopologyError(f"generated topology exceeds {max_opens} open sets")
    return Topology(ws, opens, check=False)


def interior(t: Topology, a: int) -> int:
    """Largest open subset of ``a``."""
    if a < 0 or a & ~t.universe.full:
        raise ValueError("subset lies outside the universe")
    out = 0
    for i in bits(a):
        if t._nbhd[i] & ~a == 0:
            out |= 1 << i
    return out


def is_open(t: Topology, a: int) -> bool:
    return a in t._open_set


def is_basis(t: Topology, fam: SubsetFamily | Iterable[int]) -> bool:
    """True iff every open set is a union of members of ``fam``."""
    members = list(fam.members if isinstance(fam, SubsetFamily) else fam)
    for m in members:
        if m not in t._open_set:
            raise TopologyError(f"basis candidate {t.universe.format(m)} is not open")
    for o in t.opens:
        cover = 0
        for m in members:
            if m & ~o == 0:
                cover |= m
        if cover != o:
            return False
    return True
