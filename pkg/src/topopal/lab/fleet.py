"""Vectorised int-semantics evaluation over a whole fleet of small models.

A fleet is a list of models (topology plus valuation) on at most
``MAX_FLEET_WORLDS`` worlds.  Every pair (model, open set U), the empty set
included, is an *entry*; a formula's extension over the fleet is one bit mask
per entry.  Announcements move to the entry of the same model at the interior
of the announced extension, which is always open, so the whole recursion
stays inside the entry table.

This is an accelerator.  Refutations it finds are re-checked with
:class:`topopal.model.Evaluator` by the callers in :mod:`topopal.lab.validity`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..model import Scenario, SubsetModel
from ..syntax import And, Announce, Bot, Effort, Formula, Int, Know, Not, Prop, Top
from ..topology import Topology, interior
from .enumeration import enumerate_topologies

MAX_FLEET_WORLDS = 8
MEMO_LIMIT = 20_000


@dataclass(frozen=True)
class FleetHit:
    """A falsifying scenario: model index, world index and range mask."""

    model: int
    world: int
    range: int


class FleetBatch:
    def __init__(self, topologies: Sequence[Topology], model_topology: Sequence[int],
                 valuations: dict[str, Sequence[int]]):
        if not topologies:
            raise ValueError("a fleet needs at least one topology")
        nmax = max(len(t.universe) for t in topologies)
        if nmax > MAX_FLEET_WORLDS:
            raise ValueError(f"fleet models are limited to {MAX_FLEET_WORLDS} worlds")
        self.topologies = list(topologies)
        self.nmax = nmax
        self.dtype = np.uint8
        size = 1 << nmax
        nt = len(topologies)
        self.int_tab = np.zeros((nt, size), dtype=self.dtype)
        self.pos_tab = np.full((nt, size), -1, dtype=np.int64)
        for k, t in enumerate(topologies):
            n = len(t.universe)
            for a in range(1 << n):
                self.int_tab[k, a] = interior(t, a)
            for j, o in enumerate(t.opens):
                self.pos_tab[k, o] = j

        self.model_topology = np.asarray(model_topology, dtype=np.int64)
        n_models = len(self.model_topology)
        counts = np.array([len(topologies[k].opens) for k in self.model_topology], dtype=np.int64)
        self.offset = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
        self.n_entries = int(counts.sum())
        self.ent_model = np.repeat(np.arange(n_models, dtype=np.int64), counts)
        self.ent_topo = self.model_topology[self.ent_model]
        opens_of = [np.array(t.opens, dtype=self.dtype) for t in topologies]
        self.ent_range = np.concatenate([opens_of[k] for k in self.model_topology])
        self._flat_base = self.ent_topo * size
        self.valuations = {p: np.asarray(v, dtype=self.dtype) for p, v in valuations.items()}
        for p, v in self.valuations.items():
            if len(v) != n_models:
                raise ValueError(f"valuation of {p!r} has the wrong length")
        self.nonempty = self.ent_range != 0
        self._sub_index: np.ndarray | None = None
        self.memo: dict[Formula, np.ndarray] = {}
        self.pinned: set[Formula] = set()

    # construction -----------------------------------------------------

    @classmethod
    def exhaustive(cls, max_worlds: int, props: Sequence[str]) -> FleetBatch:
        """Every topology on 1..max_worlds worlds with every valuation of ``props``."""
        topologies: list[Topology] = []
        model_topology: list[int] = []
        vals: dict[str, list[int]] = {p: [] for p in props}
        for n in range(1, max_worlds + 1):
            for t in enumerate_topologies(n):
                k = len(topologies)
                topologies.append(t)
                for combo in itertools.product(range(1 << n), repeat=len(props)):
                    model_topology.append(k)
                    for p, m in zip(props, combo):
                        vals[p].append(m)
        return cls(topologies, model_topology, vals)

    @classmethod
    def from_models(cls, models: Iterable[SubsetModel]) -> FleetBatch:
        models = list(models)
        topologies: list[Topology] = []
        index: dict[Topology, int] = {}
        model_topology = []
        for m in models:
            if m.topology is None:
                raise ValueError("fleet models need a topology")
            t = m.topology
            if t not in index:
                index[t] = len(topologies)
                topologies.append(t)
            model_topology.append(index[t])
        props = sorted({p for m in models for p in m.valuation})
        vals = {p: [m.valuation.get(p, 0) for m in models] for p in props}
        return cls(topologies, model_topology, vals)

    @property
    def n_models(self) -> int:
        return len(self.model_topology)

    def model(self, i: int) -> SubsetModel:
        t = self.topologies[int(self.model_topology[i])]
        val = {p: int(v[i]) for p, v in self.valuations.items()}
        return SubsetModel(t.universe, t, val)

    # evaluation -------------------------------------------------------

    def _interior(self, a: np.ndarray) -> np.ndarray:
        return self.int_tab.reshape(-1)[self._flat_base + a]

    def _entry_at(self, opens: np.ndarray) -> np.ndarray:
        pos = self.pos_tab.reshape(-1)[self._flat_base + opens]
        return self.offset[self.ent_model] + pos

    def _subopen_index(self) -> np.ndarray:
        """For each entry, the entries of the same model whose range is a
        subset of its range; padded with a sentinel pointing past the end."""
        if self._sub_index is None:
            per_topo = []
            width = max(len(t.opens) for t in self.topologies)
            for t in self.topologies:
                rows = np.full((len(t.opens), width), -1, dtype=np.int64)
                for j, u in enumerate(t.opens):
                    subs = [k for k, v in enumerate(t.opens) if v & ~u == 0]
                    rows[j, :len(subs)] = subs
                per_topo.append(rows)
            local = np.concatenate([per_topo[k] for k in self.model_topology])
            base = self.offset[self.ent_model][:, None]
            self._sub_index = np.where(local >= 0, base + local, self.n_entries)
        return self._sub_index

    def extension(self, f: Formula) -> np.ndarray:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        r = self._ext(f)
        if len(self.memo) >= MEMO_LIMIT:
            self.memo = {g: v for g, v in self.memo.items() if g in self.pinned}
        self.memo[f] = r
        return r

    def pin(self, formulas: Iterable[Formula]) -> None:
        """Keep these formulas' extensions across memo flushes."""
        self.pinned.update(formulas)

    def _ext(self, f: Formula) -> np.ndarray:
        u = self.ent_range
        if isinstance(f, Prop):
            v = self.valuations.get(f.name)
            if v is None:
                return np.zeros_like(u)
            return v[self.ent_model] & u
        if isinstance(f, Top):
            return u.copy()
        if isinstance(f, Bot):
            return np.zeros_like(u)
        if isinstance(f, Not):
            return u & ~self.extension(f.sub)
        if isinstance(f, And):
            return self.extension(f.left) & self.extension(f.right)
        if isinstance(f, Know):
            return np.where(self.extension(f.sub) == u, u, 0).astype(self.dtype)
        if isinstance(f, Int):
            return self._interior(self.extension(f.sub))
        if isinstance(f, Announce):
            i = self._interior(self.extension(f.announced))
            body = self.extension(f.body)[self._entry_at(i)]
            return (u & ~i) | body
        if isinstance(f, Effort):
            sub = np.append(self.extension(f.sub), np.zeros(1, dtype=self.dtype))
            return np.bitwise_or.reduce(sub[self._subopen_index()], axis=1)
        raise TypeError(f"not a formula: {f!r}")

    # validity ---------------------------------------------------------

    def failures(self, f: Formula) -> np.ndarray:
        """Per entry: does ``f`` fail somewhere in the (nonempty) range?"""
        return self.nonempty & (self.extension(f) != self.ent_range)

    def valid_per_model(self, f: Formula) -> np.ndarray:
        fails = self.failures(f).astype(np.int64)
        return np.add.reduceat(fails, self.offset) == 0

    def first_failure(self, f: Formula, models: np.ndarray | None = None) -> FleetHit | None:
        """Lowest-index model (then range, then world) where ``f`` fails."""
        fails = self.failures(f)
        if models is not None:
            fails &= models[self.ent_model]
        idx = np.flatnonzero(fails)
        if idx.size == 0:
            return None
        e = int(idx[0])
        missing = int(self.ent_range[e]) & ~int(self.extension(f)[e])
        world = (missing & -missing).bit_length() - 1
        return FleetHit(int(self.ent_model[e]), world, int(self.ent_range[e]))

    def scenario(self, hit: FleetHit) -> tuple[SubsetModel, Scenario]:
        m = self.model(hit.model)
        return m, Scenario(m.universe.names[hit.world], hit.range)

    def describe(self) -> str:
        return (f"{self.n_models} models over {len(self.topologies)} topologies, "
                f"{self.n_entries} (model, open) entries")

