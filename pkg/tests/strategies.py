"""Hypothesis strategies for formulas and small models."""

from __future__ import annotations

from hypothesis import strategies as st

from topopal.model import SubsetModel
from topopal.syntax import BOT, TOP, And, Announce, Effort, Int, Know, Not, Prop
from topopal.topology import SubsetFamily, WorldSet, generate_topology


def formulas(props=("p", "q"), max_leaves=12, announce=True, interior=True, effort=False):
    atoms = st.sampled_from([Prop(p) for p in props] + [TOP, BOT])

    def extend(children):
        options = [children.map(Not), st.builds(And, children, children), children.map(Know)]
        if interior:
            options.append(children.map(Int))
        if announce:
            options.append(st.builds(Announce, children, children))
        if effort:
            options.append(children.map(Effort))
        return st.one_of(options)

    return st.recursive(atoms, extend, max_leaves=max_leaves)


el_formulas = formulas(announce=False, interior=False)


@st.composite
def models(draw, max_worlds=4, props=("p", "q")):
    n = draw(st.integers(1, max_worlds))
    ws = WorldSet(tuple(f"w{i}" for i in range(n)))
    full = ws.full
    cover = draw(st.lists(st.integers(1, full), max_size=n + 2))
    fam = SubsetFamily(ws, tuple(cover) + (full,))
    val = {p: draw(st.integers(0, full)) for p in props}
    return SubsetModel(ws, generate_topology(fam), val, fam)


@st.composite
def model_and_scenario(draw, max_worlds=4):
    m = draw(models(max_worlds))
    u = draw(st.sampled_from([o for o in m.topology.opens if o]))
    i = draw(st.sampled_from([k for k in range(len(m.universe)) if u >> k & 1]))
    return m, i, u
