"""Fleet validity: schemes, instantiation, refutation and counterexamples.

A formula is *valid on a fleet* when it holds at every scenario of every fleet
model under int-semantics.  Fleets are either exhaustive (every topology on a
few worlds, every valuation) or seeded random samples.  Candidates are swept
with :class:`~topopal.lab.fleet.FleetBatch`; any refutation is confirmed with
the reference evaluator before it is reported, and then shrunk by deleting
worlds while it stays a counterexample.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from ..model import Evaluator, Mode, Scenario, SubsetModel, evaluate
from ..syntax import BOT, TOP, Formula, Prop, parse, render, substitute
from ..topology import compress_mask
from .fleet import FleetBatch, FleetHit
from .generators import formula_pool, prop_names, random_model

VALID = "valid-on-fleet"
REFUTED = "refuted"


class FleetMismatch(AssertionError):
    """The batch evaluator and the reference evaluator disagree."""


# fleets ---------------------------------------------------------------


@dataclass(frozen=True)
class FleetSpec:
    kind: str
    props: tuple[str, ...] = ("p", "q")
    max_worlds: int = 3
    trials: int = 0
    size: int = 4
    seed: int = 0

    @classmethod
    def exhaustive(cls, max_worlds: int, props: Iterable[str] = ("p", "q")) -> FleetSpec:
        if not 1 <= max_worlds <= 4:
            raise ValueError("exhaustive fleets cover 1 to 4 worlds")
        return cls("exhaustive", tuple(props), max_worlds=max_worlds)

    @classmethod
    def random(cls, trials: int, size: int, seed: int, n_props: int = 2) -> FleetSpec:
        if trials < 1:
            raise ValueError("a random fleet needs at least one trial")
        return cls("random", tuple(prop_names(n_props)), trials=trials, size=size, seed=seed)

    @property
    def largest(self) -> int:
        """Most worlds in any fleet model."""
        return self.max_worlds if self.kind == "exhaustive" else self.size

    def describe(self) -> str:
        if self.kind == "exhaustive":
            return f"exhaustive(<= {self.max_worlds} worlds, props {','.join(self.props)})"
        return f"random({self.trials} models, {self.size} worlds, seed {self.seed})"


@lru_cache(maxsize=8)
def build_fleet(spec: FleetSpec) -> FleetBatch:
    if spec.kind == "exhaustive":
        return FleetBatch.exhaustive(spec.max_worlds, spec.props)
    if spec.kind == "random":
        models = [random_model(spec.seed * 1_000_003 + i, spec.size, len(spec.props))
                  for i in range(spec.trials)]
        return FleetBatch.from_models(models)
    raise ValueError(f"unknown fleet kind {spec.kind!r}")


# verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    model: SubsetModel
    scenario: Scenario
    model_index: int = -1

    def describe(self) -> str:
        m = self.model
        opens = ", ".join(m.universe.format(o) for o in m.topology.opens) if m.topology else ""
        val = ", ".join(f"{p}={m.universe.format(v)}" for p, v in sorted(m.valuation.items()))
        return (f"worlds {m.universe.format(m.universe.full)}; opens {opens}; {val}; "
                f"at ({self.scenario.world}, {m.universe.format(self.scenario.range)})")


@dataclass(frozen=True)
class SchemeInstance:
    scheme: str
    substitution: tuple[tuple[str, Formula], ...]
    instance: Formula
    premises: tuple[Formula, ...] = ()

    def describe(self) -> str:
        subst = ", ".join(f"{v}:={render(f)}" for v, f in self.substitution)
        return f"{self.scheme}[{subst}]"


@dataclass(frozen=True)
class Verdict:
    status: str
    counterexample: Counterexample | None = None
    instance: SchemeInstance | None = None

    @property
    def valid(self) -> bool:
        return self.status == VALID

    def __post_init__(self) -> None:
        if self.status not in (VALID, REFUTED):
            raise ValueError(f"unknown verdict status {self.status!r}")
        if (self.status == REFUTED) != (self.counterexample is not None):
            raise ValueError("a refutation carries exactly one counterexample")


# schemes ----------------------------------------------------------------


@dataclass(frozen=True)
class Scheme:
    """An axiom scheme, or a rule ``premises / conclusion`` when premises are given.

    Metavariables are the upper-case atoms of the templates; those listed in
    ``atoms`` range over atomic formulas only.  A rule is checked model by
    model: on every fleet model where all premises are valid the conclusion
    must be valid too.
    """

    ident: str
    template: str
    group: str
    expect_valid: bool = True
    premises: tuple[str, ...] = ()
    atoms: tuple[str, ...] = ()
    formula: Formula = field(init=False, compare=False, repr=False)
    premise_formulas: tuple[Formula, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "formula", parse(self.template))
        object.__setattr__(self, "premise_formulas", tuple(parse(p) for p in self.premises))

    @property
    def metavariables(self) -> tuple[str, ...]:
        names: list[str] = []
        for f in (*self.premise_formulas, self.formula):
            for g in _atoms_in_order(f):
                if g[0].isupper() and g not in names:
                    names.append(g)
        return tuple(names)

    @property
    def is_rule(self) -> bool:
        return bool(self.premises)

    def instantiate(self, subst: dict[str, Formula]) -> SchemeInstance:
        missing = set(self.metavariables) - set(subst)
        if missing:
            raise ValueError(f"{self.ident}: no value for {sorted(missing)}")
        for a in self.atoms:
            if not isinstance(subst[a], (Prop, type(TOP), type(BOT))):
                raise ValueError(f"{self.ident}: {a} must be an atom, got {render(subst[a])}")
        pairs = tuple((v, subst[v]) for v in self.metavariables)
        return SchemeInstance(self.ident, pairs, substitute(self.formula, subst),
                              tuple(substitute(p, subst) for p in self.premise_formulas))


def _atoms_in_order(f: Formula) -> Iterable[str]:
    if isinstance(f, Prop):
        yield f.name
    for c in f.children:
        yield from _atoms_in_order(c)


_SCHEME_LIST = [
    # interior operator and its link with knowledge
    Scheme("P1a", "int(A) -> A", "int"),
    Scheme("P1b", "int(A) -> int(int(A))", "int"),
    Scheme("P1c", "int(A -> B) -> (int(A) -> int(B))", "int"),
    Scheme("P1d", "int(A)", "int", premises=("A",)),
    Scheme("P1e", "K A -> int(A)", "int"),
    Scheme("P1f", "int(A) -> K(A -> int(A))", "int", expect_valid=False),
    Scheme("P1g", "~(A -> int(A)) -> K ~int(A)", "int", expect_valid=False),
    Scheme("KI", "K A -> int(A)", "link"),
    # S4 for int
    Scheme("S4-K", "int(A -> B) -> (int(A) -> int(B))", "S4_int"),
    Scheme("S4-T", "int(A) -> A", "S4_int"),
    Scheme("S4-4", "int(A) -> int(int(A))", "S4_int"),
    Scheme("S4-N", "int(A)", "S4_int", premises=("A",)),
    # S5 for K
    Scheme("S5-K", "K(A -> B) -> (K A -> K B)", "S5_K"),
    Scheme("S5-T", "K A -> A", "S5_K"),
    Scheme("S5-4", "K A -> K K A", "S5_K"),
    Scheme("S5-5", "~K A -> K ~K A", "S5_K"),
    Scheme("S5-N", "K A", "S5_K", premises=("A",)),
    # classical propositional logic
    Scheme("CPL-1", "A -> (B -> A)", "CPL"),
    Scheme("CPL-2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))", "CPL"),
    Scheme("CPL-3", "(~A -> ~B) -> (B -> A)", "CPL"),
    Scheme("MP", "B", "CPL", premises=("A", "A -> B")),
    # announcement reduction schemes
    Scheme("R1", "[A]P <-> (int(A) -> P)", "reduction", atoms=("P",)),
    Scheme("R2", "[A]~B <-> (int(A) -> ~[A]B)", "reduction"),
    Scheme("R3", "[A](B & C) <-> ([A]B & [A]C)", "reduction"),
    Scheme("R4", "[A]K B <-> (int(A) -> K [A]B)", "reduction"),
    Scheme("R5", "[A]int(B) <-> (int(A) -> int([A]B))", "reduction"),
    Scheme("R6", "[A][B]C <-> [int(A) & [A]int(B)]C", "reduction"),
]

SCHEMES: dict[str, Scheme] = {s.ident: s for s in _SCHEME_LIST}


def get_scheme(ident: str) -> Scheme:
    try:
        return SCHEMES[ident]
    except KeyError:
        raise KeyError(f"unknown scheme {ident!r}") from None


def instantiations(scheme: Scheme, pool: Sequence[Formula], atoms: Sequence[Formula], *,
                   limit: int | None = None, seed: int = 0) -> list[SchemeInstance]:
    """Instances of ``scheme`` with metavariables drawn from ``pool`` (atom
    metavariables from ``atoms``).  If the full product exceeds ``limit``,
    ``limit`` combinations are drawn with a seeded generator instead."""
    names = scheme.metavariables
    choices = [list(atoms) if v in scheme.atoms else list(pool) for v in names]
    total = 1
    for c in choices:
        total *= len(c)
    if limit is None or total <= limit:
        combos: Iterable[tuple[Formula, ...]] = itertools.product(*choices)
    else:
        rng = random.Random(f"{scheme.ident}:{seed}")
        combos = [tuple(rng.choice(c) for c in choices) for _ in range(limit)]
    return [scheme.instantiate(dict(zip(names, combo))) for combo in combos]


# checking ----------------------------------------------------------------


def _confirm(m: SubsetModel, s: Scenario, f: Formula) -> None:
    if evaluate(m, s, f, Mode.INT):
        raise FleetMismatch(f"batch evaluator refuted {render(f)} at a scenario the reference evaluator accepts")


def _valid_on_model(m: SubsetModel, f: Formula) -> bool:
    ev = Evaluator(m, Mode.INT)
    return all(ev.ext(f, u) == u for u in m.ranges(Mode.INT))


def minimize_counterexample(m: SubsetModel, s: Scenario,
                            still_fails: Callable[[SubsetModel, Scenario], bool]) -> tuple[SubsetModel, Scenario]:
    """Greedily delete worlds (other than the scenario's) while ``still_fails``
    holds of the restricted model and range."""
    assert m.topology is not None
    changed = True
    while changed:
        changed = False
        keep_world = m.world_index(s.world)
        for i in range(len(m.universe)):
            if i == keep_world:
                continue
            keep = m.universe.full & ~(1 << i)
            ws, topo, kept = m.topology.subspace(keep)
            val = {p: compress_mask(v, kept) for p, v in m.valuation.items()}
            small = SubsetModel(ws, topo, val)
            cand = Scenario(s.world, compress_mask(s.range, kept))
            if still_fails(small, cand):
                m, s, changed = small, cand, True
                break
    return m, s


def _refute(fleet: FleetBatch, hit: FleetHit, f: Formula, premises: Sequence[Formula],
            minimize: bool) -> Counterexample:
    m, s = fleet.scenario(hit)
    _confirm(m, s, f)
    for p in premises:
        if not _valid_on_model(m, p):
            raise FleetMismatch(f"premise {render(p)} is not valid on the reported model")

    def still_fails(mm: SubsetModel, ss: Scenario) -> bool:
        return (not evaluate(mm, ss, f, Mode.INT)) and all(_valid_on_model(mm, p) for p in premises)

    if minimize:
        m, s = minimize_counterexample(m, s, still_fails)
    return Counterexample(m, s, hit.model)


def check_formula_on(fleet: FleetBatch, f: Formula | str, premises: Sequence[Formula] = (),
                     minimize: bool = True) -> Verdict:
    f = parse(f) if isinstance(f, str) else f
    models = None
    if premises:
        models = fleet.valid_per_model(premises[0])
        for p in premises[1:]:
            models &= fleet.valid_per_model(p)
    hit = fleet.first_failure(f, models)
    if hit is None:
        return Verdict(VALID)
    return Verdict(REFUTED, _refute(fleet, hit, f, premises, minimize))


def check_validity(f: Formula | str, fleet_spec: FleetSpec, minimize: bool = True) -> Verdict:
    """Is ``f`` true at every scenario of every model of the fleet?"""
    return check_formula_on(build_fleet(fleet_spec), f, minimize=minimize)


def default_pool(depth: int, props: Sequence[str]) -> list[Formula]:
    return formula_pool(depth, props)


def check_scheme(ident: str, pool: Sequence[Formula] | int, fleet_spec: FleetSpec, *,
                 limit: int | None = None, seed: int = 0, minimize: bool = True,
                 stop_at_first: bool = False) -> list[Verdict]:
    """One verdict per instance of the scheme over ``pool``.

    ``pool`` is either an explicit list of formulas or a depth, meaning every
    formula up to that depth over the fleet's propositions.
    """
    scheme = get_scheme(ident)
    fleet = build_fleet(fleet_spec)
    if isinstance(pool, int):
        pool = default_pool(pool, fleet_spec.props)
    atoms = [Prop(p) for p in fleet_spec.props] + [TOP, BOT]
    fleet.pin(pool)
    out = []
    for inst in instantiations(scheme, pool, atoms, limit=limit, seed=seed):
        v = check_formula_on(fleet, inst.instance, inst.premises, minimize)
        out.append(Verdict(v.status, v.counterexample, inst))
        if stop_at_first and not v.valid:
            break
    return out


def summarize(verdicts: Sequence[Verdict]) -> Verdict:
    """Collapse instance verdicts: the first refutation, else valid."""
    for v in verdicts:
        if not v.valid:
            return v
    return Verdict(VALID)

