"""Named suites of scheme checks, stored as JSON manifests.

A manifest names a fleet, an instantiation pool and a list of schemes with
the expected outcome of each (``valid`` or ``refuted``).  Built-in manifests
live in the ``suites`` directory next to this module; any other path to a
JSON file with the same fields works too.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from ..documents import ModelDocument
from ..syntax import Formula, Prop, TOP, BOT, render
from .generators import formula_pool, random_formula
from .validity import REFUTED, VALID, FleetSpec, Verdict, build_fleet, check_formula_on, get_scheme, instantiations


class SuiteError(ValueError):
    pass


@dataclass(frozen=True)
class PoolSpec:
    kind: str = "depth"
    depth: int = 2
    limit: int | None = 2000
    count: int = 0
    seed: int = 0

    def formulas(self, props: Sequence[str]) -> list[Formula]:
        if self.kind == "depth":
            return formula_pool(self.depth, props)
        if self.kind == "random":
            rng = random.Random(self.seed)
            pool = [Prop(p) for p in props]
            seen = set(pool)
            while len(pool) < len(props) + self.count:
                f = random_formula(rng, self.depth, props)
                if f not in seen:
                    seen.add(f)
                    pool.append(f)
            return pool
        raise SuiteError(f"unknown pool kind {self.kind!r}")


@dataclass(frozen=True)
class SuiteEntry:
    """A scheme and its expected outcome.  Refutations need counterexamples
    of ``min_worlds`` worlds, so smaller fleets cannot be expected to find them."""

    ident: str
    expect: str = "valid"
    min_worlds: int = 1


@dataclass(frozen=True)
class Suite:
    name: str
    fleet: FleetSpec
    pool: PoolSpec
    schemes: tuple[SuiteEntry, ...]
    description: str = ""

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Suite:
        try:
            fl = data["fleet"]
            if fl["kind"] == "exhaustive":
                fleet = FleetSpec.exhaustive(int(fl["max_worlds"]), fl.get("props", ["p", "q"]))
            elif fl["kind"] == "random":
                fleet = FleetSpec.random(int(fl["trials"]), int(fl["size"]), int(fl["seed"]),
                                         int(fl.get("props", 2)))
            else:
                raise SuiteError(f"unknown fleet kind {fl['kind']!r}")
            pl = data.get("pool", {})
            pool = PoolSpec(pl.get("kind", "depth"), int(pl.get("depth", 2)), pl.get("limit"),
                            int(pl.get("count", 0)), int(pl.get("seed", 0)))
            schemes = tuple(SuiteEntry(str(s["id"]), str(s.get("expect", "valid")), int(s.get("min_worlds", 1)))
                            for s in data["schemes"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SuiteError(f"malformed suite manifest: {exc}") from None
        for e in schemes:
            try:
                get_scheme(e.ident)
            except KeyError as exc:
                raise SuiteError(str(exc.args[0])) from None
            if e.expect not in ("valid", "refuted"):
                raise SuiteError(f"{e.ident}: expectation must be 'valid' or 'refuted'")
        return cls(str(data.get("name", "suite")), fleet, pool, schemes, str(data.get("description", "")))

    def with_overrides(self, max_worlds: int | None = None, seed: int | None = None,
                       trials: int | None = None) -> Suite:
        fleet, pool = self.fleet, self.pool
        if max_worlds is not None:
            if fleet.kind == "exhaustive":
                fleet = FleetSpec.exhaustive(max_worlds, fleet.props)
            else:
                fleet = replace(fleet, size=max_worlds)
        if trials is not None:
            if fleet.kind != "random":
                raise SuiteError("--trials only applies to random fleets")
            fleet = replace(fleet, trials=trials)
        if seed is not None:
            pool = replace(pool, seed=seed)
            if fleet.kind == "random":
                fleet = replace(fleet, seed=seed)
        return replace(self, fleet=fleet, pool=pool)


def builtin_suites() -> list[str]:
    root = resources.files(__package__).joinpath("suites")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_suite(name_or_path: str) -> Suite:
    if name_or_path in builtin_suites():
        text = resources.files(__package__).joinpath("suites", f"{name_or_path}.json").read_text("utf-8")
    else:
        path = Path(name_or_path)
        if not path.is_file():
            raise SuiteError(f"no suite named {name_or_path!r} (built-in: {', '.join(builtin_suites())})")
        text = path.read_text("utf-8")
    try:
        return Suite.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise SuiteError(f"invalid JSON: {exc}") from None


@dataclass
class SchemeResult:
    ident: str
    expect: str
    instances: int
    refuted: int
    first: Verdict | None = None
    saved: str | None = None
    fleet_too_small: bool = False

    @property
    def status(self) -> str:
        return REFUTED if self.refuted else VALID

    @property
    def ok(self) -> bool:
        if self.expect == "refuted" and self.fleet_too_small and not self.refuted:
            return True
        return (self.expect == "valid") == (self.refuted == 0)

    @property
    def mark(self) -> str:
        if not self.ok:
            return "UNEXPECTED"
        if self.expect == "refuted" and not self.refuted:
            return "ok (fleet too small to refute)"
        return "ok"


@dataclass
class SuiteReport:
    suite: Suite
    results: list[SchemeResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_text(self) -> str:
        lines = [f"suite {self.suite.name}: {self.suite.fleet.describe()}"]
        for r in self.results:
            line = (f"{r.ident:<6} {r.status:<15} {r.instances - r.refuted}/{r.instances} instances hold"
                    f"  (expected {r.expect})  {r.mark}")
            lines.append(line)
            if r.first is not None and r.first.counterexample is not None:
                inst = r.first.instance
                where = r.saved or r.first.counterexample.describe()
                lines.append(f"       first counterexample: {inst.describe() if inst else ''} -- {where}")
        lines.append("all expectations met" if self.ok else "some expectations NOT met")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict[str, Any]:
        rows = []
        for r in self.results:
            row: dict[str, Any] = {"scheme": r.ident, "status": r.status, "expect": r.expect,
                                   "instances": r.instances, "refuted": r.refuted, "ok": r.ok}
            if r.first is not None and r.first.counterexample is not None:
                cx = r.first.counterexample
                row["counterexample"] = {
                    "instance": render(r.first.instance.instance) if r.first.instance else None,
                    "model": ModelDocument.from_model(cx.model).to_json(),
                    "world": cx.scenario.world,
                    "range": cx.model.universe.members(cx.scenario.range),
                }
            rows.append(row)
        return {"suite": self.suite.name, "fleet": self.suite.fleet.describe(), "ok": self.ok, "schemes": rows}


def run_scheme(suite: Suite, entry: SuiteEntry) -> SchemeResult:
    fleet = build_fleet(suite.fleet)
    pool = suite.pool.formulas(suite.fleet.props)
    atoms = [Prop(p) for p in suite.fleet.props] + [TOP, BOT]
    fleet.pin(pool)
    insts = instantiations(get_scheme(entry.ident), pool, atoms, limit=suite.pool.limit, seed=suite.pool.seed)
    refuted = 0
    first = None
    for inst in insts:
        # only the first refutation is shrunk; later ones are just counted
        v = check_formula_on(fleet, inst.instance, inst.premises, minimize=first is None)
        if not v.valid:
            refuted += 1
            if first is None:
                first = Verdict(v.status, v.counterexample, inst)
    return SchemeResult(entry.ident, entry.expect, len(insts), refuted, first,
                        fleet_too_small=suite.fleet.largest < entry.min_worlds)


def _run_one(args: tuple[Suite, SuiteEntry]) -> SchemeResult:
    return run_scheme(*args)


def run_suite(suite: Suite, jobs: int = 1, save_dir: str | Path | None = None) -> SuiteReport:
    """Check every scheme of the suite.  Results keep the manifest order
    whatever ``jobs`` is, so reports are identical across runs."""
    tasks = [(suite, entry) for entry in suite.schemes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    if save_dir is not None:
        out = Path(save_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in results:
            if r.first is not None and r.first.counterexample is not None:
                cx = r.first.counterexample
                inst = r.first.instance
                meta = (f"counterexample to {render(inst.instance, sugar=True) if inst else r.ident} "
                        f"at ({cx.scenario.world}, {cx.model.universe.format(cx.scenario.range)})")
                path = out / f"{suite.name}-{r.ident}.json"
                path.write_text(ModelDocument.from_model(cx.model, meta).dumps(), encoding="utf-8")
                r.saved = str(path)
    return SuiteReport(suite, results)
