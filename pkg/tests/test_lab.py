import json
import random

import pytest
from hypothesis import given, settings

from topopal.lab.builtins import BUILTINS, builtin_model, target_wall_document
from topopal.lab.enumeration import enumerate_topologies
from topopal.lab.generators import el_formulas, formula_pool, random_formula, random_model
from topopal.lab.suites import Suite, SuiteError, load_suite, run_suite
from topopal.documents import load_model
from topopal.lab.validity import (REFUTED, SCHEMES, VALID, FleetSpec, Verdict, build_fleet, check_scheme,
                                  check_validity, get_scheme, instantiations, minimize_counterexample)
from topopal.model import Evaluator, Mode, SubsetModel, evaluate
from topopal.syntax import TOP, Fragment, Prop, depth, fragment, parse
from topopal.topology import verify_topology
from oracles import brute_force_topologies
from strategies import formulas

EXH3_P = FleetSpec.exhaustive(3, ["p"])


# built-in models -------------------------------------------------------


def test_builtin_examples():
    y = builtin_model("prop3-Y")
    assert [y.universe.format(o) for o in y.topology.opens] == ["{}", "{y}", "{x,y}"]
    jt = builtin_model("jewel-tomb")
    assert evaluate(jt, jt.scenario("s_JD"), "int(j)")
    fig = builtin_model("fig2-discrete")
    assert Evaluator(fig).ext(parse("int(p)"), fig.universe.full) == fig.universe.mask(["x"])
    assert not evaluate(fig, fig.scenario("x"), "int(p) -> K(p -> int(p))")
    assert not evaluate(fig, fig.scenario("y"), "~(p -> int(p)) -> K ~int(p)")


def test_builtin_errors():
    with pytest.raises(KeyError):
        builtin_model("nope")
    with pytest.raises(ValueError):
        target_wall_document(width=10, height=9, cell=3)
    with pytest.raises(ValueError):
        target_wall_document(width=0)
    with pytest.raises(ValueError):
        target_wall_document(width=3, height=3, cell=1, blocked=[(5, 5)])


def test_five_builtins():
    assert list(BUILTINS) == ["jewel-tomb", "target-wall", "prop3-X", "prop3-Y", "fig2-discrete"]


def test_target_wall_shape():
    m = builtin_model("target-wall")
    assert len(m.universe) == 12 * 9
    assert m.universe.names[0] == "x0y0"
    assert 0 < m.valuation["b"] < m.universe.full


# enumeration -------------------------------------------------------------


@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 29)])
def test_enumeration_matches_brute_force(n, count):
    ts = list(enumerate_topologies(n))
    ws = ts[0].universe
    got = {frozenset(frozenset(ws.members(o)) for o in t.opens) for t in ts}
    assert len(ts) == len(got) == count
    assert got == brute_force_topologies(ws.names)


def test_enumeration_four_worlds():
    ts = list(enumerate_topologies(4))
    assert len(ts) == len(set(ts)) == 355
    assert all(verify_topology(t) for t in ts)


@pytest.mark.parametrize("n", [0, 5, -1])
def test_enumeration_range(n):
    with pytest.raises(ValueError):
        list(enumerate_topologies(n))


# generators --------------------------------------------------------------


def test_random_model_is_deterministic():
    assert random_model(42, 5, 3) == random_model(42, 5, 3)
    assert random_model(42, 5, 3) != random_model(43, 5, 3)


def test_random_models_are_topological():
    assert all(verify_topology(random_model(s, 4).topology) for s in range(10_000))


def test_random_model_variety():
    # pinned from a one-off measurement: every topology on three worlds shows up
    distinct = {random_model(s, 3).topology for s in range(1000)}
    assert len(distinct) >= 5
    assert len(distinct) == 29


def test_random_model_bounds():
    with pytest.raises(ValueError):
        random_model(0, 9)


def test_random_formula_depth_and_fragment():
    rng = random.Random(3)
    for _ in range(500):
        f = random_formula(rng, 3, ["p", "q"], announce=False, interior=False)
        assert depth(f) <= 3
        assert fragment(f) is Fragment.EL


def test_pools():
    assert len(formula_pool(0, ["p"])) == 2
    assert len(formula_pool(1, ["p", "q"])) == 21
    pool = formula_pool(2, ["p", "q"])
    assert len(pool) == len(set(pool))
    assert all(depth(f) <= 2 for f in pool)
    assert all(fragment(f) is Fragment.EL for f in el_formulas(2, ["p"]))
    with pytest.raises(ValueError):
        formula_pool(1, ["p"], ops=["xor"])


# validity ---------------------------------------------------------------


def test_check_validity_examples():
    assert check_validity("int(p) -> p", EXH3_P).status == VALID
    assert check_validity("K p -> int(p)", EXH3_P).status == VALID
    v = check_validity("int(p) -> K(p -> int(p))", EXH3_P)
    assert v.status == REFUTED
    cx = v.counterexample
    assert len(cx.model.universe) == 3
    assert not evaluate(cx.model, cx.scenario, "int(p) -> K(p -> int(p))")
    # the shape of the plane picture: p is one open point plus a boundary point
    m = cx.model
    assert bin(Evaluator(m).ext(parse("int(p)"), m.universe.full)).count("1") == 1


def test_check_scheme_examples():
    spec = FleetSpec.exhaustive(3, ["p", "q"])
    verdicts = check_scheme("R1", 1, spec)
    assert verdicts and all(v.valid for v in verdicts)
    g = check_scheme("P1g", [Prop("p")], spec)
    assert len(g) == 1 and g[0].status == REFUTED
    cx = g[0].counterexample
    assert not evaluate(cx.model, cx.scenario, g[0].instance.instance)
    assert all(v.valid for v in check_scheme("KI", [TOP], spec))


def test_rule_schemes_are_checked_per_model():
    spec = FleetSpec.exhaustive(2, ["p"])
    assert all(v.valid for v in check_scheme("S5-N", 1, spec))
    assert all(v.valid for v in check_scheme("MP", [Prop("p"), TOP, parse("K p")], spec))


def test_scheme_instances_follow_templates():
    s = get_scheme("R6")
    assert s.metavariables == ("A", "B", "C")
    inst = s.instantiate({"A": Prop("p"), "B": Prop("q"), "C": TOP})
    assert inst.instance == parse("[p][q]true <-> [int(p) & [p]int(q)]true")
    with pytest.raises(ValueError):
        get_scheme("R1").instantiate({"A": Prop("p"), "P": parse("K p")})
    with pytest.raises(KeyError):
        get_scheme("nope")


def test_instantiation_limit_is_seeded():
    pool = formula_pool(1, ["p", "q"])
    a = instantiations(get_scheme("CPL-2"), pool, [], limit=50, seed=1)
    b = instantiations(get_scheme("CPL-2"), pool, [], limit=50, seed=1)
    assert len(a) == 50 and a == b


def test_verdict_invariants():
    with pytest.raises(ValueError):
        Verdict(REFUTED)
    with pytest.raises(ValueError):
        Verdict("maybe")


def test_minimize_counterexample():
    # padding a counterexample with an isolated extra world is undone
    padded = SubsetModel.build(["x", "y", "z", "w"], [["x"], ["w"]], {"p": ["x", "y"]}, generate=True)
    f = parse("int(p) -> K(p -> int(p))")
    assert not evaluate(padded, padded.scenario("x"), f)
    small, s = minimize_counterexample(padded, padded.scenario("x"), lambda m, sc: not evaluate(m, sc, f))
    assert len(small.universe) == 3 and small.universe.names[:2] == ("x", "y")
    assert not evaluate(small, s, f)


def test_expectations_in_scheme_table():
    assert {k for k, s in SCHEMES.items() if not s.expect_valid} == {"P1f", "P1g"}


@settings(max_examples=25, deadline=None)
@given(formulas(max_leaves=6))
def test_validity_agrees_with_reference(f):
    spec = FleetSpec.exhaustive(2, ["p", "q"])
    verdict = check_validity(f, spec, minimize=False)
    fleet = build_fleet(spec)
    holds_everywhere = True
    for k in range(fleet.n_models):
        m = fleet.model(k)
        ev = Evaluator(m)
        if any(ev.ext(f, u) != u for u in m.ranges(Mode.INT)):
            holds_everywhere = False
            break
    assert verdict.valid == holds_everywhere


# suites -------------------------------------------------------------------


def test_builtin_suites_load():
    axioms = load_suite("axioms")
    assert axioms.fleet.kind == "exhaustive"
    assert {e.ident for e in axioms.schemes} >= {"P1a", "P1f", "P1g", "KI", "R1", "R6"}
    assert load_suite("fuzz").fleet.kind == "random"


def test_suite_errors(tmp_path):
    with pytest.raises(SuiteError):
        load_suite("does-not-exist")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"fleet": {"kind": "exhaustive", "max_worlds": 2}, "schemes": [{"id": "Z9"}]}))
    with pytest.raises(SuiteError):
        load_suite(str(bad))
    bad.write_text("{")
    with pytest.raises(SuiteError):
        load_suite(str(bad))
    with pytest.raises(SuiteError):
        load_suite("axioms").with_overrides(trials=5)


def test_small_suite_runs(tmp_path):
    manifest = {"name": "mini", "fleet": {"kind": "exhaustive", "max_worlds": 3, "props": ["p"]},
                "pool": {"kind": "depth", "depth": 1},
                "schemes": [{"id": "P1a"}, {"id": "P1f", "expect": "refuted", "min_worlds": 3}]}
    path = tmp_path / "mini.json"
    path.write_text(json.dumps(manifest))
    report = run_suite(load_suite(str(path)), save_dir=tmp_path / "cx")
    assert report.ok
    saved = [r.saved for r in report.results if r.saved]
    assert len(saved) == 1
    cx_model = load_model(saved[0])
    assert len(cx_model.universe) == 3


def test_unexpected_verdict_is_reported():
    suite = Suite.from_json({"name": "wrong", "fleet": {"kind": "exhaustive", "max_worlds": 3, "props": ["p"]},
                             "pool": {"kind": "depth", "depth": 0},
                             "schemes": [{"id": "P1f", "expect": "valid"}, {"id": "P1a", "expect": "refuted"}]})
    report = run_suite(suite)
    assert not report.ok
    assert [r.ok for r in report.results] == [False, False]
    assert "UNEXPECTED" in report.to_text()


def test_fuzz_report_is_reproducible():
    suite = load_suite("fuzz").with_overrides(seed=7, trials=100)
    a = run_suite(suite).to_text()
    b = run_suite(suite, jobs=2).to_text()
    assert a == b
