import pytest
from hypothesis import given, settings

from topopal.bisim import (BisimRelation, check_invariance, format_relation, identity_relation,
                           is_partial_bisimulation, largest_partial_bisimulation, parse_relation)
from topopal.lab.builtins import builtin_model
from topopal.lab.generators import el_formulas
from topopal.model import Evaluator, InvalidScenario, Scenario, SubsetModel
from topopal.syntax import TOP, Int, Prop
from topopal.topology import Topology, WorldSet, bits
from strategies import el_formulas as el_strategy
from strategies import models


@pytest.fixture(scope="module")
def pair():
    return builtin_model("prop3-X"), builtin_model("prop3-Y")


def diagonal_relation(x, y):
    full = 0b11
    return BisimRelation(x, y, frozenset({(Scenario("x", full), Scenario("x", full)),
                                          (Scenario("y", full), Scenario("y", full))}))


def test_identity_is_a_bisimulation(pair):
    x, _ = pair
    assert is_partial_bisimulation(x, x, identity_relation(x))


def test_diagonal_relation(pair):
    x, y = pair
    assert is_partial_bisimulation(x, y, diagonal_relation(x, y))


def test_dropping_a_pair_breaks_forth(pair):
    x, y = pair
    r = diagonal_relation(x, y)
    smaller = BisimRelation(x, y, frozenset(p for p in r.pairs if p[0].world == "x"))
    verdict = is_partial_bisimulation(x, y, smaller)
    assert not verdict and verdict.condition == "FORTH"


def test_base_violation_named(pair):
    x, y = pair
    bad = BisimRelation(x, y, frozenset({(Scenario("x", 3), Scenario("y", 3))}))
    verdict = is_partial_bisimulation(x, y, bad)
    assert verdict.condition == "BASE"
    assert verdict.pair == (Scenario("x", 3), Scenario("y", 3))


def test_invalid_scenario_in_relation(pair):
    x, y = pair
    with pytest.raises(InvalidScenario):
        is_partial_bisimulation(x, y, [(Scenario("x", 1), Scenario("x", 1))])


def test_largest_examples(pair):
    x, y = pair
    r = largest_partial_bisimulation(x, y)
    assert diagonal_relation(x, y).pairs <= r.pairs
    ws = WorldSet(("w",))
    one = SubsetModel(ws, Topology.indiscrete(ws), {"p": 1})
    assert largest_partial_bisimulation(one, one).pairs == {(Scenario("w", 1), Scenario("w", 1))}
    other = SubsetModel(ws, Topology.indiscrete(ws), {"p": 0})
    assert len(largest_partial_bisimulation(one, other)) == 0


def test_invariance_on_prop3(pair):
    x, y = pair
    r = largest_partial_bisimulation(x, y)
    assert check_invariance(x, y, r, el_formulas(2, ["p"])) == []
    assert check_invariance(x, y, r, [TOP]) == []
    with pytest.raises(ValueError):
        check_invariance(x, y, r, [Int(Prop("p"))])
    bad = check_invariance(x, y, r, [Int(Prop("p"))], allow_non_el=True)
    assert [(d.pair[0].world, d.pair[0].range, d.left, d.right) for d in bad] == [("x", 3, True, False)]


def test_relation_text_round_trip(pair):
    x, y = pair
    r = largest_partial_bisimulation(x, y)
    text = format_relation(r)
    assert "x,ALL ~ x,ALL" in text
    assert parse_relation(text, x, y).pairs == r.pairs
    commented = "# header\n\n" + text.replace("\n", "  # note\n", 1)
    assert parse_relation(commented, x, y).pairs == r.pairs
    with pytest.raises(ValueError):
        parse_relation("x ALL x ALL", x, y)


# property tests -------------------------------------------------------


def _candidates(a, b, u, v):
    return {(Scenario(a.universe.names[i], u), Scenario(b.universe.names[j], v))
            for i in bits(u) for j in bits(v)
            if all((a.valuation.get(p, 0) >> i & 1) == (b.valuation.get(p, 0) >> j & 1)
                   for p in set(a.valuation) | set(b.valuation))}


@settings(max_examples=60)
@given(models(max_worlds=3), models(max_worlds=3))
def test_largest_is_valid_and_maximal(a, b):
    r = largest_partial_bisimulation(a, b)
    assert is_partial_bisimulation(a, b, r)
    present = {(s.range, t.range) for s, t in r.pairs}
    for u in [o for o in a.topology.opens if o]:
        for v in [o for o in b.topology.opens if o]:
            if (u, v) in present:
                continue
            extra = _candidates(a, b, u, v)
            if extra:
                assert not is_partial_bisimulation(a, b, r.pairs | extra)


@settings(max_examples=60)
@given(models(max_worlds=3), models(max_worlds=3))
def test_union_of_bisimulations(a, b):
    r = largest_partial_bisimulation(a, b)
    groups = {}
    for s, t in r.pairs:
        groups.setdefault((s.range, t.range), set()).add((s, t))
    keys = sorted(groups)
    left = BisimRelation(a, b, frozenset().union(*(groups[k] for k in keys[::2])))
    right = BisimRelation(a, b, frozenset().union(*(groups[k] for k in keys[1::2])))
    assert is_partial_bisimulation(a, b, left)
    assert is_partial_bisimulation(a, b, right)
    assert is_partial_bisimulation(a, b, left | right)


@settings(max_examples=60)
@given(models(max_worlds=3), models(max_worlds=3), el_strategy)
def test_el_formulas_cannot_separate_related_scenarios(a, b, f):
    r = largest_partial_bisimulation(a, b)
    ea, eb = Evaluator(a), Evaluator(b)
    for s, t in r.pairs:
        assert ea.holds(a.world_index(s.world), s.range, f) == eb.holds(b.world_index(t.world), t.range, f)
