import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topopal.lab.builtins import builtin_model
from topopal.lab.fleet import FleetBatch
from topopal.lab.generators import random_model
from topopal.model import Evaluator
from topopal.syntax import Prop, parse
from strategies import formulas

MODELS = [random_model(s, n, 2) for s in range(40) for n in (1, 3, 5)] + [
    builtin_model("jewel-tomb"), builtin_model("prop3-Y"), builtin_model("fig2-discrete")]


@pytest.fixture(scope="module")
def fleet():
    return FleetBatch.from_models(MODELS)


@settings(max_examples=150, deadline=None)
@given(formulas(props=("p", "q", "j", "d"), effort=True))
def test_batch_matches_reference(fleet, f):
    ext = fleet.extension(f)
    for k, m in enumerate(MODELS):
        ev = Evaluator(m)
        for j, u in enumerate(m.topology.opens):
            assert int(ext[fleet.offset[k] + j]) == ev.ext(f, u)


def test_exhaustive_fleet_sizes():
    fb = FleetBatch.exhaustive(3, ["p"])
    assert len(fb.topologies) == 1 + 4 + 29
    assert fb.n_models == 1 * 2 + 4 * 4 + 29 * 8


def test_first_failure_is_lowest_model(fleet):
    f = parse("int(p) -> K(p -> int(p))")
    hit = fleet.first_failure(f)
    assert hit is not None
    valid = fleet.valid_per_model(f)
    assert valid[: hit.model].all() and not valid[hit.model]
    m, s = fleet.scenario(hit)
    assert not Evaluator(m).holds(m.world_index(s.world), s.range, f)


def test_missing_props_are_false(fleet):
    assert not fleet.extension(Prop("zzz")).any()


def test_memo_flush_keeps_pinned(fleet, monkeypatch):
    import topopal.lab.fleet as mod
    monkeypatch.setattr(mod, "MEMO_LIMIT", 3)
    fleet.memo.clear()
    keep = parse("K p")
    fleet.pin([keep])
    fleet.extension(keep)
    for text in ("q", "~q", "~~q", "int(q)"):
        fleet.extension(parse(text))
    assert keep in fleet.memo
    assert len(fleet.memo) <= 4


def test_fleet_limits():
    with pytest.raises(ValueError):
        FleetBatch([], [], {})


@given(st.integers(0, 10))
def test_from_models_shares_topologies(seed):
    ms = [random_model(seed, 2, 1), random_model(seed, 2, 1)]
    fb = FleetBatch.from_models(ms)
    assert len(fb.topologies) == 1
    assert np.array_equal(fb.valuations["p"], np.array([ms[0].valuation["p"]] * 2, dtype=np.uint8))
