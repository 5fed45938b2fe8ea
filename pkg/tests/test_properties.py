import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances
from diffauction import batch, mechanisms, properties
from diffauction.catalog import hiding_network, label_index, revenue_dip_network, seven_buyer_network
from diffauction.exhaustive import check_micro, structures
from diffauction.mechanisms import run_distance_based
from diffauction.network import AuctionInstance, BuyerType
from diffauction.properties import (
    OUTCOME_CHECKS,
    EnumerationTooLarge,
    PropertyReport,
    bid_grid,
    check_domination,
    check_follower_revenue_monotonicity,
    check_hiding_dominance,
    check_strategy_proofness,
    enumerate_manipulations,
    find_strict_hiding_loss,
    hiding_gap,
    powerset,
    replay,
    run_property,
)


def test_report_invariant():
    with pytest.raises(ValueError):
        PropertyReport("x", True, {"a": 1})
    with pytest.raises(ValueError):
        PropertyReport("x", False, None)


def test_powerset_order():
    assert powerset({2, 0}) == [(), (0,), (2,), (0, 2)]


def test_manipulation_space_size():
    inst = seven_buyer_network()
    space = enumerate_manipulations(inst, 4)
    assert len(space.candidate_forward_sets) == 4
    assert len(space) == len(space.candidate_values) * 4
    assert 0 in space.candidate_values and 50 in space.candidate_values


def test_manipulation_cap():
    types = (BuyerType(1, frozenset(range(1, 6))),) + tuple(BuyerType(1) for _ in range(5))
    inst = AuctionInstance(1, frozenset({0}), types)
    with pytest.raises(EnumerationTooLarge):
        enumerate_manipulations(inst, 0, cap=4)


def test_bid_grid_straddles_every_value():
    inst = seven_buyer_network()
    grid = bid_grid(inst, inst.truthful(), 0)
    for v in inst.values:
        assert {v - 1, v, v + 1} <= set(grid)


@pytest.mark.parametrize("mech", ["distance", "ndvcg", "fcfs"])
def test_seven_buyer_is_strategy_proof(mech):
    rep = check_strategy_proofness(seven_buyer_network(), mech)
    assert rep.passed and rep.info["checked"] > 0


@given(instances(max_n=6, max_value=12), st.sampled_from(["distance", "ndvcg", "fcfs"]))
def test_no_profitable_deviation(inst, mech):
    assert check_strategy_proofness(inst, mech).passed


@given(instances(max_n=6, max_value=12), st.integers(0, 12))
def test_no_profitable_deviation_with_reserve(inst, v_h):
    assert check_strategy_proofness(inst, "distance", reserve=v_h).passed


@given(instances(max_n=5, max_value=10), st.sampled_from(["ndvcg", "fcfs"]))
def test_hiding_is_dominant_for_baselines(inst, mech):
    assert check_hiding_dominance(inst, mech, enumerate_opponents=True).passed


@given(instances(max_n=6))
def test_outcome_checks_hold_for_distance(inst):
    out = run_distance_based(inst, inst.truthful())
    for check in OUTCOME_CHECKS.values():
        assert check(inst, out).passed


def test_hiding_network_is_a_tie():
    inst = hiding_network()
    i1 = label_index(inst, "i1")
    assert hiding_gap(inst, "distance", i1) == 0
    assert check_hiding_dominance(inst, "distance").passed


def test_strict_hiding_loss_exists_for_distance():
    res = check_micro(3, 2, "distance", "hiding-dominance")
    assert not res.report().passed
    ex = res.hiding_example
    assert ex["sincere"] > ex["hidden"]
    inst, buyer = find_strict_hiding_loss([ex["instance"]])
    assert buyer == ex["buyer"]
    w = res.witness
    u_ref, u_dev = replay(w)
    assert (u_ref, u_dev) == (w["utility_reference"], w["utility_deviation"]) and u_dev > u_ref


def test_revenue_dip_witness():
    rep = check_follower_revenue_monotonicity(revenue_dip_network())
    assert not rep.passed
    assert rep.witness["subset"] == (0, 1)
    assert (rep.witness["revenue_full"], rep.witness["revenue_subset"]) == (12, 15)


def test_domination_reports_strict_witness():
    rep = check_domination([seven_buyer_network()], "distance", "ndvcg", "surplus")
    assert rep.passed and rep.info["strict"]["values"] == (156, 102)
    rep = check_domination([seven_buyer_network()], "ndvcg", "distance", "surplus")
    assert not rep.passed and rep.witness["values"] == (102, 156)


def test_run_property_unknown():
    with pytest.raises(KeyError):
        run_property("nope", [seven_buyer_network()])


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mech", ["distance", "ndvcg", "fcfs"])
def test_micro_strategy_proofness(n, mech):
    preps = structures(n)
    for k in range(1, n + 1):
        res = check_micro(n, k, mech, preps=preps)
        assert res.violations == 0, res.witness


# --- the checkers must catch a broken mechanism -----------------------------------


def _first_price(prep, values, k, reserve=None):
    alloc, _ = _orig_scalar(prep, values, k, reserve)
    return alloc, [v if a else 0 for v, a in zip(values, alloc)]


def _first_price_batch(prep, values, k, reserve=None):
    alloc, _ = _orig_batch(prep, values, k, reserve)
    return alloc, np.where(alloc, np.asarray(values, dtype=np.int64), 0)


_orig_scalar = mechanisms.allocate_distance_based
_orig_batch = batch.distance_based


@pytest.fixture
def first_price(monkeypatch):
    monkeypatch.setattr(mechanisms, "allocate_distance_based", _first_price)
    monkeypatch.setattr(properties, "allocate_distance_based", _first_price)
    monkeypatch.setattr(batch, "distance_based", _first_price_batch)


def test_scan_catches_first_price(first_price):
    rep = check_strategy_proofness(seven_buyer_network())
    assert not rep.passed
    u_ref, u_dev = replay(rep.witness)
    assert u_dev > u_ref == rep.witness["utility_reference"]


def test_micro_catches_first_price(first_price):
    res = check_micro(2, 1, "distance")
    assert res.violations > 0
    assert replay(res.witness)[1] > replay(res.witness)[0]
