import io
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances
from diffauction.efficiency import (
    CSV_COLUMNS,
    adversarial_instances,
    alpha_estimate,
    below_reserve_family,
    efficiency_record,
    optimal_surplus,
    path_family,
    worst_case_bound,
    write_csv,
)
from diffauction.mechanisms import run_distance_based
from diffauction.network import connected_and_distances


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("v_h", [0, 25, 50, 75])
def test_path_family_loss(k, v_h):
    inst = path_family(k, 100, v_h)
    rec = efficiency_record(inst, reserve=v_h)
    assert rec.loss == k * (100 - v_h)
    assert rec.normalized_loss == Fraction(100 - v_h, 100)


@pytest.mark.parametrize("k", [1, 3])
def test_below_reserve_family_loss(k):
    inst = below_reserve_family(k, 100, 50)
    rec = efficiency_record(inst, reserve=50)
    assert rec.achieved_surplus == 0 and rec.loss == k * 49
    assert below_reserve_family(k, 100, 0) is None


def test_worst_case_bound():
    assert worst_case_bound(3, 100, 50) == 150
    assert worst_case_bound(2, 100, 30) == 140


@pytest.mark.parametrize("k", [1, 2, 4])
def test_half_reserve_estimate(k):
    est = alpha_estimate(k, 100, 50)
    assert est.value == Fraction(1, 2)
    assert est.adversarial_max == Fraction(1, 2)


def test_requires_cap():
    from diffauction.catalog import seven_buyer_network

    with pytest.raises(ValueError):
        efficiency_record(seven_buyer_network(), reserve=10)


@given(instances(max_value=100), st.integers(0, 100))
def test_loss_within_worst_case(inst, v_h):
    rec = efficiency_record(inst, reserve=v_h)
    assert 0 <= rec.loss <= worst_case_bound(inst.k, 100, v_h)
    assert rec.optimal_surplus == optimal_surplus(inst, inst.truthful())


@given(instances(max_value=30), st.integers(0, 30))
def test_reserve_winner_count(inst, v_h):
    view = connected_and_distances(inst, inst.truthful())
    above = sorted((inst.types[i].value for i in view.connected if inst.types[i].value >= v_h), reverse=True)
    out = run_distance_based(inst, inst.truthful(), reserve=v_h)
    assert len(out.winners) == min(len(above), inst.k)
    if len(above) <= inst.k:
        assert out.surplus == sum(above)


def test_csv_columns():
    buf = io.StringIO()
    write_csv([(7, path_family(2, 100, 50), 50)], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "7,4,2,50,200,100,100,1/2"


def test_adversarial_instances_are_capped():
    for inst in adversarial_instances(3, 100, 50):
        assert inst.value_cap == 100
