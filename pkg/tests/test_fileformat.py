import json
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import DATA, instances
from diffauction.catalog import seven_buyer_network
from diffauction.fileformat import (
    FORMAT_TAG,
    InstanceFormatError,
    format_report,
    parse_instance,
    serialize_instance,
)
from diffauction.network import AuctionInstance, BuyerType
from diffauction.properties import check_follower_revenue_monotonicity
from diffauction.catalog import revenue_dip_network


@given(instances())
def test_round_trip(inst):
    text = serialize_instance(inst)
    back = parse_instance(text)
    assert back == inst
    assert serialize_instance(back) == text


def test_round_trip_fractions_and_labels():
    inst = AuctionInstance(
        2, frozenset({0}), (BuyerType(Fraction(7, 2), frozenset({1})), BuyerType(3)), reserve=Fraction(1, 3), labels=("a", "b")
    )
    text = serialize_instance(inst)
    assert '"7/2"' in text and '"1/3"' in text
    assert parse_instance(text) == inst


@pytest.mark.parametrize("path", sorted(DATA.glob("*.json")), ids=lambda p: p.name)
def test_data_files_are_canonical(path):
    text = path.read_text()
    assert serialize_instance(parse_instance(text)) == text


def _doc(**over):
    doc = json.loads(serialize_instance(seven_buyer_network()))
    doc.update(over)
    return json.dumps(doc, indent=1)


@pytest.mark.parametrize(
    "text, field",
    [
        (_doc(format="other/1"), "format"),
        (_doc(k=0), "k"),
        (_doc(k="3"), "k"),
        (_doc(seller_followers=[0, 9]), "seller_followers"),
        (_doc(reserve=-1), "reserve"),
        (_doc(reserve=1.5), "reserve"),
        (_doc(extra=1), None),
    ],
)
def test_bad_documents(text, field):
    with pytest.raises(InstanceFormatError) as e:
        parse_instance(text)
    assert e.value.field == field


def test_bad_buyer_reports_line():
    text = serialize_instance(seven_buyer_network()).replace('"followers": [5, 6]', '"followers": [5, 9]')
    with pytest.raises(InstanceFormatError) as e:
        parse_instance(text)
    assert e.value.field == "buyers[4].followers"
    assert e.value.line == 10
    assert "dangling" in str(e.value)


@pytest.mark.parametrize(
    "old, new",
    [
        ('"followers": [5, 6]', '"followers": [4]'),
        ('"value": 50', '"value": -5'),
        ('{"id": 6,', '{"id": 9,'),
        ('"label": "i7", ', ""),
    ],
)
def test_bad_buyers(old, new):
    text = serialize_instance(seven_buyer_network()).replace(old, new)
    with pytest.raises(InstanceFormatError):
        parse_instance(text)


def test_malformed_json_has_line():
    with pytest.raises(InstanceFormatError) as e:
        parse_instance('{\n  "format": ,\n}')
    assert e.value.line == 2


def test_missing_tag():
    with pytest.raises(InstanceFormatError):
        parse_instance(json.dumps({"k": 1, "seller_followers": [], "buyers": []}))
    assert parse_instance(json.dumps({"format": FORMAT_TAG, "k": 1, "seller_followers": [], "buyers": []})).n == 0


def test_report_rendering():
    text = format_report(check_follower_revenue_monotonicity(revenue_dip_network()))
    first, *rest = text.splitlines()
    assert first == "[FAIL] follower-revenue-monotonicity"
    witness = json.loads(rest[-1].removeprefix("witness: "))
    assert witness["subset"] == [0, 1]
