"""Small hand-built instances used throughout tests, CLI examples and scripts."""
from __future__ import annotations

from .network import AuctionInstance, BuyerType


def seven_buyer_network(k: int = 3) -> AuctionInstance:
    """Seven buyers i1..i7 (ids 0..6) with a two-cycle between i2 and i3.

    Edges: s->i1, s->i2, i1->i3, i2<->i3, i2->i4, i3->i5, i5->i6, i5->i7.
    """
    values = [30, 72, 34, 45, 50, 66, 40]
    followers = [{2}, {2, 3}, {1, 4}, set(), {5, 6}, set(), set()]
    return AuctionInstance(
        k=k,
        seller_followers=frozenset({0, 1}),
        types=tuple(BuyerType(v, frozenset(f)) for v, f in zip(values, followers)),
        labels=tuple(f"i{j}" for j in range(1, 8)),
    )


def revenue_dip_network(k: int = 2) -> AuctionInstance:
    """Four buyers where informing every direct buyer lowers revenue.

    i1 (5) forwards to i4 (15); i2 (20) and i3 (6) are leaves.
    """
    values = [5, 20, 6, 15]
    followers = [{3}, set(), set(), set()]
    return AuctionInstance(
        k=k,
        seller_followers=frozenset({0, 1, 2}),
        types=tuple(BuyerType(v, frozenset(f)) for v, f in zip(values, followers)),
        labels=("i1", "i2", "i3", "i4"),
    )


def hiding_network(k: int = 2) -> AuctionInstance:
    """``k + 2`` buyers built to probe whether hiding followers is dominant.

    i1 (15) -> i2 (20), i3 (10) -> i4 (9), and i5..i_{k+2} are direct leaves
    of value 30. Ids are assigned so that the priority order is
    i5 > ... > i_{k+2} > i3 > i1 > i4 > i2.
    """
    if k < 2:
        raise ValueError("needs k >= 2")
    names = [f"i{j}" for j in range(5, k + 3)] + ["i3", "i1", "i4", "i2"]
    idx = {name: pos for pos, name in enumerate(names)}
    by_name = {
        "i1": (15, {"i2"}),
        "i2": (20, set()),
        "i3": (10, {"i4"}),
        "i4": (9, set()),
    }
    for j in range(5, k + 3):
        by_name[f"i{j}"] = (30, set())
    types = tuple(
        BuyerType(by_name[name][0], frozenset(idx[f] for f in by_name[name][1])) for name in names
    )
    direct = [f"i{j}" for j in range(5, k + 3)] + ["i1", "i3"]
    return AuctionInstance(
        k=k,
        seller_followers=frozenset(idx[d] for d in direct),
        types=types,
        labels=tuple(names),
    )


def label_index(instance: AuctionInstance, label: str) -> int:
    return instance.labels.index(label)
