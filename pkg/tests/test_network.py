import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances
from diffauction.catalog import seven_buyer_network
from diffauction.network import (
    INF,
    SELLER,
    AuctionInstance,
    BuyerType,
    InstanceError,
    NotConnectedError,
    ReportProfile,
    build_critical_tree,
    connected_and_distances,
    critical_parents,
    critical_parents_bruteforce,
    eligible_others,
    least_critical_parent,
    reported_edges,
)


def test_seven_buyer_distances():
    inst = seven_buyer_network()
    view = connected_and_distances(inst, inst.truthful())
    assert view.distance == (1, 1, 2, 2, 3, 4, 4)
    assert view.connected == frozenset(range(7))


def test_seven_buyer_tree():
    inst = seven_buyer_network()
    tree = build_critical_tree(inst, inst.truthful())
    # i3 is reachable through i1 and through i2, so it hangs under the seller
    assert tree.edges() == {(SELLER, 0), (SELLER, 1), (SELLER, 2), (1, 3), (2, 4), (4, 5), (4, 6)}
    assert tree.descendants(2) == frozenset({4, 5, 6})
    assert tree.descendants(5) == frozenset()


def test_seven_buyer_critical_parents():
    inst = seven_buyer_network()
    rep = inst.truthful()
    view = connected_and_distances(inst, rep)
    edges = reported_edges(inst, rep)
    assert critical_parents(view, edges, 5) == frozenset({2, 4})
    assert least_critical_parent(view, edges, 5) == 4
    assert least_critical_parent(view, edges, 2) == SELLER


def test_eligible_excludes_self_and_descendants():
    inst = seven_buyer_network()
    tree = build_critical_tree(inst, inst.truthful())
    assert eligible_others(tree, range(7), 2) == frozenset({0, 1, 3})


def test_unconnected_buyer_queries_raise():
    inst = AuctionInstance(1, frozenset({0}), (BuyerType(1), BuyerType(2)))
    rep = inst.truthful()
    view = connected_and_distances(inst, rep)
    assert view.distance[1] == INF
    with pytest.raises(NotConnectedError):
        critical_parents(view, reported_edges(inst, rep), 1)
    with pytest.raises(NotConnectedError):
        eligible_others(build_critical_tree(inst, rep), view.connected, 1)


def test_empty_instance():
    inst = AuctionInstance(2, frozenset(), ())
    tree = build_critical_tree(inst, inst.truthful())
    assert tree.parent == {}


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(k=0, seller_followers={0}, types=(BuyerType(1),)),
        dict(k=1, seller_followers={3}, types=(BuyerType(1),)),
        dict(k=1, seller_followers={0}, types=(BuyerType(1, frozenset({0})),)),
        dict(k=1, seller_followers={0}, types=(BuyerType(1, frozenset({5})),)),
        dict(k=1, seller_followers={0}, types=(BuyerType(-1),)),
        dict(k=1, seller_followers={0}, types=(BuyerType(1.5),)),
        dict(k=1, seller_followers={0}, types=(BuyerType(101),), value_cap=100),
    ],
)
def test_invalid_instances_rejected(kwargs):
    with pytest.raises(InstanceError):
        AuctionInstance(**kwargs)


def test_report_cannot_forward_to_strangers():
    inst = AuctionInstance(1, frozenset({0}), (BuyerType(1), BuyerType(2)))
    bad = ReportProfile((1, 2), (frozenset({1}), frozenset()))
    with pytest.raises(InstanceError):
        connected_and_distances(inst, bad)


@given(instances(max_n=10))
def test_dominators_match_remove_and_bfs(inst):
    rep = inst.truthful()
    view = connected_and_distances(inst, rep)
    edges = reported_edges(inst, rep)
    for i in view.connected:
        assert critical_parents(view, edges, i) == critical_parents_bruteforce(view, edges, i)


@given(instances(max_n=10))
def test_tree_is_well_formed(inst):
    rep = inst.truthful()
    view = connected_and_distances(inst, rep)
    tree = build_critical_tree(inst, rep)
    assert set(tree.parent) == set(view.connected)
    for child, parent in tree.parent.items():
        # parents sit strictly closer to the seller, so the parent map is acyclic
        if parent != SELLER:
            assert view.distance[parent] < view.distance[child]
        assert child not in tree.descendants(child)
    # every connected buyer is reached from the seller through the tree
    assert tree.descendants(SELLER) == view.connected


@given(instances(max_n=8), st.data())
def test_hiding_never_reconnects_anyone(inst, data):
    rep = inst.truthful()
    if not inst.n:
        return
    i = data.draw(st.integers(0, inst.n - 1))
    sub = data.draw(st.sets(st.sampled_from(sorted(inst.types[i].followers)))) if inst.types[i].followers else set()
    full = connected_and_distances(inst, rep)
    less = connected_and_distances(inst, rep.deviate(i, forwarded=sub))
    assert less.connected <= full.connected
    for j in less.connected:
        assert less.distance[j] >= full.distance[j]


@given(instances(max_n=8))
def test_distances_are_consistent(inst):
    rep = inst.truthful()
    view = connected_and_distances(inst, rep)
    for j in inst.seller_followers:
        assert view.distance[j] == 1
    for u in view.connected:
        for w in rep.forwarded[u]:
            assert view.distance[w] <= view.distance[u] + 1
    for j in view.connected - inst.seller_followers:
        assert any(view.distance[u] == view.distance[j] - 1 for u in view.connected if j in rep.forwarded[u])
