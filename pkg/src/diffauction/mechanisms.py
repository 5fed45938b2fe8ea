"""Allocation and payment rules: distance-based mechanism and two baselines."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .network import (
    INF,
    SELLER,
    AuctionInstance,
    DiffusionCriticalTree,
    Money,
    ReachabilityView,
    ReportProfile,
    connected_and_distances,
    critical_tree_from,
    eligible_others,
    reported_edges,
)


@dataclass(frozen=True)
class Outcome:
    allocated: tuple
    payment: tuple
    surplus: Money
    revenue: Money

    @property
    def winners(self) -> tuple:
        return tuple(i for i, x in enumerate(self.allocated) if x)

    def utility(self, i: int, true_value: Money) -> Money:
        return true_value * self.allocated[i] - self.payment[i]


@dataclass(frozen=True)
class ReserveConfig:
    """Reserve price realised as ``k`` seller-adjacent dummy bidders."""

    reserve_value: Money

    def __post_init__(self):
        if self.reserve_value < 0:
            raise ValueError("reserve must be non-negative")


def v_star(values: Iterable[Money], k_prime: int):
    """k'-th highest of ``values``; INF for k' <= 0, 0 if fewer than k' values."""
    if k_prime <= 0:
        return INF
    values = sorted(values, reverse=True)
    if len(values) < k_prime:
        return 0
    return values[k_prime - 1]


def priority_order(view: ReachabilityView) -> tuple:
    """Connected buyers by ascending distance, ties by ascending id."""
    return tuple(sorted(view.connected, key=lambda i: (view.distance[i], i)))


@dataclass(frozen=True)
class Prepared:
    """Everything the mechanisms need that depends only on the graph."""

    view: ReachabilityView
    tree: DiffusionCriticalTree
    order: tuple
    eligible: dict  # buyer -> frozenset of eligible competitors


def prepare(instance: AuctionInstance, report: ReportProfile) -> Prepared:
    view = connected_and_distances(instance, report)
    tree = critical_tree_from(view, reported_edges(instance, report))
    eligible = {i: eligible_others(tree, view.connected, i) for i in view.connected}
    return Prepared(view, tree, priority_order(view), eligible)


def _as_reserve(reserve) -> Money | None:
    if reserve is None:
        return None
    if isinstance(reserve, ReserveConfig):
        return reserve.reserve_value
    return ReserveConfig(reserve).reserve_value


def allocate_distance_based(prep: Prepared, values: Sequence[Money], k: int, reserve=None):
    """Run the priority loop on fixed graph structure.

    Returns ``(allocated, payment)`` lists indexed by buyer id.
    """
    v_h = _as_reserve(reserve)
    dummies = [] if v_h is None else [v_h] * k
    n = len(values)
    allocated = [0] * n
    payment = [0] * n
    remaining = k
    won = set()
    for i in prep.order:
        pool = [values[j] for j in prep.eligible[i] if j not in won]
        price = v_star(pool + dummies, remaining)
        if values[i] >= price:
            allocated[i] = 1
            payment[i] = price
            remaining -= 1
            won.add(i)
    return allocated, payment


def _outcome(instance: AuctionInstance, allocated, payment) -> Outcome:
    surplus = sum(t.value for t, x in zip(instance.types, allocated) if x)
    return Outcome(tuple(allocated), tuple(payment), surplus, sum(payment))


def run_distance_based(instance: AuctionInstance, report: ReportProfile, reserve=None) -> Outcome:
    prep = prepare(instance, report)
    allocated, payment = allocate_distance_based(prep, report.values, instance.k, reserve)
    return _outcome(instance, allocated, payment)


def allocate_nd_vcg(instance: AuctionInstance, values: Sequence[Money]):
    """VCG over direct buyers only, ranked by value then ascending id."""
    direct = sorted(instance.seller_followers)
    ranked = sorted(direct, key=lambda i: (-values[i], i))
    winners = set(ranked[: instance.k])
    n = len(values)
    allocated = [0] * n
    payment = [0] * n
    for i in winners:
        allocated[i] = 1
        payment[i] = v_star([values[j] for j in direct if j != i], instance.k)
    return allocated, payment


def run_nd_vcg(instance: AuctionInstance, report: ReportProfile) -> Outcome:
    report.validate(instance)
    allocated, payment = allocate_nd_vcg(instance, report.values)
    return _outcome(instance, allocated, payment)


def allocate_fcfs_f(prep: Prepared, n: int, k: int):
    allocated = [0] * n
    for i in prep.order[:k]:
        allocated[i] = 1
    return allocated, [0] * n


def run_fcfs_f(instance: AuctionInstance, report: ReportProfile) -> Outcome:
    prep = prepare(instance, report)
    allocated, payment = allocate_fcfs_f(prep, instance.n, instance.k)
    return _outcome(instance, allocated, payment)


def social_surplus(instance: AuctionInstance, outcome: Outcome) -> Money:
    return sum(t.value for t, x in zip(instance.types, outcome.allocated) if x)


def revenue(outcome: Outcome) -> Money:
    return sum(outcome.payment)


MECHANISMS: dict[str, Callable[..., Outcome]] = {
    "distance": run_distance_based,
    "ndvcg": run_nd_vcg,
    "fcfs": run_fcfs_f,
}


def run_mechanism(name: str, instance: AuctionInstance, report: ReportProfile, reserve=None) -> Outcome:
    if name not in MECHANISMS:
        raise KeyError(f"unknown mechanism {name!r}; choose from {sorted(MECHANISMS)}")
    if reserve is not None:
        if name != "distance":
            raise ValueError("a reserve price is only defined for the distance-based mechanism")
        return run_distance_based(instance, report, reserve)
    return MECHANISMS[name](instance, report)


__all__ = [
    "SELLER",
    "Outcome",
    "ReserveConfig",
    "v_star",
    "priority_order",
    "prepare",
    "run_distance_based",
    "run_nd_vcg",
    "run_fcfs_f",
    "run_mechanism",
    "social_surplus",
    "revenue",
]
