"""Buyer network: reachability, critical parents and the diffusion critical tree.

Buyers are dense integer ids ``0..n-1``. The seller is the sentinel
:data:`SELLER` and never appears as a buyer. All money is exact (``int`` or
:class:`fractions.Fraction`); ``math.inf`` is used only for prices and
distances.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Union

Money = Union[int, Fraction]

SELLER = -1
INF = math.inf


class InstanceError(ValueError):
    """Structurally invalid instance or report (dangling id, self-loop, ...)."""


class NotConnectedError(ValueError):
    """Raised when a per-buyer graph query is made for an unconnected buyer."""


def _check_money(x, what: str) -> Money:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise InstanceError(f"{what}: money must be an int or Fraction, got {x!r}")
    if x < 0:
        raise InstanceError(f"{what}: negative value {x}")
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


@dataclass(frozen=True)
class BuyerType:
    value: Money
    followers: frozenset = frozenset()


@dataclass(frozen=True)
class AuctionInstance:
    """Ground truth of an auction: units, direct buyers and true types.

    ``reserve`` and ``labels`` are carried for the file format; mechanisms take
    the reserve as an explicit argument.
    """

    k: int
    seller_followers: frozenset
    types: tuple
    value_cap: Money | None = None
    reserve: Money | None = None
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "seller_followers", frozenset(self.seller_followers))
        object.__setattr__(self, "types", tuple(self.types))
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise InstanceError(f"k must be a positive integer, got {self.k!r}")
        n = len(self.types)
        for j in self.seller_followers:
            if not (isinstance(j, int) and 0 <= j < n):
                raise InstanceError(f"seller_followers: dangling buyer id {j!r}")
        fixed = []
        for i, t in enumerate(self.types):
            value = _check_money(t.value, f"buyer {i} value")
            followers = frozenset(t.followers)
            for j in followers:
                if not (isinstance(j, int) and 0 <= j < n):
                    raise InstanceError(f"buyer {i} followers: dangling buyer id {j!r}")
                if j == i:
                    raise InstanceError(f"buyer {i} follows itself")
            fixed.append(BuyerType(value, followers))
        object.__setattr__(self, "types", tuple(fixed))
        if self.value_cap is not None:
            cap = _check_money(self.value_cap, "value_cap")
            object.__setattr__(self, "value_cap", cap)
            for i, t in enumerate(self.types):
                if t.value > cap:
                    raise InstanceError(f"buyer {i} value {t.value} exceeds value_cap {cap}")
        if self.reserve is not None:
            object.__setattr__(self, "reserve", _check_money(self.reserve, "reserve"))
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != n:
                raise InstanceError("labels must name every buyer")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.types)

    @property
    def values(self) -> tuple:
        return tuple(t.value for t in self.types)

    def label(self, i: int) -> str:
        if i == SELLER:
            return "s"
        return self.labels[i] if self.labels is not None else str(i)

    def truthful(self) -> "ReportProfile":
        return ReportProfile(
            tuple(t.value for t in self.types), tuple(t.followers for t in self.types)
        )

    def with_seller_followers(self, subset: Iterable[int]) -> "AuctionInstance":
        return replace(self, seller_followers=frozenset(subset))


@dataclass(frozen=True)
class ReportProfile:
    """Declared types: one reported value and forwarded set per buyer."""

    values: tuple
    forwarded: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "forwarded", tuple(frozenset(f) for f in self.forwarded))
        if len(self.values) != len(self.forwarded):
            raise InstanceError("values and forwarded sets disagree on buyer count")

    def deviate(self, i: int, value=None, forwarded=None) -> "ReportProfile":
        """Copy with buyer ``i``'s report replaced (``None`` keeps the field)."""
        values = list(self.values)
        fwd = list(self.forwarded)
        if value is not None:
            values[i] = value
        if forwarded is not None:
            fwd[i] = frozenset(forwarded)
        return ReportProfile(tuple(values), tuple(fwd))

    def validate(self, instance: AuctionInstance) -> None:
        if len(self.values) != instance.n:
            raise InstanceError(
                f"report covers {len(self.values)} buyers, instance has {instance.n}"
            )
        for i, (v, f) in enumerate(zip(self.values, self.forwarded)):
            _check_money(v, f"buyer {i} reported value")
            extra = f - instance.types[i].followers
            if extra:
                raise InstanceError(
                    f"buyer {i} forwards to non-followers {sorted(extra)}"
                )


@dataclass(frozen=True)
class ReachabilityView:
    connected: frozenset
    distance: tuple  # per buyer; INF when unconnected


@dataclass(frozen=True)
class DiffusionCriticalTree:
    parent: Mapping[int, int]
    children: Mapping[int, tuple] = field(default_factory=dict)

    def descendants(self, i: int) -> frozenset:
        """Proper descendants of ``i`` (``i`` itself excluded)."""
        out = set()
        stack = list(self.children.get(i, ()))
        while stack:
            j = stack.pop()
            out.add(j)
            stack.extend(self.children.get(j, ()))
        return frozenset(out)

    def edges(self) -> set:
        return {(p, c) for c, p in self.parent.items()}


def reported_edges(instance: AuctionInstance, report: ReportProfile) -> dict:
    """Adjacency of the reported network, keyed by buyer id and :data:`SELLER`."""
    edges = {SELLER: instance.seller_followers}
    for i, f in enumerate(report.forwarded):
        edges[i] = f
    return edges


def _bfs(n: int, edges: Mapping[int, frozenset], removed: int | None = None) -> list:
    dist = [INF] * n
    queue = deque()
    for j in edges[SELLER]:
        if j != removed and dist[j] == INF:
            dist[j] = 1
            queue.append(j)
    while queue:
        u = queue.popleft()
        for w in edges[u]:
            if w != removed and dist[w] == INF:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def connected_and_distances(instance: AuctionInstance, report: ReportProfile) -> ReachabilityView:
    report.validate(instance)
    dist = _bfs(instance.n, reported_edges(instance, report))
    connected = frozenset(i for i, d in enumerate(dist) if d != INF)
    return ReachabilityView(connected, tuple(dist))


def _require_connected(view: ReachabilityView, i: int) -> None:
    if i not in view.connected:
        raise NotConnectedError(f"buyer {i} is not connected")


def critical_parents_bruteforce(view: ReachabilityView, edges: Mapping, i: int) -> frozenset:
    """Critical parents by deleting each buyer in turn and re-running BFS."""
    _require_connected(view, i)
    n = len(view.distance)
    out = set()
    for j in view.connected:
        if j != i and _bfs(n, edges, removed=j)[i] == INF:
            out.add(j)
    return frozenset(out)


def dominator_masks(view: ReachabilityView, edges: Mapping) -> dict:
    """Iterative dominator-set dataflow over the reachable subgraph.

    Returns ``{buyer: bitmask}`` where bit ``j`` marks buyer ``j`` as a
    dominator (the buyer's own bit is set; the seller, which dominates
    everything, is left out).
    """
    nodes = sorted(view.connected, key=lambda j: (view.distance[j], j))
    preds = {j: [] for j in nodes}
    for u in [SELLER, *nodes]:
        for w in edges[u]:
            if w in preds:
                preds[w].append(u)
    full = 0
    for j in nodes:
        full |= 1 << j
    dom = {j: full for j in nodes}
    changed = True
    while changed:
        changed = False
        for j in nodes:
            acc = full
            for p in preds[j]:
                if p == SELLER:
                    acc = 0
                    break
                acc &= dom[p]
            new = acc | (1 << j)
            if new != dom[j]:
                dom[j] = new
                changed = True
    return dom


def _mask_members(mask: int) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def critical_parents(view: ReachabilityView, edges: Mapping, i: int) -> frozenset:
    _require_connected(view, i)
    return _mask_members(dominator_masks(view, edges)[i] & ~(1 << i))


def _deepest(view: ReachabilityView, parents: Iterable[int]) -> int:
    best = SELLER
    for j in parents:
        if best == SELLER or view.distance[j] > view.distance[best]:
            best = j
    return best


def least_critical_parent(view: ReachabilityView, edges: Mapping, i: int) -> int:
    """Immediate dominator of ``i``; :data:`SELLER` when it has no critical parent."""
    return _deepest(view, critical_parents(view, edges, i))


def critical_tree_from(view: ReachabilityView, edges: Mapping) -> DiffusionCriticalTree:
    dom = dominator_masks(view, edges)
    parent = {}
    children: dict = {}
    for i in sorted(view.connected):
        p = _deepest(view, _mask_members(dom[i] & ~(1 << i)))
        parent[i] = p
        children.setdefault(p, []).append(i)
    return DiffusionCriticalTree(parent, {p: tuple(c) for p, c in children.items()})


def build_critical_tree(instance: AuctionInstance, report: ReportProfile) -> DiffusionCriticalTree:
    view = connected_and_distances(instance, report)
    return critical_tree_from(view, reported_edges(instance, report))


def eligible_others(tree: DiffusionCriticalTree, connected: Iterable[int], i: int) -> frozenset:
    """Connected buyers other than ``i`` and its descendants in the tree."""
    connected = frozenset(connected)
    if i not in connected:
        raise NotConnectedError(f"buyer {i} is not connected")
    return connected - {i} - tree.descendants(i)
