"""Seller's choice of which direct buyers to inform.

Includes an exhaustive solver for the revenue-maximising subset and the
gadget construction that maps Partition onto the decision version.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .mechanisms import run_distance_based
from .network import AuctionInstance, BuyerType
from .properties import EnumerationTooLarge, PropertyReport, powerset


@dataclass(frozen=True)
class DiffusionSolution:
    best_subset: tuple
    best_revenue: object
    table: dict = field(default_factory=dict)


def subset_revenue(instance: AuctionInstance, subset) -> object:
    sub = instance.with_seller_followers(subset)
    return run_distance_based(sub, sub.truthful()).revenue


def optimal_diffusion_exact(instance: AuctionInstance, cap: int = 20, keep_table: bool = True) -> DiffusionSolution:
    """Try every subset of direct buyers.

    Subsets are visited by size, then lexicographically; among equal
    revenues the lexicographically smallest subset wins.
    """
    if len(instance.seller_followers) > cap:
        raise EnumerationTooLarge(f"{len(instance.seller_followers)} direct buyers; cap is {cap}")
    best = None
    table = {}
    for subset in powerset(instance.seller_followers):
        r = subset_revenue(instance, subset)
        if keep_table:
            table[subset] = r
        if best is None or r > best[1] or (r == best[1] and subset < best[0]):
            best = (subset, r)
    return DiffusionSolution(best[0], best[1], table)


def optimal_diffusion_decision(instance: AuctionInstance, threshold, cap: int = 20):
    """``(True, subset)`` if some subset earns at least ``threshold``, else ``(False, None)``."""
    sol = optimal_diffusion_exact(instance, cap, keep_table=False)
    if sol.best_revenue >= threshold:
        return True, sol.best_subset
    return False, None


@dataclass(frozen=True)
class PartitionInstance:
    items: tuple

    def __post_init__(self):
        items = tuple(int(x) for x in self.items)
        if any(x < 1 for x in items):
            raise ValueError("partition items must be positive integers")
        object.__setattr__(self, "items", items)

    @property
    def total(self) -> int:
        return sum(self.items)

    @property
    def half(self) -> Fraction:
        return Fraction(self.total, 2)


def partition_oracle(p: PartitionInstance, cap: int = 1 << 20) -> bool:
    """Subset-sum over a bitset of reachable sums."""
    if p.total > cap:
        raise EnumerationTooLarge(f"total {p.total} exceeds cap {cap}")
    if p.total % 2:
        return False
    reach = 1
    for x in p.items:
        reach |= reach << x
    return bool(reach >> (p.total // 2) & 1)


@dataclass(frozen=True)
class ReductionParams:
    epsilon: int
    v1: int
    v2: int
    v3: int
    v4: int
    v5: int

    @classmethod
    def for_half(cls, m: int) -> "ReductionParams":
        v3 = 4
        v4 = (m + 2) * v3 + m * 3 + 2
        return cls(epsilon=1, v1=3, v2=2, v3=v3, v4=v4, v5=v4 + 1)

    def threshold(self, m: int):
        return self.epsilon + m * self.v1 + self.v4

    def validate(self, m: int) -> None:
        if not (0 < self.epsilon < self.v2 < self.v1 < self.v3 < self.v4 < self.v5):
            raise ValueError("need 0 < epsilon < v2 < v1 < v3 < v4 < v5")
        # any revenue without a v4 payment must stay below the threshold
        if (m + 2) * self.v3 >= self.threshold(m):
            raise ValueError("v4 too small relative to (m+2) * v3")


def reduce_partition(p: PartitionInstance, params: ReductionParams | None = None):
    """Build the diffusion instance and threshold for a Partition instance.

    An odd total has no partition; its items are doubled first so the half
    is integral and the answer stays "no". Buyer ids put the a-gadgets first,
    then the b-chain, then the c-chain, so b-nodes precede c-nodes at equal
    distance.
    """
    items = p.items if p.total % 2 == 0 else tuple(2 * x for x in p.items)
    m = sum(items) // 2
    params = ReductionParams.for_half(m) if params is None else params
    params.validate(m)

    labels = []
    values = []
    followers = []

    def add(label, value):
        labels.append(label)
        values.append(value)
        followers.append(set())
        return len(labels) - 1

    roots = [add(f"a{t}_0", params.epsilon) for t in range(len(items))]
    for t, x in enumerate(items):
        for j in range(1, x + 1):
            followers[roots[t]].add(add(f"a{t}_{j}", params.v1))
    b = [add("b1", params.v2)]
    b += [add(f"b{j}", params.v3) for j in range(2, m + 2)]
    b.append(add(f"b{m + 2}", params.v4))
    c = [add(f"c{j}", params.epsilon) for j in range(1, m + 1)]
    c.append(add(f"c{m + 1}", params.v5))
    for chain in (b, c):
        for u, w in zip(chain, chain[1:]):
            followers[u].add(w)

    inst = AuctionInstance(
        k=m + 2,
        seller_followers=frozenset(roots + [b[0], c[0]]),
        types=tuple(BuyerType(v, frozenset(f)) for v, f in zip(values, followers)),
        labels=tuple(labels),
    )
    return inst, params.threshold(m)


def verify_reduction(p: PartitionInstance, params: ReductionParams | None = None) -> PropertyReport:
    """Partition answer must equal the decision answer on the reduced instance.

    On "yes" instances the best revenue must also equal the threshold exactly.
    """
    inst, threshold = reduce_partition(p, params)
    expected = partition_oracle(p)
    sol = optimal_diffusion_exact(inst, keep_table=False)
    got = sol.best_revenue >= threshold
    info = {"items": p.items, "threshold": threshold, "best_revenue": sol.best_revenue, "best_subset": sol.best_subset}
    if got != expected or (expected and sol.best_revenue != threshold):
        return PropertyReport("partition-reduction", False, {"partition": expected, "decision": got, **info}, {})
    return PropertyReport("partition-reduction", True, None, {"partition": expected, **info})
