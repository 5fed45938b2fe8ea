"""Efficiency loss of the distance-based mechanism and worst-case estimates."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .mechanisms import run_distance_based
from .network import AuctionInstance, BuyerType, ReportProfile, connected_and_distances


@dataclass(frozen=True)
class EfficiencyRecord:
    optimal_surplus: object
    achieved_surplus: object
    loss: object
    normalized_loss: Fraction


def optimal_surplus(instance: AuctionInstance, report: ReportProfile, k: int | None = None):
    """Best reported surplus: the top ``min(k, |connected|)`` reported values."""
    k = instance.k if k is None else k
    view = connected_and_distances(instance, report)
    top = sorted((report.values[i] for i in view.connected), reverse=True)
    return sum(top[:k])


def efficiency_record(instance: AuctionInstance, report: ReportProfile | None = None, reserve=None) -> EfficiencyRecord:
    """Loss measured on reported values, normalised by ``k * value_cap``."""
    if instance.value_cap is None:
        raise ValueError("efficiency needs a value cap on the instance")
    report = instance.truthful() if report is None else report
    out = run_distance_based(instance, report, reserve)
    best = optimal_surplus(instance, report)
    got = sum(report.values[i] for i in out.winners)
    loss = best - got
    scale = instance.k * instance.value_cap
    norm = Fraction(loss) / scale if scale else Fraction(0)
    return EfficiencyRecord(best, got, loss, norm)


def worst_case_bound(k: int, value_cap, reserve):
    """``max(k * v_h, k * (cap - v_h))``, the largest loss a reserve can cause."""
    return max(k * reserve, k * (value_cap - reserve))


def path_family(k: int, value_cap, front_value) -> AuctionInstance:
    """Path s -> 1 -> ... -> 2k; the first k buyers hold ``front_value``, the rest ``value_cap``."""
    types = [BuyerType(front_value if j < k else value_cap, frozenset({j + 1}) if j + 1 < 2 * k else frozenset()) for j in range(2 * k)]
    return AuctionInstance(k=k, seller_followers=frozenset({0}), types=tuple(types), value_cap=value_cap)


def below_reserve_family(k: int, value_cap, reserve) -> AuctionInstance | None:
    """k direct buyers each one unit below the reserve (None if the reserve is 0)."""
    if reserve < 1:
        return None
    v = reserve - 1
    types = tuple(BuyerType(v) for _ in range(k))
    return AuctionInstance(k=k, seller_followers=frozenset(range(k)), types=types, value_cap=value_cap)


def adversarial_instances(k: int, value_cap, reserve) -> list:
    out = [path_family(k, value_cap, reserve)]
    below = below_reserve_family(k, value_cap, reserve)
    if below is not None:
        out.append(below)
    return out


@dataclass(frozen=True)
class AlphaEstimate:
    value: Fraction
    witness: AuctionInstance | None
    random_max: Fraction
    adversarial_max: Fraction
    profiles: int


def alpha_estimate(k: int, value_cap, reserve, instances: Iterable[AuctionInstance] = ()) -> AlphaEstimate:
    """Largest normalised loss over ``instances`` plus the adversarial families.

    This is a lower bound on the true worst case, tight for the families
    included.
    """
    best = Fraction(-1)
    witness = None
    rand_max = Fraction(0)
    adv_max = Fraction(0)
    count = 0
    for inst in instances:
        rec = efficiency_record(inst, reserve=reserve)
        count += 1
        rand_max = max(rand_max, rec.normalized_loss)
        if rec.normalized_loss > best:
            best, witness = rec.normalized_loss, inst
    for inst in adversarial_instances(k, value_cap, reserve):
        rec = efficiency_record(inst, reserve=reserve)
        count += 1
        adv_max = max(adv_max, rec.normalized_loss)
        if rec.normalized_loss > best:
            best, witness = rec.normalized_loss, inst
    return AlphaEstimate(max(best, Fraction(0)), witness, rand_max, adv_max, count)


CSV_COLUMNS = ("seed", "n", "k", "v_h", "optimal", "achieved", "loss", "normalized_loss")


def write_csv(rows: Iterable[tuple], stream) -> None:
    """Rows are ``(seed, instance, reserve)``; one CSV line per row."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for seed, inst, reserve in rows:
        rec = efficiency_record(inst, reserve=reserve)
        w.writerow([seed, inst.n, inst.k, reserve if reserve is not None else 0, rec.optimal_surplus, rec.achieved_surplus, rec.loss, str(rec.normalized_loss)])
