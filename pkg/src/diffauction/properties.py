"""Executable checks for incentive, feasibility and revenue properties.

Every check returns a :class:`PropertyReport`. A failing report always
carries a witness that :func:`replay` turns back into the same violation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterable, Sequence

from .mechanisms import (
    Outcome,
    allocate_distance_based,
    allocate_fcfs_f,
    allocate_nd_vcg,
    prepare,
    run_mechanism,
)
from .network import AuctionInstance, ReportProfile


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class PropertyReport:
    name: str
    passed: bool
    witness: dict | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("a report fails exactly when it carries a witness")

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _pass(name, **info) -> PropertyReport:
    return PropertyReport(name, True, None, info)


def _fail(name, witness, **info) -> PropertyReport:
    return PropertyReport(name, False, witness, info)


def powerset(items: Iterable[int]) -> list:
    """All subsets as sorted tuples, ordered by size then lexicographically."""
    items = sorted(items)
    return list(chain.from_iterable(combinations(items, r) for r in range(len(items) + 1)))


# --- manipulation space -------------------------------------------------------


@dataclass(frozen=True)
class ManipulationSpace:
    buyer: int
    candidate_values: tuple
    candidate_forward_sets: tuple

    def __iter__(self):
        for fwd in self.candidate_forward_sets:
            for v in self.candidate_values:
                yield v, fwd

    def __len__(self):
        return len(self.candidate_values) * len(self.candidate_forward_sets)


def bid_grid(instance: AuctionInstance, report: ReportProfile, buyer: int) -> tuple:
    """Bids that reach every outcome class when money is integral.

    Outcomes only change when a bid crosses some other reported value, so
    {0, cap} together with every v_j and v_j +/- 1 is enough.
    """
    cap = instance.value_cap
    if cap is None:
        cap = max([*report.values, *instance.values, 0]) + 1
    grid = {0, cap}
    for v in chain(report.values, [instance.types[buyer].value]):
        grid.update((v - 1, v, v + 1))
    return tuple(sorted(x for x in grid if x >= 0))


def enumerate_manipulations(
    instance: AuctionInstance, buyer: int, report: ReportProfile | None = None, cap: int = 8
) -> ManipulationSpace:
    followers = instance.types[buyer].followers
    if len(followers) > cap:
        raise EnumerationTooLarge(
            f"buyer {buyer} has {len(followers)} followers; cap is {cap}"
        )
    report = instance.truthful() if report is None else report
    return ManipulationSpace(
        buyer,
        bid_grid(instance, report, buyer),
        tuple(frozenset(s) for s in powerset(followers)),
    )


# --- fast evaluation with structure reuse ---------------------------------------


class _Evaluator:
    """Evaluates one mechanism, caching graph structure per forwarding profile."""

    def __init__(self, mechanism: str, instance: AuctionInstance, reserve=None):
        if mechanism not in ("distance", "ndvcg", "fcfs"):
            raise KeyError(f"unknown mechanism {mechanism!r}")
        if reserve is not None and mechanism != "distance":
            raise ValueError("a reserve price is only defined for the distance-based mechanism")
        self.mechanism = mechanism
        self.instance = instance
        self.reserve = reserve

    def structure(self, report: ReportProfile):
        if self.mechanism == "ndvcg":
            report.validate(self.instance)
            return None
        return prepare(self.instance, report)

    def allocate(self, prep, values: Sequence):
        inst = self.instance
        if self.mechanism == "distance":
            return allocate_distance_based(prep, values, inst.k, self.reserve)
        if self.mechanism == "ndvcg":
            return allocate_nd_vcg(inst, values)
        return allocate_fcfs_f(prep, inst.n, inst.k)

    def utility(self, report: ReportProfile, i: int):
        alloc, pay = self.allocate(self.structure(report), report.values)
        return self.instance.types[i].value * alloc[i] - pay[i]


def _deviation_witness(mechanism, instance, report, buyer, deviation, u_ref, u_dev, reserve, reference):
    return {
        "mechanism": mechanism,
        "reserve": reserve,
        "instance": instance,
        "report": report,
        "buyer": buyer,
        "reference": reference,
        "deviation": {"value": deviation[0], "forwarded": tuple(sorted(deviation[1]))},
        "utility_reference": u_ref,
        "utility_deviation": u_dev,
    }


def _reference_report(instance, report, buyer, reference):
    true = instance.types[buyer]
    if reference == "truthful":
        return report.deviate(buyer, value=true.value, forwarded=true.followers)
    if reference == "hide":
        return report.deviate(buyer, value=true.value, forwarded=frozenset())
    raise ValueError(reference)


def replay(witness: dict) -> tuple:
    """Recompute ``(utility_reference, utility_deviation)`` for a deviation witness."""
    inst = witness["instance"]
    i = witness["buyer"]
    base = witness["report"]
    ref = _reference_report(inst, base, i, witness["reference"])
    dev = base.deviate(i, value=witness["deviation"]["value"], forwarded=witness["deviation"]["forwarded"])
    v = inst.types[i].value
    reserve = witness.get("reserve")
    u_ref = run_mechanism(witness["mechanism"], inst, ref, reserve).utility(i, v)
    u_dev = run_mechanism(witness["mechanism"], inst, dev, reserve).utility(i, v)
    return u_ref, u_dev


def _best_response_scan(name, instance, mechanism, reference, report=None, reserve=None, cap=8, buyers=None):
    """Compare each buyer's reference strategy against every manipulation.

    Buyers are scanned in ascending id and manipulations in (forward set,
    bid) order; the first strictly profitable deviation is the witness.
    """
    report = instance.truthful() if report is None else report
    report.validate(instance)
    ev = _Evaluator(mechanism, instance, reserve)
    checked = 0
    for i in range(instance.n) if buyers is None else buyers:
        space = enumerate_manipulations(instance, i, report, cap)
        v_true = instance.types[i].value
        ref = _reference_report(instance, report, i, reference)
        u_ref = ev.utility(ref, i)
        for fwd in space.candidate_forward_sets:
            prep = ev.structure(report.deviate(i, forwarded=fwd))
            values = list(report.values)
            for bid in space.candidate_values:
                values[i] = bid
                alloc, pay = ev.allocate(prep, values)
                checked += 1
                u = v_true * alloc[i] - pay[i]
                if u > u_ref:
                    w = _deviation_witness(mechanism, instance, report, i, (bid, fwd), u_ref, u, reserve, reference)
                    return _fail(name, w, checked=checked)
    return _pass(name, checked=checked)


def check_strategy_proofness(instance, mechanism="distance", report=None, reserve=None, cap=8, buyers=None):
    """Truthful value with full forwarding must beat every manipulation.

    Opponents are held at ``report`` (default: truthful).
    """
    return _best_response_scan("strategy-proofness", instance, mechanism, "truthful", report, reserve, cap, buyers)


def check_hiding_dominance(instance, mechanism="distance", report=None, enumerate_opponents=False, cap=8, reserve=None):
    """Is reporting (true value, no forwarding) a dominant strategy?

    With ``enumerate_opponents`` every combination of opponents' forwarding
    subsets is tried as well (values stay at ``report``).
    """
    name = "hiding-dominance"
    base = instance.truthful() if report is None else report
    profiles = [base]
    if enumerate_opponents:
        choices = [powerset(f) for f in base.forwarded]
        total = 1
        for c in choices:
            total *= len(c)
        if total > 1 << 16:
            raise EnumerationTooLarge(f"{total} opponent forwarding profiles")
        profiles = _forwarding_profiles(base, choices)
    checked = 0
    for prof in profiles:
        rep = _best_response_scan(name, instance, mechanism, "hide", prof, reserve, cap)
        checked += rep.info["checked"]
        if not rep.passed:
            return _fail(name, rep.witness, checked=checked)
    return _pass(name, checked=checked)


def _forwarding_profiles(base, choices):
    from itertools import product

    for combo in product(*choices):
        yield ReportProfile(base.values, tuple(frozenset(c) for c in combo))


def hiding_gap(instance, mechanism, buyer, report=None, reserve=None):
    """Utility of sincere forwarding minus utility of hiding, both with true value."""
    report = instance.truthful() if report is None else report
    ev = _Evaluator(mechanism, instance, reserve)
    sincere = ev.utility(_reference_report(instance, report, buyer, "truthful"), buyer)
    hidden = ev.utility(_reference_report(instance, report, buyer, "hide"), buyer)
    return sincere - hidden


def find_strict_hiding_loss(instances: Iterable[AuctionInstance], mechanism="distance"):
    """First (instance, buyer) where hiding is strictly worse than forwarding."""
    for inst in instances:
        for i in range(inst.n):
            if inst.types[i].followers and hiding_gap(inst, mechanism, i) > 0:
                return inst, i
    return None


# --- comparisons between mechanisms ----------------------------------------------


def _metric(outcome: Outcome, metric: str):
    if metric == "surplus":
        return outcome.surplus
    if metric == "revenue":
        return outcome.revenue
    raise ValueError(f"unknown metric {metric!r}")


def check_domination(instances, mech_a="distance", mech_b="ndvcg", metric="surplus"):
    """``metric(A) >= metric(B)`` on every instance (truthful reports)."""
    name = f"{metric}-domination"
    strict = None
    count = 0
    for inst in instances:
        rep = inst.truthful()
        a = _metric(run_mechanism(mech_a, inst, rep), metric)
        b = _metric(run_mechanism(mech_b, inst, rep), metric)
        count += 1
        if a < b:
            witness = {"instance": inst, "mechanisms": (mech_a, mech_b), "metric": metric, "values": (a, b)}
            return _fail(name, witness, checked=count)
        if strict is None and a > b:
            strict = {"instance": inst, "values": (a, b)}
    return _pass(name, checked=count, strict=strict)


def check_follower_revenue_monotonicity(instance, mechanism="distance", cap=16):
    name = "follower-revenue-monotonicity"
    direct = instance.seller_followers
    if len(direct) > cap:
        raise EnumerationTooLarge(f"{len(direct)} direct buyers; cap is {cap}")
    full = run_mechanism(mechanism, instance, instance.truthful()).revenue
    best = None
    for subset in powerset(direct):
        sub = instance.with_seller_followers(subset)
        r = run_mechanism(mechanism, sub, sub.truthful()).revenue
        if r > full and (best is None or r > best[1]):
            best = (subset, r)
    if best is None:
        return _pass(name, revenue_full=full)
    witness = {"instance": instance, "subset": best[0], "revenue_full": full, "revenue_subset": best[1]}
    return _fail(name, witness)


# --- predicates on a single outcome ----------------------------------------------


def _context(instance, report):
    report = instance.truthful() if report is None else report
    return report, prepare(instance, report)


def check_feasibility(instance, outcome, report=None):
    report, prep = _context(instance, report)
    winners = outcome.winners
    bad = [i for i in winners if i not in prep.view.connected]
    if len(winners) > instance.k or bad:
        return _fail("feasibility", {"instance": instance, "winners": winners, "unconnected_winners": bad})
    return _pass("feasibility")


def check_individual_rationality(instance, outcome, report=None):
    """Every buyer whose report is truthful has non-negative utility."""
    report = instance.truthful() if report is None else report
    for i, t in enumerate(instance.types):
        truthful = report.values[i] == t.value and report.forwarded[i] == t.followers
        if truthful and outcome.utility(i, t.value) < 0:
            return _fail("individual-rationality", {"instance": instance, "buyer": i, "utility": outcome.utility(i, t.value)})
    return _pass("individual-rationality")


def check_non_deficit(instance, outcome, report=None):
    negative = [i for i, p in enumerate(outcome.payment) if p < 0]
    if outcome.revenue < 0 or negative:
        return _fail("non-deficit", {"instance": instance, "revenue": outcome.revenue, "negative_payments": negative})
    return _pass("non-deficit")


def check_non_wastefulness(instance, outcome, report=None):
    report, prep = _context(instance, report)
    need = min(instance.k, len(prep.view.connected))
    got = len(outcome.winners)
    if got < need:
        return _fail("non-wastefulness", {"instance": instance, "winners": got, "required": need})
    return _pass("non-wastefulness", winners=got)


def check_bounded_efficiency(instance, outcome, report=None):
    """Each winner has fewer than k strictly higher bids among its eligible competitors."""
    report, prep = _context(instance, report)
    vals = report.values
    for i in outcome.winners:
        above = sum(1 for j in prep.eligible.get(i, ()) if vals[j] > vals[i])
        if above >= instance.k:
            return _fail("bounded-efficiency", {"instance": instance, "buyer": i, "higher": above})
    return _pass("bounded-efficiency")


OUTCOME_CHECKS = {
    "feasibility": check_feasibility,
    "individual-rationality": check_individual_rationality,
    "non-deficit": check_non_deficit,
    "non-wastefulness": check_non_wastefulness,
    "bounded-efficiency": check_bounded_efficiency,
}

# Properties the mechanisms are claimed to satisfy, used by ``check --property all``.
CLAIMED = {
    "distance": [
        "feasibility",
        "individual-rationality",
        "non-deficit",
        "non-wastefulness",
        "bounded-efficiency",
        "strategy-proofness",
        "surplus-domination",
        "revenue-domination",
    ],
    "ndvcg": ["feasibility", "individual-rationality", "non-deficit", "strategy-proofness", "hiding-dominance"],
    "fcfs": [
        "feasibility",
        "individual-rationality",
        "non-deficit",
        "non-wastefulness",
        "strategy-proofness",
        "hiding-dominance",
    ],
}

ALL_PROPERTIES = sorted(
    set(OUTCOME_CHECKS)
    | {"strategy-proofness", "hiding-dominance", "surplus-domination", "revenue-domination", "follower-revenue-monotonicity"}
)


def run_property(name, instances, mechanism="distance", reserve=None) -> PropertyReport:
    """Evaluate one named property over a list of instances; first failure wins."""
    instances = list(instances)
    if name in ("surplus-domination", "revenue-domination"):
        metric = name.split("-")[0]
        reports = [check_domination(instances, mechanism, other, metric) for other in ("ndvcg", "fcfs") if other != mechanism]
        for rep in reports:
            if not rep.passed:
                return rep
        return _pass(name, checked=len(instances), strict=[r.info.get("strict") is not None for r in reports])
    checked = 0
    for inst in instances:
        if name in OUTCOME_CHECKS:
            out = run_mechanism(mechanism, inst, inst.truthful(), reserve)
            rep = OUTCOME_CHECKS[name](inst, out)
        elif name == "strategy-proofness":
            rep = check_strategy_proofness(inst, mechanism, reserve=reserve)
        elif name == "hiding-dominance":
            rep = check_hiding_dominance(inst, mechanism, reserve=reserve)
        elif name == "follower-revenue-monotonicity":
            rep = check_follower_revenue_monotonicity(inst, mechanism)
        else:
            raise KeyError(f"unknown property {name!r}")
        checked += 1
        if not rep.passed:
            return PropertyReport(name, False, rep.witness, {"checked": checked, **rep.info})
    return _pass(name, checked=checked)
