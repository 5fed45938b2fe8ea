"""Exhaustive incentive checks over every tiny instance.

For ``n`` buyers the engine enumerates every seller follower set, every
follower set of every buyer and every value profile on a small integer
grid, and tabulates the outcome of a mechanism for all of them. Because
opponents' reports range over all graphs and values, checking truthful
opponents on every instance is the same as quantifying over all opponent
profiles.

Axes of the outcome tables, in order: seller followers (``2**n``), the
follower set of each buyer (``2**(n-1)`` each), the value of each buyer
(``levels`` each), and finally the buyer whose allocation or payment is
stored.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import batch
from .mechanisms import prepare
from .network import AuctionInstance, BuyerType
from .properties import PropertyReport, _deviation_witness, replay

MECHANISMS = ("distance", "ndvcg", "fcfs")


def decode_followers(i: int, n: int, code: int) -> frozenset:
    others = [j for j in range(n) if j != i]
    return frozenset(j for b, j in enumerate(others) if code >> b & 1)


def decode_set(n: int, code: int) -> frozenset:
    return frozenset(j for j in range(n) if code >> j & 1)


def graph_codes(n: int):
    """All graph encodings in C order of the table axes."""
    return itertools.product(range(1 << n), *[range(1 << (n - 1))] * n)


def build_instance(n: int, k: int, codes, values) -> AuctionInstance:
    seller, *fcodes = codes
    types = tuple(BuyerType(int(v), decode_followers(i, n, c)) for i, (v, c) in enumerate(zip(values, fcodes)))
    return AuctionInstance(k=k, seller_followers=decode_set(n, seller), types=types)


def structures(n: int) -> list:
    """Prepared graph structure for every graph encoding (values irrelevant)."""
    out = []
    for codes in graph_codes(n):
        inst = build_instance(n, 1, codes, [0] * n)
        out.append((inst.seller_followers, prepare(inst, inst.truthful())))
    return out


def outcome_tables(n: int, k: int, mechanism: str, levels: int, preps=None):
    """Allocation and payment for every graph and value profile.

    Returns ``(alloc, pay)`` with ``alloc`` boolean and ``pay`` int16.
    """
    if mechanism not in MECHANISMS:
        raise KeyError(mechanism)
    preps = structures(n) if preps is None else preps
    profiles = np.array(list(itertools.product(range(levels), repeat=n)), dtype=np.int64).reshape(-1, n)
    rows = profiles.shape[0]
    alloc = np.zeros((len(preps), rows, n), dtype=bool)
    pay = np.zeros((len(preps), rows, n), dtype=np.int16)
    for g, (direct, prep) in enumerate(preps):
        if mechanism == "distance":
            a, p = batch.distance_based(prep, profiles, k)
        elif mechanism == "ndvcg":
            a, p = batch.nd_vcg(direct, profiles, k)
        else:
            a, p = batch.fcfs_f(prep, rows, n, k)
        alloc[g] = a
        pay[g] = p
    shape = (1 << n, *[1 << (n - 1)] * n, *[levels] * n, n)
    return alloc.reshape(shape), pay.reshape(shape)


def _subset_max(arr: np.ndarray, bits: int) -> np.ndarray:
    """``out[..., r] = max over r' subset of r of arr[..., r']`` on the last axis."""
    out = arr.copy()
    for b in range(bits):
        step = 1 << b
        for r in range(1 << bits):
            if r & step:
                np.maximum(out[..., r], out[..., r ^ step], out=out[..., r])
    return out


@dataclass
class MicroResult:
    n: int
    k: int
    mechanism: str
    claim: str
    cases: int = 0
    violations: int = 0
    strict_hiding_losses: int = 0
    witness: dict | None = None
    hiding_example: dict | None = None

    def report(self) -> PropertyReport:
        info = {
            "n": self.n,
            "k": self.k,
            "cases": self.cases,
            "violations": self.violations,
            "strict_hiding_losses": self.strict_hiding_losses,
        }
        if self.hiding_example is not None:
            info["hiding_example"] = self.hiding_example
        return PropertyReport(f"{self.claim}[n={self.n},k={self.k}]", self.witness is None, self.witness, info)


def check_micro(n: int, k: int, mechanism: str, claim: str = "strategy-proofness", true_levels: int = 4, preps=None) -> MicroResult:
    """Check a dominance claim on every instance with ``n`` buyers.

    ``claim`` is ``"strategy-proofness"`` (truthful value with full forwarding
    is dominant) or ``"hiding-dominance"`` (true value with no forwarding is
    dominant). True values range over ``0..true_levels-1`` and bids over
    ``0..true_levels``, which covers every outcome class on that grid.
    """
    if claim not in ("strategy-proofness", "hiding-dominance"):
        raise ValueError(claim)
    levels = true_levels + 1
    alloc, pay = outcome_tables(n, k, mechanism, levels, preps)
    res = MicroResult(n, k, mechanism, claim)
    bits = n - 1
    for i in range(n):
        a = np.moveaxis(alloc[..., i], [1 + i, 1 + n + i], [-2, -1])
        p = np.moveaxis(pay[..., i], [1 + i, 1 + n + i], [-2, -1])
        opp = (slice(None),) * n + (slice(0, true_levels),) * (n - 1)
        a = a[opp].astype(np.int16)
        p = p[opp]
        for v in range(true_levels):
            util = v * a - p
            best = _subset_max(util.max(axis=-1), bits)
            sincere = util[..., v]
            hidden = np.broadcast_to(util[..., :1, v], sincere.shape)
            ref = sincere if claim == "strategy-proofness" else hidden
            bad = best > ref
            res.cases += ref.size
            res.violations += int(bad.sum())
            strict = sincere > hidden
            res.strict_hiding_losses += int(strict.sum())
            if res.witness is None and bad.any():
                idx = tuple(int(x) for x in np.argwhere(bad)[0])
                res.witness = _micro_witness(n, k, mechanism, claim, i, v, idx, util)
            if res.hiding_example is None and strict.any():
                idx = tuple(int(x) for x in np.argwhere(strict)[0])
                inst = _instance_at(n, k, i, v, idx)
                res.hiding_example = {"instance": inst, "buyer": i, "sincere": int(sincere[idx]), "hidden": int(hidden[idx])}
    return res


def _instance_at(n, k, i, v, idx):
    seller = idx[0]
    fcodes = list(idx[1:n])
    vals = list(idx[n : 2 * n - 1])
    r_true = idx[2 * n - 1]
    fcodes.insert(i, r_true)
    vals.insert(i, v)
    return build_instance(n, k, (seller, *fcodes), vals)


def _micro_witness(n, k, mechanism, claim, i, v, idx, util):
    inst = _instance_at(n, k, i, v, idx)
    r_true = idx[-1]
    ctx = idx[:-1]
    reference = "truthful" if claim == "strategy-proofness" else "hide"
    u_ref = int(util[ctx + ((r_true if reference == "truthful" else 0), v)])
    for r in range(1 << (n - 1)):
        if r & ~r_true:
            continue
        for bid in range(util.shape[-1]):
            u = int(util[ctx + (r, bid)])
            if u > u_ref:
                fwd = decode_followers(i, n, r)
                w = _deviation_witness(mechanism, inst, inst.truthful(), i, (bid, fwd), u_ref, u, None, reference)
                if replay(w) != (u_ref, u):
                    raise AssertionError("vectorised table disagrees with the reference mechanism")
                return w
    raise AssertionError("violation without a profitable deviation")
