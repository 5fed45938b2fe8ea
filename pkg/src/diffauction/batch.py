"""Vectorised mechanism runs over many value profiles on one fixed graph.

Integer money only. Rows of ``values`` are independent bid profiles; graph
structure comes from :func:`diffauction.mechanisms.prepare`.
"""
from __future__ import annotations

import numpy as np

from .mechanisms import Prepared

# Stands in for an infinite price; must exceed every bid.
BIG = np.int64(1) << 60


def _eligible_matrix(prep: Prepared, n: int) -> np.ndarray:
    mat = np.zeros((n, n), dtype=bool)
    for i, others in prep.eligible.items():
        mat[i, list(others)] = True
    return mat


def distance_based(prep: Prepared, values: np.ndarray, k: int, reserve: int | None = None):
    values = np.asarray(values, dtype=np.int64)
    rows, n = values.shape
    alloc = np.zeros((rows, n), dtype=bool)
    pay = np.zeros((rows, n), dtype=np.int64)
    if not prep.order:
        return alloc, pay
    elig = _eligible_matrix(prep, n)
    remaining = np.full(rows, k, dtype=np.int64)
    ar = np.arange(rows)
    dummy = 0 if reserve is None else k
    for i in prep.order:
        pool = elig[i][None, :] & ~alloc
        masked = np.where(pool, values, -1)
        if dummy:
            masked = np.concatenate([masked, np.full((rows, dummy), reserve, dtype=np.int64)], axis=1)
        ranked = -np.sort(-masked, axis=1)
        size = pool.sum(axis=1) + dummy
        kth = ranked[ar, np.clip(remaining - 1, 0, ranked.shape[1] - 1)]
        price = np.where(remaining <= 0, BIG, np.where(size < remaining, 0, kth))
        win = values[:, i] >= price
        alloc[:, i] = win
        pay[:, i] = np.where(win, price, 0)
        remaining -= win
    return alloc, pay


def nd_vcg(direct, values: np.ndarray, k: int):
    values = np.asarray(values, dtype=np.int64)
    rows, n = values.shape
    alloc = np.zeros((rows, n), dtype=bool)
    pay = np.zeros((rows, n), dtype=np.int64)
    direct = sorted(direct)
    if not direct:
        return alloc, pay
    sub = values[:, direct]
    m = len(direct)
    for a, i in enumerate(direct):
        vi = sub[:, a : a + 1]
        before = np.arange(m) < a
        ahead = (sub > vi) | ((sub == vi) & before[None, :])
        win = ahead.sum(axis=1) < k
        if m - 1 >= k:
            others = np.delete(sub, a, axis=1)
            price = -np.sort(-others, axis=1)[:, k - 1]
        else:
            price = np.zeros(rows, dtype=np.int64)
        alloc[:, i] = win
        pay[:, i] = np.where(win, price, 0)
    return alloc, pay


def fcfs_f(prep: Prepared, rows: int, n: int, k: int):
    alloc = np.zeros((rows, n), dtype=bool)
    alloc[:, list(prep.order[:k])] = True
    return alloc, np.zeros((rows, n), dtype=np.int64)
