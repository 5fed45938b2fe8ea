"""Seeded random instances. Same parameters and seed give the same instance."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .network import AuctionInstance, BuyerType


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    k: int
    max_value: int = 100
    max_followers: int | None = None
    edge_probability: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.n < 0 or self.k < 1 or self.max_value < 0:
            raise ValueError(f"invalid generator parameters: {self}")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValueError("edge_probability must lie in [0, 1]")


def gen_random_instance(params: GeneratorParams) -> AuctionInstance:
    rng = random.Random(params.seed)
    n = params.n
    values = [rng.randint(0, params.max_value) for _ in range(n)]
    followers = []
    for i in range(n):
        out = [j for j in range(n) if j != i and rng.random() < params.edge_probability]
        if params.max_followers is not None and len(out) > params.max_followers:
            out = rng.sample(out, params.max_followers)
        followers.append(frozenset(out))
    direct: list = []
    while n and not direct:
        direct = [j for j in range(n) if rng.random() < 0.5]
    return AuctionInstance(
        k=params.k,
        seller_followers=frozenset(direct),
        types=tuple(BuyerType(v, f) for v, f in zip(values, followers)),
        value_cap=params.max_value,
    )


def corpus_params(seed: int, n_max: int = 8, k_max: int = 4, max_value: int = 100, max_followers: int | None = None) -> GeneratorParams:
    """Per-seed shape: ``n`` in 1..n_max, ``k`` in 1..k_max, density in [0.1, 0.5]."""
    rng = random.Random(f"corpus-{seed}")
    return GeneratorParams(
        n=rng.randint(1, n_max),
        k=rng.randint(1, k_max),
        max_value=max_value,
        max_followers=max_followers,
        edge_probability=round(rng.uniform(0.1, 0.5), 3),
        seed=seed,
    )


def random_corpus(count: int, start: int = 0, **kwargs):
    """Yield ``(seed, instance)`` for seeds ``start .. start+count-1``."""
    for seed in range(start, start + count):
        yield seed, gen_random_instance(corpus_params(seed, **kwargs))
