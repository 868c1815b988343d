"""Seeded random families of rotation numbers and windows."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .numkernel import CFExpansion
from .orbit import AlphaHandle


def random_cf(
    rng: random.Random,
    max_entry: int = 5,
    max_prefix: int = 3,
    max_period: int = 4,
) -> CFExpansion:
    """Eventually periodic expansion with entries at most ``max_entry``."""
    L = rng.randint(0, max_prefix)
    prefix = [rng.randint(0, max_entry)] + [rng.randint(1, max_entry) for _ in range(L - 1)] if L else []
    period = [rng.randint(1, max_entry) for _ in range(rng.randint(1, max_period))]
    return CFExpansion(tuple(prefix), tuple(period))


def random_c(rng: random.Random, max_k: int = 7, k: int | None = None) -> Fraction:
    k = k if k is not None else rng.randint(2, max_k)
    h = rng.choice([h for h in range(1, k) if math.gcd(h, k) == 1])
    return Fraction(h, k)


def sample_pairs(seed: int, count: int, max_entry: int = 5, max_k: int = 7) -> list[tuple[AlphaHandle, Fraction]]:
    rng = random.Random(seed)
    return [(AlphaHandle(random_cf(rng, max_entry)), random_c(rng, max_k)) for _ in range(count)]


def divisible_tail_cf(rng: random.Random, k: int, max_entry: int = 5) -> CFExpansion:
    """Expansion whose period puts multiples of ``k`` on one parity class.

    Such expansions hit the one-sided cases often, unlike uniform samples.
    """
    L = rng.randint(0, 4)
    prefix = [rng.randint(0, max_entry)] + [rng.randint(1, max_entry) for _ in range(L - 1)] if L else []
    T = rng.choice([1, 2, 2, 4])
    period = [rng.randint(1, max_entry) for _ in range(T)]
    for i in range(rng.randint(0, 1), T, 2):
        if rng.random() < 0.85:
            period[i] = k * rng.randint(1, 2)
    return CFExpansion(tuple(prefix), tuple(period))


def route_family(seed: int, count: int, ks=(2, 3, 4, 5)) -> list[tuple[CFExpansion, int]]:
    """Mixed family of expansions and moduli for cross-checking the two boundedness routes."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        k = ks[i % len(ks)]
        cf = divisible_tail_cf(rng, k) if i % 2 else random_cf(rng, max_entry=2 * k)
        out.append((cf, k))
    return out
