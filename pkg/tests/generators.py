"""Randomized small instances shared by the oracle-equivalence suites."""
from __future__ import annotations

import random

from epsmult.ideals import max_ideal_power, minimalize, sum_ideals
from epsmult.rings import polynomial_ring, semigroup_ring, unit_grading


def random_ring(rng: random.Random):
    dim = rng.randint(1, 3)
    if rng.random() < 0.5:
        return polynomial_ring(dim)
    gens = set()
    while len(gens) < dim + rng.randint(0, 2):
        v = tuple(rng.randint(0, 3) for _ in range(dim))
        if any(v) and sum(v) <= 3:
            gens.add(v)
    return semigroup_ring(tuple(sorted(gens)))


def random_ideal(rng: random.Random, ring, max_weight=6, max_gens=3):
    pool = [v for v in ring.enumerate_below(unit_grading(ring.ambient_dim), max_weight)
            if any(v)]
    gens = rng.sample(pool, k=min(len(pool), rng.randint(1, max_gens)))
    return minimalize(ring, gens)


def random_primary_ideal(rng: random.Random, ring):
    """m^t, sometimes enlarged by one extra generator; always m-primary."""
    base = max_ideal_power(ring, rng.randint(1, 2))
    if rng.random() < 0.5:
        return base
    return sum_ideals(base, random_ideal(rng, ring, max_weight=4, max_gens=1))


def window_points(ring, bound):
    return ring.enumerate_below(unit_grading(ring.ambient_dim), bound)
