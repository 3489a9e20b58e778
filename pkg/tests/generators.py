"""Seeded random data shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from periodlab.exactnum import model_field, rank
from periodlab.isocrystal import FilteredIsocrystal, Isocrystal


def random_poly(rng: random.Random, K, height: int = 3, degree: int = 2):
    """Polynomial in ``t`` with integer coefficients in ``[-height, height]``."""
    t = K.gens[0]
    deg = rng.randint(0, degree)
    return sum((rng.randint(-height, height) * t**k for k in range(deg + 1)), K.zero)


def random_drinfeld_coords(rng: random.Random, n: int, height: int = 3, degree: int = 2):
    """Nonzero coordinates drawn coefficientwise; roughly 40% of draws are dependent over Q."""
    K = model_field("t")
    while True:
        coords = [random_poly(rng, K, height, degree) for _ in range(n)]
        if any(coords):
            return coords


def random_flag(rng: random.Random, n: int, K, height: int = 2):
    """A random filtration with distinct decreasing integer jumps, as (jump, basis) pairs."""
    steps = rng.randint(1, n)
    cuts = sorted(rng.sample(range(1, n), steps - 1)) + [n]
    jumps = sorted(rng.sample(range(-3, 4), steps), reverse=True)
    t = K.gens[0]
    rows = []
    while len(rows) < n:
        v = [sum((rng.randint(-height, height) * t**k for k in range(rng.randint(0, 1) + 1)), K.zero)
             for _ in range(n)]
        trial = rows + [v]
        if rank(trial) == len(trial):
            rows = trial
    return tuple((Fraction(j), rows[:c]) for j, c in zip(jumps, cuts))


def random_filtered_isocrystal(rng: random.Random, max_rank: int = 3) -> FilteredIsocrystal:
    """Integral slopes in ``[-2, 2]`` and a random flag over ``Q(t)``."""
    n = rng.randint(1, max_rank)
    K = model_field("t")
    slopes = tuple(Fraction(rng.randint(-2, 2)) for _ in range(n))
    return FilteredIsocrystal(Isocrystal(slopes), random_flag(rng, n, K), K)
