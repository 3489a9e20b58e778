"""Root data of GL_n: Weyl group, Kostant representatives, Galois orbits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exactnum import CapacityError, parse_rational

MAX_WEYL_RANK = 8


def _vec(xs) -> tuple[Fraction, ...]:
    return tuple(parse_rational(x) for x in xs)


def pairing(u: Sequence, v: Sequence) -> Fraction:
    """Standard Euclidean inner product on ``Q^n``."""
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class RootDatum:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("GL_n needs n >= 1")

    @cached_property
    def simple_roots(self) -> tuple[tuple[int, ...], ...]:
        """``alpha_i = e_i - e_(i+1)`` for ``i = 1..n-1``."""
        n = self.n
        return tuple(tuple(int(k == i) - int(k == i + 1) for k in range(n)) for i in range(n - 1))

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        return tuple(
            tuple(int(k == i) - int(k == j) for k in range(n))
            for i in range(n) for j in range(i + 1, n)
        )

    @cached_property
    def fundamental_coweights(self) -> tuple[tuple[Fraction, ...], ...]:
        """Trace-zero ``omega_i`` with ``(alpha_j, omega_i) = delta_ij``."""
        n = self.n
        return tuple(
            tuple(Fraction(n - i, n) if k < i else Fraction(-i, n) for k in range(n))
            for i in range(1, n)
        )

    @cached_property
    def two_rho(self) -> tuple[int, ...]:
        return tuple(self.n - 1 - 2 * k for k in range(self.n))

    def root_label(self, i: int) -> str:
        return f"a{i + 1}"


@dataclass(frozen=True, order=True)
class WeylElement:
    """A permutation ``w`` of ``0..n-1`` in one-line notation; ``w[i]`` is the image of ``i``."""

    perm: tuple[int, ...]

    @property
    def length(self) -> int:
        p = self.perm
        return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])

    def act(self, weights: Sequence) -> tuple[Fraction, ...]:
        """``(w . mu)_(w(i)) = mu_i``."""
        out = [Fraction(0)] * len(self.perm)
        for i, x in enumerate(weights):
            out[self.perm[i]] = Fraction(x)
        return tuple(out)

    def __mul__(self, other: WeylElement) -> WeylElement:
        return WeylElement(tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def __str__(self):
        return "".join(str(i + 1) for i in self.perm) if len(self.perm) < 10 else str(self.perm)


def identity(n: int) -> WeylElement:
    return WeylElement(tuple(range(n)))


def weyl_group(rd: RootDatum) -> list[WeylElement]:
    """All ``n!`` permutations, sorted by length then lexicographically."""
    if rd.n > MAX_WEYL_RANK:
        raise CapacityError(f"Weyl group of GL_{rd.n} has {rd.n}! elements; limit is n <= {MAX_WEYL_RANK}")
    elems = [WeylElement(p) for p in itertools.permutations(range(rd.n))]
    return sorted(elems, key=lambda w: (w.length, w.perm))


def is_dominant(mu: Sequence) -> bool:
    mu = _vec(mu)
    return all(a >= b for a, b in zip(mu, mu[1:]))


def stabilizer(rd: RootDatum, mu: Sequence) -> list[WeylElement]:
    mu = _vec(mu)
    return [w for w in weyl_group(rd) if w.act(mu) == mu]


def kostant_representatives(rd: RootDatum, mu: Sequence) -> list[WeylElement]:
    """Minimal-length representatives of ``W / Stab(mu)``, sorted by length."""
    mu = _vec(mu)
    if len(mu) != rd.n:
        raise ValueError(f"cocharacter has {len(mu)} weights, expected {rd.n}")
    if not is_dominant(mu):
        raise ValueError(f"{[str(x) for x in mu]} is not dominant")
    best: dict[tuple, WeylElement] = {}
    for w in weyl_group(rd):  # already sorted by length, so the first hit is minimal
        best.setdefault(w.act(mu), w)
    return sorted(best.values(), key=lambda w: (w.length, w.perm))


@dataclass(frozen=True)
class GaloisAction:
    """A permutation ``g`` of the indices of a list of Kostant representatives."""

    g: tuple[int, ...]

    @property
    def order(self) -> int:
        e, cur = 1, list(self.g)
        while cur != list(range(len(self.g))):
            cur = [self.g[i] for i in cur]
            e += 1
        return e

    @classmethod
    def trivial(cls, size: int) -> GaloisAction:
        return cls(tuple(range(size)))


@dataclass(frozen=True)
class Orbit:
    members: tuple[WeylElement, ...]
    length: int

    @property
    def size(self) -> int:
        return len(self.members)


def galois_orbits(reps: Sequence[WeylElement], g: GaloisAction | None = None) -> list[Orbit]:
    """Orbits of ``g`` on ``reps``; each orbit carries the common length of its members."""
    reps = list(reps)
    if g is None:
        g = GaloisAction.trivial(len(reps))
    if sorted(g.g) != list(range(len(reps))):
        raise ValueError(f"Galois action {g.g} is not a permutation of {len(reps)} indices")
    for i, j in enumerate(g.g):
        if reps[i].length != reps[j].length:
            raise ValueError(
                f"Galois action sends {reps[i]} (length {reps[i].length}) "
                f"to {reps[j]} (length {reps[j].length})"
            )
    seen: set[int] = set()
    orbits = []
    for i in range(len(reps)):
        if i in seen:
            continue
        idx, j = [], i
        while j not in idx:
            idx.append(j)
            j = g.g[j]
        seen |= set(idx)
        members = tuple(sorted((reps[k] for k in idx), key=lambda w: w.perm))
        orbits.append(Orbit(members, members[0].length))
    return sorted(orbits, key=lambda o: (o.length, [w.perm for w in o.members]))


def is_decent(nu_b: Sequence, s: int) -> bool:
    """Integrality of ``s * nu_b`` (the part of decency visible from the slope vector)."""
    if s <= 0:
        raise ValueError("s must be a positive integer")
    return all((s * x).denominator == 1 for x in _vec(nu_b))


def is_basic(nu_b: Sequence) -> bool:
    nu = _vec(nu_b)
    return all(x == nu[0] for x in nu)
