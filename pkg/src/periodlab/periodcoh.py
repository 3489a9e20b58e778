"""Mod-p cohomology of period domains: index sets, Steinberg dimensions, summand table.

The cohomology of a period domain decomposes into one summand per Galois
orbit ``[w]`` of Kostant representatives: the dual generalized Steinberg
representation ``v_(P_I)^*`` for ``I = I_[w]``, tensored with the dual of the
permutation module on the orbit, placed in degree ``2d - n_[w]``. The degree
rule ``n_[w]`` is obtained by calibration against the Drinfeld spaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import CapacityError, FiniteField, format_rational, parse_rational, rank_mod_p
from .fundcomplex import MAX_MATRIX_CELLS, build_finite_flag_model
from .rootdata import (
    GaloisAction,
    RootDatum,
    WeylElement,
    galois_orbits,
    is_basic,
    is_decent,
    is_dominant,
    kostant_representatives,
    pairing,
)


class DegreeRuleError(ValueError):
    """No degree rule, or more than one, fits the calibration constraints."""

    def __init__(self, message, candidates=()):
        self.candidates = list(candidates)
        super().__init__(message)


@dataclass(frozen=True)
class PeriodDatum:
    rd: RootDatum
    mu: tuple[Fraction, ...]
    nu_b: tuple[Fraction, ...]
    s: int = 1
    galois: tuple[int, ...] | None = None

    def __post_init__(self):
        mu = tuple(parse_rational(x) for x in self.mu)
        nu = tuple(parse_rational(x) for x in self.nu_b)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu_b", nu)
        if len(mu) != self.rd.n or len(nu) != self.rd.n:
            raise ValueError(f"mu and nu_b need {self.rd.n} entries")
        if not is_dominant(mu):
            raise ValueError("mu must be dominant")
        if not is_basic(nu):
            raise ValueError("nu_b must be basic (central)")
        if not is_decent(nu, self.s):
            raise ValueError(f"s * nu_b is not integral for s={self.s}")
        if self.galois is not None:
            object.__setattr__(self, "galois", tuple(int(i) for i in self.galois))

    def galois_action(self) -> GaloisAction:
        reps = kostant_representatives(self.rd, self.mu)
        if self.galois is None:
            return GaloisAction.trivial(len(reps))
        return GaloisAction(self.galois)

    def to_json(self) -> dict:
        out = {
            "n": self.rd.n,
            "mu": [format_rational(x) for x in self.mu],
            "nu_b": [format_rational(x) for x in self.nu_b],
            "s": self.s,
        }
        if self.galois is not None:
            out["galois"] = list(self.galois)
        return out

    @classmethod
    def from_json(cls, data: dict) -> PeriodDatum:
        return cls(
            RootDatum(int(data["n"])),
            tuple(data["mu"]),
            tuple(data.get("nu_b", ["0"] * int(data["n"]))),
            int(data.get("s", 1)),
            data.get("galois"),
        )


def drinfeld_datum(d: int) -> PeriodDatum:
    """``GL_(d+1)`` with ``mu = (d, -1, ..., -1)`` and trivial ``b``."""
    n = d + 1
    return PeriodDatum(RootDatum(n), (d,) + (-1,) * d, (0,) * n)


def flag_dimension(rd: RootDatum, mu: Sequence) -> int:
    """``dim G/P_mu``: the number of positive roots not orthogonal to ``mu``."""
    mu = tuple(parse_rational(x) for x in mu)
    if not is_dominant(mu):
        raise ValueError("mu must be dominant")
    return sum(1 for a in rd.positive_roots if pairing(a, mu) != 0)


def flag_dimension_diagnostic(rd: RootDatum, mu: Sequence, nu_b: Sequence) -> dict:
    """Both candidate dimensions: ``dim G/P_mu`` and the pairing ``(2 rho, nu_b)``."""
    return {
        "dim_G_over_P_mu": flag_dimension(rd, mu),
        "two_rho_nu_b": pairing(rd.two_rho, [parse_rational(x) for x in nu_b]),
    }


def i_set(w: WeylElement, mu: Sequence, nu_b: Sequence, rd: RootDatum) -> frozenset:
    """``{alpha in Delta : (w mu - nu_b, omega_alpha) <= 0}`` as 0-based root indices."""
    wm = w.act([parse_rational(x) for x in mu])
    diff = [a - parse_rational(b) for a, b in zip(wm, nu_b)]
    return frozenset(i for i, om in enumerate(rd.fundamental_coweights) if pairing(diff, om) <= 0)


def steinberg_index(d: int, k: int) -> frozenset:
    """Root set of ``St_k`` for ``GL_(d+1)``: the first ``d - k`` simple roots."""
    if not 0 <= k <= d:
        raise ValueError(f"St_{k} undefined for d={d}")
    return frozenset(range(d - k))


def steinberg_dimension(n: int, q: int, I) -> int:
    """``dim LC(X_I) / sum_(I < I') LC(X_I')`` over ``F_p`` on the finite model."""
    I = frozenset(I)
    m = build_finite_flag_model(n, q)
    if not I <= set(range(n - 1)):
        raise ValueError(f"{sorted(I)} is not a set of simple roots of GL_{n}")
    p = FiniteField(q).p
    rows = m.size(I)
    blocks = []
    for a in sorted(set(range(n - 1)) - I):
        proj = m.projections[(I, I | {a})]
        block = np.zeros((rows, m.size(I | {a})), dtype=np.int64)
        block[np.arange(rows), proj] = 1
        blocks.append(block)
    if not blocks:
        return rows
    mat = np.hstack(blocks)
    if mat.size > MAX_MATRIX_CELLS:
        raise CapacityError(f"pullback matrix {mat.shape} exceeds {MAX_MATRIX_CELLS} cells")
    return rows - rank_mod_p(mat, p)


# ---------------------------------------------------------------------------
# degree rule


@dataclass(frozen=True)
class DegreeFunction:
    """``n_[w] = a * l_[w] + b * d + c``."""

    a: int
    b: int
    c: int
    tag: str = "affine"

    def __call__(self, length: int, d: int) -> int:
        return self.a * length + self.b * d + self.c

    def __str__(self):
        return f"n = {self.a}*l + {self.b}*d + {self.c}"


@dataclass(frozen=True)
class CohomologySummand:
    orbit_id: int
    I_set: frozenset
    l_orbit: int
    orbit_size: int
    cohomological_degree: int
    rho_twist: int
    overall_twist: int
    members: tuple[WeylElement, ...] = field(default=(), compare=False)
    member_i_sets: tuple[frozenset, ...] = field(default=(), compare=False)
    description: str = "v*_{P_I} (x) rho*_{[w]}"

    @property
    def i_set_varies(self) -> bool:
        """Members of the orbit have different index sets (the action on Delta is not modelled)."""
        return len(set(self.member_i_sets)) > 1

    def i_set_label(self) -> str:
        return "{" + ",".join(f"a{i + 1}" for i in sorted(self.I_set)) + "}"

    def to_json(self) -> dict:
        return {
            "degree": self.cohomological_degree,
            "I_set": [f"a{i + 1}" for i in sorted(self.I_set)],
            "orbit_size": self.orbit_size,
            "l": self.l_orbit,
            "rho_twist": self.rho_twist,
            "overall_twist": self.overall_twist,
            "description": self.description,
            "orbit": [str(w) for w in self.members],
            "member_I_sets": [[f"a{i + 1}" for i in sorted(s)] for s in self.member_i_sets],
        }


CAVEATS = (
    "p >= 5 assumed, not checked",
    "period domain assumed nonempty, not checked",
)


def cohomology_table(pd: PeriodDatum, degf: DegreeFunction) -> list[CohomologySummand]:
    """One summand per Galois orbit of Kostant representatives, sorted by degree."""
    rd = pd.rd
    d = flag_dimension(rd, pd.mu)
    reps = kostant_representatives(rd, pd.mu)
    orbits = galois_orbits(reps, pd.galois_action())
    out = []
    for k, orb in enumerate(orbits):
        member_sets = tuple(i_set(w, pd.mu, pd.nu_b, rd) for w in orb.members)
        I = member_sets[0]
        degree = 2 * d - degf(orb.length, d)
        if not 0 <= degree <= 2 * d:
            raise DegreeRuleError(
                f"degree rule gives degree {degree} for orbit {k} "
                f"({', '.join(map(str, orb.members))}, l={orb.length}), outside [0, {2 * d}]"
            )
        out.append(CohomologySummand(k, I, orb.length, orb.size, degree, -orb.length, d, orb.members, member_sets))
    return sorted(out, key=lambda s: (s.cohomological_degree, s.orbit_id))


def table_caveats(pd: PeriodDatum, table: Sequence[CohomologySummand] = ()) -> list[str]:
    notes = list(CAVEATS)
    if any(s.i_set_varies for s in table):
        notes.append("a Galois orbit mixes index sets; I is taken from its first member")
    if any(x.denominator != 1 for x in pd.nu_b):
        notes.append("nu_b is not integral: J_b is non-split and Delta is taken from GL_n")
    return notes


def degree_constraints(pd: PeriodDatum) -> list[tuple[int, int, int]]:
    """``(l, d, n)`` triples forcing orbit length ``l`` into degree ``d - l``, i.e. ``n = d + l``."""
    d = flag_dimension(pd.rd, pd.mu)
    reps = kostant_representatives(pd.rd, pd.mu)
    return sorted({(o.length, d, d + o.length) for o in galois_orbits(reps, pd.galois_action())})


def solve_degree_rule(constraints, bound: int = 3) -> DegreeFunction:
    """The unique ``(a, b, c)`` in ``[-bound, bound]^3`` meeting every constraint."""
    constraints = list(constraints)
    fits = [
        (a, b, c)
        for a, b, c in itertools.product(range(-bound, bound + 1), repeat=3)
        if all(a * l + b * d + c == n for l, d, n in constraints)
    ]
    if not fits:
        raise DegreeRuleError("no affine degree rule fits the constraints", [])
    if len(fits) > 1:
        raise DegreeRuleError(
            f"degree rule under-determined: {len(fits)} candidates fit {constraints}", fits
        )
    return DegreeFunction(*fits[0], tag="calibrated")


def calibrate_degree_function(n_max: int, extra: Sequence[PeriodDatum] = ()) -> DegreeFunction:
    """Fit ``n_[w]`` so that every Drinfeld datum ``GL_2 .. GL_(n_max)`` gives ``H^k = St_k^*``."""
    if n_max not in (2, 3, 4):
        raise ValueError("n_max must be 2, 3 or 4")
    data = [drinfeld_datum(n - 1) for n in range(2, n_max + 1)] + list(extra)
    constraints = sorted({c for pd in data for c in degree_constraints(pd)})
    rule = solve_degree_rule(constraints)
    for pd in data[: n_max - 1]:
        d = flag_dimension(pd.rd, pd.mu)
        for s in cohomology_table(pd, rule):
            k = s.cohomological_degree
            if k != d - s.l_orbit or s.I_set != steinberg_index(d, k):
                raise DegreeRuleError(
                    f"GL_{pd.rd.n}: orbit of length {s.l_orbit} lands in degree {k} "
                    f"with index set {s.i_set_label()}, not St_{d - s.l_orbit}",
                    [(rule.a, rule.b, rule.c)],
                )
    return rule


# ---------------------------------------------------------------------------
# duality bookkeeping


@dataclass
class DualityReport:
    d: int
    pairs: list[dict]
    occupied: list[int]
    dual_slots: list[int]
    profile_matches: bool
    dual_in_compact_range: bool
    euler_characteristic: int | None = None

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "pairs": self.pairs,
            "occupied_degrees": self.occupied,
            "dual_degrees": self.dual_slots,
            "profile_matches": self.profile_matches,
            "dual_in_compact_range": self.dual_in_compact_range,
            "euler_characteristic": self.euler_characteristic,
        }


def duality_report(table: Sequence[CohomologySummand], d: int, q: int | None = None) -> DualityReport:
    """Pair each degree ``k`` with the compactly supported slot ``2d - k``.

    With ``q`` given, the dimensions on the finite model ``GL_(d+1)(F_q)``
    are listed next to each pair and the Euler characteristic is summed.
    """
    pairs = []
    euler = 0 if q is not None else None
    for s in table:
        k = s.cohomological_degree
        entry = {
            "degree": k,
            "dual_degree": 2 * d - k,
            "I_set": [f"a{i + 1}" for i in sorted(s.I_set)],
            "orbit_size": s.orbit_size,
            "self_paired": k == d,
            "dual_from_compact_support": d <= 2 * d - k <= 2 * d,
        }
        if q is not None:
            n = d + 1
            dim = steinberg_dimension(n, q, s.I_set) * s.orbit_size
            entry["dimension"] = dim
            euler += (-1) ** k * dim
        pairs.append(entry)
    occupied = sorted(s.cohomological_degree for s in table)
    dual = sorted(2 * d - k for k in occupied)
    counts = {k: occupied.count(k) for k in occupied}
    dual_counts = {k: dual.count(k) for k in dual}
    profile = all(dual_counts.get(2 * d - k) == c for k, c in counts.items()) and len(dual) == len(occupied)
    in_range = all(d <= k <= 2 * d for k in dual)
    return DualityReport(d, pairs, occupied, dual, profile, in_range, euler)
