"""Filtered isocrystals over the model field ``K = Q(t_1, ..., t_m)``.

An isocrystal is recorded by the slope attached to each standard basis
vector; for the admissibility and Harder-Narasimhan routines the slopes must
be integers, so Frobenius acts on each slope block as ``p^slope`` times the
identity and the Frobenius-stable subspaces are exactly the rational
subspaces graded by slope block. Those are enumerated up to a height bound.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .exactnum import (
    CapacityError,
    ModelField,
    ModelFieldElement,
    cleared_numerators,
    coefficient_matrix,
    format_rational,
    kernel_from_rref,
    model_field,
    parse_rational,
    rank,
    rref,
    transpose,
    variables_in,
)
from .polygons import Polygon, hodge_polygon, polygon_from_slopes

# A rational subspace, given by the rows of its reduced echelon form.
Subspace = tuple[tuple[Fraction, ...], ...]


class UnsupportedConfiguration(ValueError):
    pass


class NotPhiStable(ValueError):
    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"vector {list(map(str, witness))} mixes slope blocks")


@dataclass(frozen=True)
class SearchConfig:
    """Bounds for the brute-force subspace search.

    ``workers > 1`` splits the enumeration over processes; results are
    identical to the serial run.
    """

    height_bound: int = 3
    workers: int = 1

    def __post_init__(self):
        if self.height_bound < 1:
            raise ValueError("height_bound must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class Isocrystal:
    slopes: tuple[Fraction, ...]

    def __post_init__(self):
        s = tuple(parse_rational(x) for x in self.slopes)
        object.__setattr__(self, "slopes", s)
        if not s:
            raise ValueError("an isocrystal needs positive rank")
        for slope in set(s):
            if s.count(slope) % slope.denominator:
                raise ValueError(
                    f"slope {slope} occurs {s.count(slope)} times, "
                    f"not a multiple of {slope.denominator}"
                )

    @property
    def n(self) -> int:
        return len(self.slopes)

    def is_integral(self) -> bool:
        return all(s.denominator == 1 for s in self.slopes)

    def blocks(self) -> list[tuple[Fraction, tuple[int, ...]]]:
        """Slope blocks as ``(slope, coordinate indices)``, by increasing slope."""
        return [
            (s, tuple(i for i, x in enumerate(self.slopes) if x == s))
            for s in sorted(set(self.slopes))
        ]

    def newton_polygon(self) -> Polygon:
        return polygon_from_slopes(self.slopes)

    def newton_degree(self) -> Fraction:
        """Valuation of the determinant of Frobenius."""
        return sum(self.slopes, Fraction(0))


def _as_field_rows(rows, K: ModelField):
    return tuple(tuple(K(x) for x in r) for r in rows)


@dataclass(frozen=True, eq=False)
class FilteredIsocrystal:
    """``(V, phi, F)`` with ``F`` a decreasing flag on ``V tensor K``.

    ``flag`` lists ``(jump, basis)`` with jumps strictly decreasing; ``basis``
    spans the whole filtration step at that jump, so the last one spans
    ``V``. Bases are stored in reduced echelon form over ``K``.
    """

    iso: Isocrystal
    flag: tuple
    field: ModelField = field(default_factory=model_field)

    def __post_init__(self):
        K = self.field
        n = self.iso.n
        steps = []
        prev_dim = 0
        prev_rows: tuple = ()
        last_jump = None
        for jump, basis in self.flag:
            jump = parse_rational(jump)
            if last_jump is not None and jump >= last_jump:
                raise ValueError("jumps must be strictly decreasing")
            rows = _as_field_rows(basis, K)
            if any(len(r) != n for r in rows):
                raise ValueError(f"flag vectors must have length {n}")
            reduced, pivots = rref(rows, n)
            dim = len(pivots)
            if dim <= prev_dim:
                raise ValueError(f"step at jump {jump} does not enlarge the previous one")
            if prev_rows and len(rref(list(prev_rows) + list(reduced), n)[1]) != dim:
                raise ValueError(f"step at jump {jump} does not contain the previous one")
            steps.append((jump, tuple(tuple(r) for r in reduced)))
            prev_dim, prev_rows, last_jump = dim, reduced, jump
        if prev_dim != n:
            raise ValueError("the last filtration step must be the whole space")
        object.__setattr__(self, "flag", tuple(steps))

    def __eq__(self, other):
        if not isinstance(other, FilteredIsocrystal):
            return NotImplemented
        return (self.iso, self.flag, self.field) == (other.iso, other.flag, other.field)

    def __hash__(self):
        return hash((self.iso, self.flag))

    @property
    def n(self) -> int:
        return self.iso.n

    def dims(self) -> list[int]:
        return [len(b) for _, b in self.flag]

    def filtration_type(self) -> list[tuple[Fraction, int]]:
        out, prev = [], 0
        for (jump, _), d in zip(self.flag, self.dims()):
            out.append((jump, d - prev))
            prev = d
        return out

    def hodge_polygon(self) -> Polygon:
        return hodge_polygon(self.filtration_type())

    def newton_polygon(self) -> Polygon:
        return self.iso.newton_polygon()

    def hodge_degree(self) -> Fraction:
        return sum((j * m for j, m in self.filtration_type()), Fraction(0))

    @cached_property
    def _piece_tensors(self):
        """Per flag step: integer coefficient tensor ``(rows, n, monomials)``."""
        pieces = []
        all_monos: set = set()
        cleared = []
        for _, basis in self.flag:
            rows = []
            for vec in basis:
                monos, coeffs = cleared_numerators(list(vec))
                all_monos |= set(monos)
                rows.append((monos, coeffs))
            cleared.append(rows)
        order = sorted(all_monos, key=lambda m: (sum(m), m))
        index = {m: i for i, m in enumerate(order)}
        for rows in cleared:
            tensor = []
            for monos, coeffs in rows:
                den = math.lcm(*(c.denominator for r in coeffs for c in r))
                mat = [[0] * len(order) for _ in range(self.n)]
                for j, r in enumerate(coeffs):
                    for m, c in zip(monos, r):
                        mat[j][index[m]] = int(c * den)
                tensor.append(mat)
            pieces.append(tensor)
        return order, pieces

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "slopes": [format_rational(s) for s in self.iso.slopes],
            "flag": [
                {"jump": format_rational(j), "basis": [[str(x) for x in v] for v in b]}
                for j, b in self.flag
            ],
            "variables": list(self.field.names),
        }

    @classmethod
    def from_json(cls, data: dict) -> FilteredIsocrystal:
        slopes = [parse_rational(s) for s in data["slopes"]]
        if "n" in data and data["n"] != len(slopes):
            raise ValueError(f"n={data['n']} but {len(slopes)} slopes given")
        names = data.get("variables")
        if not names:
            names = variables_in(str(x) for step in data["flag"] for v in step["basis"] for x in v)
        K = model_field(*names)
        flag = [
            (parse_rational(step["jump"]), [[K(str(x)) for x in v] for v in step["basis"]])
            for step in data["flag"]
        ]
        return cls(Isocrystal(tuple(slopes)), tuple(flag), K)


def drinfeld_filtered_isocrystal(coords: Sequence) -> FilteredIsocrystal:
    """Trivial isocrystal of rank n with the filtration of type ((n-1)^1, (-1)^(n-1)) by a line."""
    K = _field_of(coords)
    line = [K(x) for x in coords]
    if not any(line):
        raise ValueError("the zero vector does not define a line")
    n = len(line)
    iso = Isocrystal((Fraction(0),) * n)
    full = [[K(int(i == j)) for j in range(n)] for i in range(n)]
    if n == 1:
        return FilteredIsocrystal(iso, ((Fraction(0), full),), K)
    return FilteredIsocrystal(iso, ((Fraction(n - 1), [line]), (Fraction(-1), full)), K)


def _field_of(values) -> ModelField:
    fields = {v.field for v in values if isinstance(v, ModelFieldElement)}
    if len(fields) > 1:
        raise ValueError("coordinates over mismatched variable sets")
    return fields.pop() if fields else model_field()


def hn_invariants(fi: FilteredIsocrystal) -> tuple[int, Fraction, Fraction]:
    """``(rank, degree, slope)`` with degree = Hodge degree - valuation of det(phi)."""
    deg = fi.hodge_degree() - fi.iso.newton_degree()
    return fi.n, deg, deg / fi.n


def drinfeld_membership(coords: Sequence) -> bool:
    """Whether the homogeneous coordinates avoid every rational hyperplane."""
    if not any(coords):
        raise ValueError("the zero vector is not a point of projective space")
    return rank(coefficient_matrix(list(coords))) == len(coords)


# ---------------------------------------------------------------------------
# subspace enumeration


@lru_cache(maxsize=None)
def _primitive_vectors(m: int, h: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for v in itertools.product(range(-h, h + 1), repeat=m):
        nz = next((x for x in v if x), 0)
        if nz > 0 and math.gcd(*v) == 1:
            out.append(v)
    return tuple(out)


def _rref_key(rows) -> Subspace:
    reduced, _ = rref(rows)
    return tuple(tuple(r) for r in reduced)


def _span_chunk(m: int, j: int, h: int, part: int, parts: int) -> set:
    vecs = _primitive_vectors(m, h)
    found = set()
    for first in range(part, len(vecs), parts):
        for rest in itertools.combinations(range(first + 1, len(vecs)), j - 1):
            rows = [vecs[first]] + [vecs[i] for i in rest]
            key = _rref_key(rows)
            if len(key) == j:
                found.add(key)
    return found


MAX_SPANNING_SETS = 2_000_000


@lru_cache(maxsize=None)
def block_subspaces(m: int, j: int, h: int, workers: int = 1) -> tuple[Subspace, ...]:
    """All ``j``-dimensional subspaces of ``Q^m`` spanned by integer vectors of height <= h."""
    if not 0 <= j <= m:
        raise ValueError(f"no {j}-dimensional subspaces of Q^{m}")
    if j == 0:
        return ((),)
    if j == m:
        return (tuple(tuple(Fraction(int(a == b)) for b in range(m)) for a in range(m)),)
    count = math.comb(len(_primitive_vectors(m, h)), j)
    if count > MAX_SPANNING_SETS:
        raise CapacityError(
            f"{count} spanning sets for {j}-dimensional subspaces of Q^{m} at height {h}; "
            f"limit is {MAX_SPANNING_SETS}"
        )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_span_chunk, *zip(*[(m, j, h, w, workers) for w in range(workers)]))
            found = set().union(*parts)
    else:
        found = _span_chunk(m, j, h, 0, 1)
    return tuple(sorted(found))


def _compositions(total: int, caps: Sequence[int]):
    if not caps:
        if total == 0:
            yield ()
        return
    for k in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - k, caps[1:]):
            yield (k,) + rest


@lru_cache(maxsize=None)
def _graded_subspaces(slopes: tuple[Fraction, ...], dim: int, h: int, workers: int) -> tuple[Subspace, ...]:
    n = len(slopes)
    blocks = Isocrystal(slopes).blocks()
    out = []
    for comp in _compositions(dim, [len(idx) for _, idx in blocks]):
        choices = [block_subspaces(len(idx), k, h, workers) for (_, idx), k in zip(blocks, comp)]
        for pick in itertools.product(*choices):
            rows = []
            for (_, idx), sub in zip(blocks, pick):
                for local in sub:
                    full = [Fraction(0)] * n
                    for i, x in zip(idx, local):
                        full[i] = x
                    rows.append(tuple(full))
            rows.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
            out.append(tuple(rows))
    return tuple(sorted(out))


def enumerate_phi_stable_subspaces(iso: Isocrystal, dim: int, cfg: SearchConfig = SearchConfig()) -> list[Subspace]:
    """Frobenius-stable subspaces of dimension ``dim`` spanned by height-bounded integer vectors."""
    if not iso.is_integral():
        raise UnsupportedConfiguration(
            "subspace enumeration needs integral slopes; got " + ", ".join(map(str, iso.slopes))
        )
    if not 0 <= dim <= iso.n:
        raise ValueError(f"dimension {dim} out of range for rank {iso.n}")
    return list(_graded_subspaces(iso.slopes, dim, cfg.height_bound, cfg.workers))


@dataclass(frozen=True, eq=False)
class _Family:
    """Enumerated subspaces of one dimension with precomputed integer data."""

    subspaces: tuple[Subspace, ...]
    annihilators: np.ndarray  # (count, n - dim, n), integer rows cutting out each subspace
    newton: np.ndarray  # (count,), valuation of det(phi) on each subspace


@lru_cache(maxsize=None)
def _family(slopes: tuple[Fraction, ...], dim: int, h: int, workers: int) -> _Family:
    n = len(slopes)
    subs = _graded_subspaces(slopes, dim, h, workers)
    mats, newton = [], []
    for sub in subs:
        pivots = [next(i for i, x in enumerate(r) if x) for r in sub]
        rows = []
        for v in kernel_from_rref([list(r) for r in sub], pivots, n):
            den = math.lcm(*(x.denominator for x in v))
            rows.append([int(x * den) for x in v])
        mats.append(rows)
        newton.append(sum(int(slopes[pc]) for pc in pivots))
    ann = np.array(mats, dtype=np.int64).reshape(len(subs), n - dim, n)
    return _Family(subs, ann, np.array(newton, dtype=np.int64))


def _poly_entry(K: ModelField, monos, coeffs) -> ModelFieldElement:
    ring = K._K.ring
    poly = ring.from_dict({m: int(c) for m, c in zip(monos, coeffs) if c})
    return ModelFieldElement(K._K(poly))


def _intersection_dims(fi: FilteredIsocrystal, fam: _Family) -> np.ndarray:
    """``dim_K(F^x cap W_K)`` for every subspace (rows) and flag step (columns)."""
    n = fi.n
    count = len(fam.subspaces)
    dims = np.zeros((count, len(fi.flag)), dtype=np.int64)
    if not count:
        return dims
    k = len(fam.subspaces[0])
    monos, tensors = fi._piece_tensors
    for col, (tensor, r) in enumerate(zip(tensors, fi.dims())):
        if r == n or k == n:
            dims[:, col] = min(k, r)
            continue
        piece = np.array(tensor, dtype=object)  # (r, n, M)
        bound = int(np.abs(fam.annihilators).max(initial=0)) * int(max(abs(x) for x in piece.flat)) * n
        if bound < 2**62:
            images = np.einsum("wln,rnm->wlrm", fam.annihilators, piece.astype(np.int64))
        else:
            images = np.einsum("wln,rnm->wlrm", fam.annihilators.astype(object), piece)
        nonzero = images.reshape(count, -1).any(axis=1)
        if min(n - k, r) == 1:
            dims[:, col] = np.where(nonzero, r - 1, r)
            continue
        dims[:, col] = r
        for w in np.nonzero(nonzero)[0]:
            mat = [
                [_poly_entry(fi.field, monos, images[w, l, i]) for l in range(n - k)]
                for i in range(r)
            ]
            dims[w, col] = r - len(rref(mat)[1])
    return dims


def _scaled_degrees(fi: FilteredIsocrystal, fam: _Family) -> tuple[np.ndarray, int]:
    """Degrees of the induced sub-objects, multiplied by a common denominator ``D``."""
    dims = _intersection_dims(fi, fam)
    jumps = [j for j, _ in fi.flag]
    den = math.lcm(*(j.denominator for j in jumps))
    scaled = np.array([int(j * den) for j in jumps], dtype=np.int64)
    steps = np.diff(dims, axis=1, prepend=0)
    return steps @ scaled - den * fam.newton, den


def subspace_degrees(fi: FilteredIsocrystal, cfg: SearchConfig = SearchConfig()) -> dict[Subspace, Fraction]:
    """Degree of the induced filtered isocrystal on every enumerated proper nonzero subspace."""
    out: dict[Subspace, Fraction] = {}
    for dim in range(1, fi.n):
        fam = _family(fi.iso.slopes, dim, cfg.height_bound, cfg.workers)
        scaled, den = _scaled_degrees(fi, fam)
        out.update((sub, Fraction(int(d), den)) for sub, d in zip(fam.subspaces, scaled))
    return out


def subspace_polygons(fi: FilteredIsocrystal, cfg: SearchConfig = SearchConfig()) -> dict[Subspace, tuple[Polygon, Polygon]]:
    """``(Newton, Hodge)`` polygons of the induced sub-object on every enumerated subspace."""
    out: dict[Subspace, tuple[Polygon, Polygon]] = {}
    jumps = [j for j, _ in fi.flag]
    for dim in range(1, fi.n):
        fam = _family(fi.iso.slopes, dim, cfg.height_bound, cfg.workers)
        steps = np.diff(_intersection_dims(fi, fam), axis=1, prepend=0)
        for sub, row in zip(fam.subspaces, steps):
            pivots = [next(i for i, x in enumerate(r) if x) for r in sub]
            newton = _newton_of(tuple(sorted(fi.iso.slopes[pc] for pc in pivots)))
            hodge = _hodge_of(tuple((j, int(m)) for j, m in zip(jumps, row) if m))
            out[sub] = (newton, hodge)
    return out


@lru_cache(maxsize=4096)
def _newton_of(slopes: tuple) -> Polygon:
    return polygon_from_slopes(slopes)


@lru_cache(maxsize=4096)
def _hodge_of(filtration_type: tuple) -> Polygon:
    return hodge_polygon(filtration_type)


# ---------------------------------------------------------------------------
# induced structures


def _check_phi_stable(iso: Isocrystal, basis):
    for v in basis:
        labels = {iso.slopes[i] for i, x in enumerate(v) if x}
        if len(labels) > 1:
            raise NotPhiStable(tuple(v))
        if not labels:
            raise ValueError("zero vector in subspace basis")


def _slope_of(iso: Isocrystal, v) -> Fraction:
    return iso.slopes[next(i for i, x in enumerate(v) if x)]


def induced_sub(fi: FilteredIsocrystal, w_basis) -> FilteredIsocrystal:
    """The sub-object on ``W`` with the filtration ``F cap (W tensor K)``, in the given basis of W."""
    n = fi.n
    wb = [[parse_rational(x) for x in v] for v in w_basis]
    if any(len(v) != n for v in wb):
        raise ValueError(f"subspace vectors must have length {n}")
    _check_phi_stable(fi.iso, wb)
    k = len(wb)
    if len(rref(wb, n)[1]) != k:
        raise ValueError("subspace basis is linearly dependent")
    K = fi.field
    flag = []
    prev = 0
    for jump, basis in fi.flag:
        stacked = [list(map(K, v)) for v in wb] + [list(v) for v in basis]
        _, ker = _left_kernel(stacked, n)
        coords = [c[:k] for c in ker]
        d = len(coords)
        if d > prev:
            flag.append((jump, coords))
            prev = d
    iso = Isocrystal(tuple(_slope_of(fi.iso, v) for v in wb))
    return FilteredIsocrystal(iso, tuple(flag), K)


def _left_kernel(rows, ncols):
    """Vectors ``c`` with ``c . rows = 0``."""
    cols = transpose(rows)
    reduced, pivots = rref(cols, len(rows))
    return pivots, kernel_from_rref(reduced, pivots, len(rows))


def induced_quotient(fi: FilteredIsocrystal, w_basis) -> FilteredIsocrystal:
    """``V/W`` with the image filtration, on the images of the non-pivot standard basis vectors."""
    n = fi.n
    wb = [[parse_rational(x) for x in v] for v in w_basis]
    _check_phi_stable(fi.iso, wb)
    reduced, pivots = rref(wb, n)
    if len(pivots) == n:
        raise ValueError("quotient by the whole space has rank 0")
    keep = [j for j in range(n) if j not in pivots]
    K = fi.field

    def project(v):
        v = list(v)
        for row, pc in zip(reduced, pivots):
            c = v[pc]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return [K(v[j]) for j in keep]

    flag = []
    prev = 0
    for jump, basis in fi.flag:
        images = [project(v) for v in basis]
        red, piv = rref(images, len(keep))
        if len(piv) > prev:
            flag.append((jump, red))
            prev = len(piv)
    iso = Isocrystal(tuple(fi.iso.slopes[j] for j in keep))
    return FilteredIsocrystal(iso, tuple(flag), K)


def tensor_product(a: FilteredIsocrystal, b: FilteredIsocrystal) -> FilteredIsocrystal:
    """Tensor product; basis ``e_i (x) f_j`` in row-major order, flag ``sum F^x (x) F^y``."""
    if a.field != b.field:
        raise ValueError("tensor factors over different model fields")
    K = a.field
    slopes = tuple(s + t for s in a.iso.slopes for t in b.iso.slopes)
    candidates = sorted({x + y for x, _ in a.flag for y, _ in b.flag}, reverse=True)
    flag = []
    prev = 0
    for z in candidates:
        vecs = []
        for x, ba in a.flag:
            for y, bb in b.flag:
                if x + y >= z:
                    vecs += [[u * v for u in va for v in vb] for va in ba for vb in bb]
        red, piv = rref(vecs, len(slopes))
        if len(piv) > prev:
            flag.append((z, red))
            prev = len(piv)
    return FilteredIsocrystal(Isocrystal(slopes), tuple(flag), K)


# ---------------------------------------------------------------------------
# weak admissibility and Harder-Narasimhan


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    height_bound: int
    total_degree: Fraction
    violated_by: Subspace | None = None
    degree: Fraction | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": "admissible" if self.admissible else "not_admissible",
            "height_bound": self.height_bound,
            "total_degree": format_rational(self.total_degree),
            "reason": self.reason,
            "violated_by": None if self.violated_by is None
            else [[format_rational(x) for x in r] for r in self.violated_by],
            "degree": None if self.degree is None else format_rational(self.degree),
        }


def is_weakly_admissible(fi: FilteredIsocrystal, cfg: SearchConfig = SearchConfig()) -> AdmissibilityVerdict:
    _, total, _ = hn_invariants(fi)
    if not fi.iso.is_integral():
        raise UnsupportedConfiguration("weak admissibility is decided for integral slopes only")
    if total != 0:
        return AdmissibilityVerdict(False, cfg.height_bound, total, reason="total degree is not zero")
    worst = None
    for dim in range(1, fi.n):
        fam = _family(fi.iso.slopes, dim, cfg.height_bound, cfg.workers)
        scaled, den = _scaled_degrees(fi, fam)
        if not len(scaled) or scaled.max() <= 0:
            continue
        # first index of the maximum is the lexicographically smallest subspace
        i = int(np.argmax(scaled))
        deg = Fraction(int(scaled[i]), den)
        if worst is None or deg > worst[1]:
            worst = (fam.subspaces[i], deg)
    if worst is None:
        return AdmissibilityVerdict(True, cfg.height_bound, total)
    return AdmissibilityVerdict(
        False, cfg.height_bound, total, worst[0], worst[1], reason="destabilising subobject"
    )


def is_semistable(fi: FilteredIsocrystal, cfg: SearchConfig = SearchConfig()) -> bool:
    """No enumerated subobject has slope above the slope of ``fi``.

    For total degree zero this is weak admissibility at the same height bound.
    """
    if not fi.iso.is_integral():
        raise UnsupportedConfiguration("semistability is decided for integral slopes only")
    _, _, mu = hn_invariants(fi)
    return all(deg <= mu * len(sub) for sub, deg in subspace_degrees(fi, cfg).items())


@dataclass(frozen=True)
class HNPiece:
    """One step ``W_i`` of the filtration; rank, degree and slope are those of ``W_i / W_(i-1)``."""

    basis: Subspace
    rank: int
    degree: Fraction
    slope: Fraction


@dataclass(frozen=True)
class HNReport:
    pieces: tuple[HNPiece, ...]
    height_bound: int

    @property
    def slopes(self) -> list[Fraction]:
        return [p.slope for p in self.pieces]

    def is_semistable(self) -> bool:
        return len(self.pieces) == 1

    def to_json(self) -> dict:
        return {
            "height_bound": self.height_bound,
            "pieces": [
                {
                    "basis": [[format_rational(x) for x in r] for r in p.basis],
                    "rank": p.rank,
                    "degree": format_rational(p.degree),
                    "slope": format_rational(p.slope),
                }
                for p in self.pieces
            ],
        }


def _contains(big: Subspace, small: Subspace, n: int) -> bool:
    if not small:
        return True
    return len(rref(list(big) + list(small), n)[1]) == len(big)


def hn_filtration(fi: FilteredIsocrystal, cfg: SearchConfig = SearchConfig()) -> HNReport:
    """Greedy Harder-Narasimhan filtration over the enumerated subobjects.

    Each step takes, among enumerated subobjects strictly containing the
    previous step, the one whose quotient by it has the largest slope; ties go
    to the larger rank, then to the lexicographically smallest echelon basis.
    """
    if not fi.iso.is_integral():
        raise UnsupportedConfiguration("HN filtrations are computed for integral slopes only")
    n = fi.n
    _, total, _ = hn_invariants(fi)
    full: Subspace = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    degrees = subspace_degrees(fi, cfg)
    degrees[full] = total
    prev: Subspace = ()
    prev_deg = Fraction(0)
    pieces = []
    while len(prev) < n:
        best = None
        for sub, deg in degrees.items():
            if len(sub) <= len(prev) or not _contains(sub, prev, n):
                continue
            slope = (deg - prev_deg) / (len(sub) - len(prev))
            key = (-slope, -len(sub), sub)
            if best is None or key < best[0]:
                best = (key, sub, deg, slope)
        _, sub, deg, slope = best
        pieces.append(HNPiece(sub, len(sub) - len(prev), deg - prev_deg, slope))
        prev, prev_deg = sub, deg
    return HNReport(tuple(pieces), cfg.height_bound)
