"""Finite flag models of the fundamental complex.

``X_I = GL_n(F_q) / P_I(F_q)`` is realised as the set of partial flags in
``F_q^n`` whose dimensions are the cut points ``{i : alpha_i not in I}``.
Subsets of the simple roots are frozensets of 0-based indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exactnum import FiniteField, rank_mod_p
from .rootdata import CapacityError

MAX_FLAGS = 20000
MAX_MATRIX_CELLS = 4_000_000

RootSubset = frozenset


def all_subsets(k: int) -> list[frozenset]:
    return [frozenset(c) for r in range(k + 1) for c in itertools.combinations(range(k), r)]


def subset_key(I: Iterable[int]) -> tuple:
    return (len(I), tuple(sorted(I)))


def cuts(n: int, I: Iterable[int]) -> tuple[int, ...]:
    """Dimensions of the subspaces in a flag of type ``I``."""
    I = set(I)
    return tuple(i + 1 for i in range(n - 1) if i not in I)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


def coset_count(n: int, q: int, I: Iterable[int]) -> int:
    """``|GL_n(F_q) / P_I(F_q)|`` as a q-multinomial coefficient."""
    c = (0,) + cuts(n, I) + (n,)
    total, rest = 1, n
    for a, b in zip(c, c[1:]):
        total *= gaussian_binomial(rest, b - a, q)
        rest -= b - a
    return total


def _subspaces(F: FiniteField, n: int, k: int):
    """All k-dimensional subspaces of F_q^n as reduced echelon bases."""
    out = []
    for pivots in itertools.combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
        for values in itertools.product(range(F.q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free, values):
                rows[r][c] = v
            out.append(tuple(tuple(r) for r in rows))
    return sorted(out)


def _span(F: FiniteField, rows) -> frozenset:
    n = len(rows[0]) if rows else 0
    vecs = set()
    for coeffs in itertools.product(range(F.q), repeat=len(rows)):
        v = [0] * n
        for a, row in zip(coeffs, rows):
            if a:
                for j, x in enumerate(row):
                    v[j] = F.add[v[j]][F.mul[a][x]]
        vecs.add(tuple(v))
    return frozenset(vecs)


@dataclass(frozen=True, eq=False)
class FiniteFlagModel:
    """Coset sets ``X_I`` with the projections ``p_(I, I')`` for ``|I' - I| = 1``.

    A point of ``X_I`` is a tuple of subspace ids, one per cut dimension;
    ``subspaces[k][id]`` is the echelon basis of that subspace.
    """

    n: int
    q: int
    subspaces: dict
    points: dict  # I -> sorted tuple of labels
    projections: dict = field(repr=False)  # (I, I') -> int array, index in X_I -> index in X_I'

    @property
    def rank(self) -> int:
        return self.n - 1

    def index(self, I) -> dict:
        return {x: i for i, x in enumerate(self.points[frozenset(I)])}

    def size(self, I) -> int:
        return len(self.points[frozenset(I)])

    def project(self, I, J, label):
        """Image of a point of ``X_I`` in ``X_J`` for any ``I`` contained in ``J``."""
        keep = set(cuts(self.n, J))
        return tuple(s for d, s in zip(cuts(self.n, I), label) if d in keep)

    def standard_flag(self, I) -> tuple:
        label = []
        for d in cuts(self.n, I):
            rows = tuple(tuple(int(i == j) for j in range(self.n)) for i in range(d))
            label.append(self.subspaces[d].index(rows))
        return tuple(label)


@lru_cache(maxsize=None)
def build_finite_flag_model(n: int, q: int) -> FiniteFlagModel:
    if not 1 <= n <= 4:
        raise CapacityError(f"flag models are built for 1 <= n <= 4, got n={n}")
    if q > 9:
        raise CapacityError(f"flag models are built for q <= 9, got q={q}")
    F = FiniteField(q)
    full_count = coset_count(n, q, ())
    if full_count > MAX_FLAGS:
        raise CapacityError(f"GL_{n}(F_{q}) has {full_count} full flags; limit is {MAX_FLAGS}")
    subspaces = {k: _subspaces(F, n, k) for k in range(1, n)}
    spans = {k: [_span(F, s) for s in subspaces[k]] for k in subspaces}
    supersets = {}
    for k in range(1, n - 1):
        supersets[k] = [
            [j for j, big in enumerate(spans[k + 1]) if small <= big] for small in spans[k]
        ]
    full = [()] if n == 1 else [(i,) for i in range(len(subspaces[1]))]
    for k in range(1, n - 1):
        full = [f + (j,) for f in full for j in supersets[k][f[-1]]]
    delta = n - 1
    points = {}
    for I in all_subsets(delta):
        keep = [d - 1 for d in cuts(n, I)]
        points[I] = tuple(sorted({tuple(f[i] for i in keep) for f in full}))
    projections = {}
    for I in all_subsets(delta):
        for a in set(range(delta)) - I:
            J = I | {a}
            drop = cuts(n, I).index(a + 1)
            idx = {x: i for i, x in enumerate(points[J])}
            projections[(I, J)] = np.array(
                [idx[x[:drop] + x[drop + 1:]] for x in points[I]], dtype=np.int64
            )
    model = FiniteFlagModel(n, q, subspaces, points, projections)
    _check_model(model)
    return model


def _check_model(m: FiniteFlagModel):
    for I, pts in m.points.items():
        if len(pts) != coset_count(m.n, m.q, I):
            raise AssertionError(f"|X_{sorted(I)}| = {len(pts)} disagrees with the coset count")
    for (I, J), arr in m.projections.items():
        if len(set(arr.tolist())) != len(m.points[J]):
            raise AssertionError(f"projection X_{sorted(I)} -> X_{sorted(J)} is not onto")
    for I in m.points:
        outside = set(range(m.rank)) - I
        for a, b in itertools.combinations(sorted(outside), 2):
            top = I | {a, b}
            via_a = m.projections[(I | {a}, top)][m.projections[(I, I | {a})]]
            via_b = m.projections[(I | {b}, top)][m.projections[(I, I | {b})]]
            if not np.array_equal(via_a, via_b):
                raise AssertionError(f"projections from X_{sorted(I)} do not commute")


# ---------------------------------------------------------------------------
# selectors and the complex


@dataclass(frozen=True)
class StalkSelector:
    """A nonempty subset ``X_I(x)`` of each ``X_I``, stored as sorted label tuples."""

    chosen: Mapping

    @classmethod
    def full(cls, m: FiniteFlagModel) -> StalkSelector:
        return cls({I: pts for I, pts in m.points.items()})

    @classmethod
    def singleton(cls, m: FiniteFlagModel) -> StalkSelector:
        return cls({I: (m.standard_flag(I),) for I in m.points})

    def __getitem__(self, I) -> tuple:
        return self.chosen[frozenset(I)]

    def validate(self, m: FiniteFlagModel):
        for I in m.points:
            if frozenset(I) not in self.chosen:
                raise ValueError(f"selector misses X_{sorted(I)}")
            part = self.chosen[frozenset(I)]
            if not part:
                raise ValueError(f"selector is empty on X_{sorted(I)}")
            if not set(part) <= set(m.points[I]):
                raise ValueError(f"selector on X_{sorted(I)} contains non-points")
        for (I, J) in m.projections:
            target = set(self[J])
            for x in self[I]:
                if m.project(I, J, x) not in target:
                    raise ValueError(
                        f"selector incompatible with p_({sorted(I)}, {sorted(J)}): "
                        f"{x} maps outside X_{sorted(J)}(x)"
                    )


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Cochain complex over ``F_p``; ``differentials[k]`` maps degree ``k`` to ``k + 1``."""

    dims: tuple[int, ...]
    differentials: tuple[np.ndarray, ...]
    p: int

    def __post_init__(self):
        for k, d in enumerate(self.differentials):
            if d.shape != (self.dims[k + 1], self.dims[k]):
                raise ValueError(f"D_{k} has shape {d.shape}, expected {(self.dims[k + 1], self.dims[k])}")

    def d_squared_vanishes(self) -> bool:
        for a, b in zip(self.differentials, self.differentials[1:]):
            if ((b @ a) % self.p).any():
                return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))


def _pullback(m: FiniteFlagModel, sel: StalkSelector, I, J) -> np.ndarray:
    """Matrix of ``f -> f o p_(I, J)`` from functions on ``X_J(x)`` to functions on ``X_I(x)``."""
    src = {x: i for i, x in enumerate(sel[J])}
    tgt = sel[I]
    mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for a, x in enumerate(tgt):
        mat[a, src[m.project(I, J, x)]] = 1
    return mat


def _terms(delta: int) -> list[list[frozenset]]:
    """Index sets of the complex: degree k collects the ``I`` with ``|Delta - I| = k``."""
    subsets = sorted(all_subsets(delta), key=subset_key)
    return [[I for I in subsets if delta - len(I) == k] for k in range(delta + 1)]


def assemble_fundamental_complex(m: FiniteFlagModel, sel: StalkSelector, coeff_dim: int = 1, p: int | None = None) -> ChainComplex:
    """``0 -> M -> (+) LC(X_I(x), M) -> ... -> LC(X_empty(x), M) -> 0`` over ``F_p``.

    The component ``LC(X_I') -> LC(X_I)`` with ``I = I' - {alpha}`` is the
    pullback along ``p_(I, I')`` times ``(-1)^i``, where ``i`` is the 1-based
    position of ``alpha`` in ``I'``.
    """
    sel.validate(m)
    if coeff_dim < 1:
        raise ValueError("coefficient module must be nonzero")
    p = p or FiniteField(m.q).p
    delta = m.rank
    terms = _terms(delta)
    sizes = [[len(sel[I]) for I in level] for level in terms]
    dims = tuple(sum(s) * coeff_dim for s in sizes)
    diffs = []
    for k in range(delta):
        src, dst = terms[k], terms[k + 1]
        src_off = np.cumsum([0] + sizes[k])
        dst_off = np.cumsum([0] + sizes[k + 1])
        D = np.zeros((dst_off[-1], src_off[-1]), dtype=np.int64)
        for a, Ip in enumerate(src):
            order = sorted(Ip)
            for pos, alpha in enumerate(order, start=1):
                I = Ip - {alpha}
                b = dst.index(I)
                block = _pullback(m, sel, I, Ip) * (-1) ** pos
                D[dst_off[b]:dst_off[b + 1], src_off[a]:src_off[a + 1]] = block
        D %= p
        diffs.append(np.kron(D, np.eye(coeff_dim, dtype=np.int64)) % p)
    c = ChainComplex(dims, tuple(diffs), p)
    if not c.d_squared_vanishes():
        raise AssertionError("D o D != 0 in the assembled complex")
    return c


def homology_dims(c: ChainComplex) -> list[int]:
    ranks = []
    for d in c.differentials:
        if d.size > MAX_MATRIX_CELLS:
            raise CapacityError(f"differential of shape {d.shape} exceeds {MAX_MATRIX_CELLS} cells")
        ranks.append(rank_mod_p(d, c.p) if d.size else 0)
    out = []
    for k, dim in enumerate(c.dims):
        outgoing = ranks[k] if k < len(ranks) else 0
        incoming = ranks[k - 1] if k >= 1 else 0
        out.append(dim - outgoing - incoming)
    return out


def stalk_dimension(m: FiniteFlagModel, sel: StalkSelector, I, coeff_dim: int = 1) -> int:
    sel.validate(m)
    return len(sel[I]) * coeff_dim


def e1_page(m: FiniteFlagModel, sel: StalkSelector) -> list[int]:
    """``E_1^(p,0)`` for ``p = 0 .. |Delta| - 1``; the rows ``q > 0`` vanish on finite models."""
    sel.validate(m)
    delta = m.rank
    return [
        sum(len(sel[I]) for I in all_subsets(delta) if delta - len(I) == p + 1)
        for p in range(delta)
    ]


def e1_euler_identity(page: Sequence[int], top_homology: int, delta: int) -> bool:
    """``sum (-1)^p E_1^(p,0) = 1 - (-1)^|Delta| h_top`` when only the top slot has homology."""
    return sum((-1) ** p * e for p, e in enumerate(page)) == 1 - (-1) ** delta * top_homology


def extend_disjoint_cover(X: Iterable, F: Iterable, cover: Sequence[Iterable]) -> list[frozenset]:
    """Extend a disjoint cover of ``F`` to one of ``X``.

    Each part of the cover is kept and the points of ``X - F`` are absorbed
    into the part containing the smallest point (or form the single part when
    ``F`` is empty).
    """
    X, F = frozenset(X), frozenset(F)
    parts = [frozenset(c) for c in cover]
    if not F <= X:
        raise ValueError("F is not a subset of X")
    if any(not c for c in parts):
        raise ValueError("cover parts must be nonempty")
    seen: set = set()
    for c in parts:
        if c & seen:
            raise ValueError("cover parts overlap")
        seen |= c
    if seen != F:
        raise ValueError("cover does not have union F")
    rest = X - F
    if not parts:
        return [X] if X else []
    try:
        parts.sort(key=min)
    except TypeError:
        parts.sort(key=lambda c: sorted(map(repr, c)))
    if rest:
        parts[0] = parts[0] | rest
    return parts
