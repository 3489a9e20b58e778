"""Newton and Hodge polygons.

Both kinds are stored the same way: lower convex, anchored at the origin,
one vertex per unit step in ``x``, slopes weakly increasing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import parse_rational


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        vs = tuple((Fraction(x), Fraction(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs or vs[0] != (0, 0):
            raise ValueError("a polygon starts at (0, 0)")
        xs = [x for x, _ in vs]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("polygon vertices must be strictly increasing in x")
        s = self.slopes()
        if any(b < a for a, b in zip(s, s[1:])):
            raise ValueError(f"polygon is not convex: slopes {s}")

    @property
    def length(self) -> Fraction:
        return self.vertices[-1][0]

    @property
    def endpoint(self) -> tuple[Fraction, Fraction]:
        return self.vertices[-1]

    def slopes(self) -> list[Fraction]:
        vs = self.vertices
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(vs, vs[1:])]

    def __call__(self, x) -> Fraction:
        """Height of the polygon at ``x`` (linear interpolation)."""
        x = Fraction(x)
        vs = self.vertices
        if x < 0 or x > self.length:
            raise ValueError(f"x={x} outside [0, {self.length}]")
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return vs[-1][1]

    def to_json(self) -> list[list[int]]:
        return [[x.numerator, x.denominator, y.numerator, y.denominator] for x, y in self.vertices]

    @classmethod
    def from_json(cls, data) -> Polygon:
        return cls(tuple((Fraction(a, b), Fraction(c, d)) for a, b, c, d in data))


def polygon_from_slopes(slopes: Iterable) -> Polygon:
    """Vertex ``k`` is ``(k, sum of the k smallest slopes)``."""
    ordered = sorted(parse_rational(s) for s in slopes)
    if not ordered:
        raise ValueError("cannot build a polygon from no slopes")
    verts = [(Fraction(0), Fraction(0))]
    for k, s in enumerate(ordered, start=1):
        verts.append((Fraction(k), verts[-1][1] + s))
    return Polygon(tuple(verts))


def hodge_polygon(filtration_type: Sequence[tuple]) -> Polygon:
    """Hodge polygon of a filtration type given as ``(jump, multiplicity)`` pairs."""
    jumps = [parse_rational(j) for j, _ in filtration_type]
    dup = [j for j, c in Counter(jumps).items() if c > 1]
    if dup:
        raise ValueError(f"repeated jumps in filtration type: {dup}")
    slopes = []
    for jump, mult in zip(jumps, (m for _, m in filtration_type)):
        if int(mult) != mult or mult <= 0:
            raise ValueError(f"multiplicity of jump {jump} must be a positive integer")
        slopes += [jump] * int(mult)
    return polygon_from_slopes(slopes)


def p_adic_valuation(x: Fraction, p: int) -> int | None:
    """``v_p(x)``; ``None`` stands for the valuation of zero."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def characteristic_polynomial(b: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients ``[c_0, ..., c_n]`` of ``det(X - b)`` (Faddeev-LeVerrier, exact)."""
    n = len(b)
    a = [[Fraction(x) for x in row] for row in b]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # m <- a*m + c_{n-k+1} I
        am = [[sum(a[i][l] * m[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            am[i][i] += coeffs[n - k + 1]
        m = am
        am = [[sum(a[i][l] * m[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
    return coeffs


def lower_convex_hull(points: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    pts = sorted(points)
    hull: list[tuple[Fraction, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y1 - y0) * (pt[0] - x0) >= (pt[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_from_charpoly(b: Sequence[Sequence], p: int) -> Polygon:
    """Newton polygon of ``(Q_p^n, b * sigma)`` for a rational matrix ``b``."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = len(b)
    if n == 0 or any(len(row) != n for row in b):
        raise ValueError("b must be a nonempty square matrix")
    c = characteristic_polynomial(b)
    if c[0] == 0:
        raise ValueError("b is singular")
    points = []
    for i in range(n + 1):
        v = p_adic_valuation(c[n - i], p)
        if v is not None:
            points.append((Fraction(i), Fraction(v)))
    hull = lower_convex_hull(points)
    slopes = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        slopes += [(y1 - y0) / (x1 - x0)] * int(x1 - x0)
    return polygon_from_slopes(slopes)


def polygon_compare(upper: Polygon, lower: Polygon) -> tuple[bool, bool]:
    """``(upper lies on or above lower, endpoints agree)``."""
    if upper.length != lower.length:
        raise ValueError(f"rank mismatch: {upper.length} vs {lower.length}")
    xs = sorted({x for x, _ in upper.vertices} | {x for x, _ in lower.vertices})
    above = all(upper(x) >= lower(x) for x in xs)
    return above, upper.endpoint == lower.endpoint
