from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from periodlab.polygons import (
    Polygon,
    characteristic_polynomial,
    hodge_polygon,
    newton_polygon_from_charpoly,
    p_adic_valuation,
    polygon_compare,
    polygon_from_slopes,
)

slope_lists = st.lists(st.builds(F, st.integers(-30, 30), st.integers(1, 6)), min_size=1, max_size=6)


def verts(poly):
    return [(x, y) for x, y in poly.vertices]


def test_slopes_examples():
    assert verts(polygon_from_slopes([0, 0])) == [(0, 0), (1, 0), (2, 0)]
    assert verts(polygon_from_slopes([F(1, 2), F(1, 2)])) == [(0, 0), (1, F(1, 2)), (2, 1)]
    assert verts(polygon_from_slopes([1, -1, -1])) == [(0, 0), (1, -1), (2, -2), (3, -1)]


def test_hodge_examples():
    assert verts(hodge_polygon([(1, 1), (-1, 1)])) == [(0, 0), (1, -1), (2, 0)]
    assert verts(hodge_polygon([(0, 4)]))[-1] == (4, 0)
    assert verts(hodge_polygon([(2, 1), (-1, 2)])) == [(0, 0), (1, -1), (2, -2), (3, 0)]


def test_hodge_rejects_bad_types():
    with pytest.raises(ValueError):
        hodge_polygon([(1, 1), (1, 2)])
    with pytest.raises(ValueError):
        hodge_polygon([(1, 0)])


def test_newton_examples():
    assert verts(newton_polygon_from_charpoly([[2, 0], [0, 1]], 2)) == [(0, 0), (1, 0), (2, 1)]
    assert newton_polygon_from_charpoly([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 5).slopes() == [0, 0, 0]
    assert newton_polygon_from_charpoly([[0, 3], [1, 0]], 3).slopes() == [F(1, 2), F(1, 2)]


def test_newton_rejects_singular_and_non_prime():
    with pytest.raises(ValueError):
        newton_polygon_from_charpoly([[0, 0], [0, 1]], 2)
    with pytest.raises(ValueError):
        newton_polygon_from_charpoly([[1]], 4)


def test_charpoly_matches_sympy():
    import sympy
    b = [[1, 2, 0], [F(1, 3), 0, 4], [5, -1, 2]]
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.Matrix(b).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    assert characteristic_polynomial(b) == [F(int(c.p), int(c.q)) for c in expected]


def test_valuation():
    assert p_adic_valuation(F(12, 5), 2) == 2
    assert p_adic_valuation(F(3, 8), 2) == -3
    assert p_adic_valuation(F(0), 3) is None


def test_compare_examples():
    p = polygon_from_slopes([0, 1])
    assert polygon_compare(p, p) == (True, True)
    q = polygon_from_slopes([0, 0])
    assert polygon_compare(p, q) == (True, False)
    assert polygon_compare(q, polygon_from_slopes([-1, 1])) == (True, True)
    newton = newton_polygon_from_charpoly([[2, 0], [0, 1]], 2)
    assert polygon_compare(newton, hodge_polygon([(1, 1), (0, 1)])) == (True, True)


def test_compare_rank_mismatch():
    with pytest.raises(ValueError):
        polygon_compare(polygon_from_slopes([0]), polygon_from_slopes([0, 0]))


def test_non_convex_rejected():
    with pytest.raises(ValueError):
        Polygon(((0, 0), (1, 1), (2, 1)))


@given(slope_lists, st.randoms())
def test_permutation_invariance_and_convexity(slopes, rnd):
    shuffled = list(slopes)
    rnd.shuffle(shuffled)
    p = polygon_from_slopes(slopes)
    assert p == polygon_from_slopes(shuffled)
    s = p.slopes()
    assert all(a <= b for a, b in zip(s, s[1:]))
    assert Polygon.from_json(p.to_json()) == p


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4))
def test_diagonal_newton_slopes_are_valuations(exps):
    b = [[F(3) ** exps[i] if i == j else 0 for j in range(len(exps))] for i in range(len(exps))]
    assert newton_polygon_from_charpoly(b, 3).slopes() == sorted(exps)
