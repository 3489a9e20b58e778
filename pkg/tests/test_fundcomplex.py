from math import comb

import numpy as np
import pytest

from periodlab.exactnum import CapacityError
from periodlab.fundcomplex import (
    ChainComplex,
    StalkSelector,
    all_subsets,
    assemble_fundamental_complex,
    build_finite_flag_model,
    coset_count,
    e1_euler_identity,
    e1_page,
    extend_disjoint_cover,
    homology_dims,
    stalk_dimension,
)

EMPTY = frozenset()


def test_model_counts():
    m = build_finite_flag_model(2, 3)
    assert m.size(EMPTY) == 4 and m.size({0}) == 1
    m = build_finite_flag_model(3, 2)
    assert m.size(EMPTY) == 21 and m.size({0}) == m.size({1}) == 7
    assert build_finite_flag_model(2, 2).size(EMPTY) == 3


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2)])
def test_model_counts_match_gaussian_multinomials(n, q):
    m = build_finite_flag_model(n, q)
    for I in all_subsets(n - 1):
        assert m.size(I) == coset_count(n, q, I)


def test_model_capacity():
    with pytest.raises(CapacityError):
        build_finite_flag_model(5, 2)
    with pytest.raises(CapacityError):
        build_finite_flag_model(2, 11)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_singleton_complex_is_exact(n, q):
    m = build_finite_flag_model(n, q)
    c = assemble_fundamental_complex(m, StalkSelector.singleton(m))
    assert c.d_squared_vanishes()
    assert homology_dims(c) == [0] * len(c.dims)
    assert list(c.dims) == [comb(n - 1, k) for k in range(n)]


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_full_building_homology(n, q):
    m = build_finite_flag_model(n, q)
    c = assemble_fundamental_complex(m, StalkSelector.full(m))
    h = homology_dims(c)
    assert h == [0] * (n - 1) + [q ** (n * (n - 1) // 2)]
    assert c.euler_characteristic() == sum((-1) ** k * x for k, x in enumerate(h))


def test_complex_dims_examples():
    m = build_finite_flag_model(2, 3)
    assert assemble_fundamental_complex(m, StalkSelector.full(m)).dims == (1, 4)
    m = build_finite_flag_model(3, 2)
    assert assemble_fundamental_complex(m, StalkSelector.full(m)).dims == (1, 14, 21)


def test_coefficient_module_scales_homology():
    m = build_finite_flag_model(3, 2)
    c = assemble_fundamental_complex(m, StalkSelector.full(m), coeff_dim=2)
    assert homology_dims(c) == [0, 0, 16]


def test_trivial_complexes():
    c = ChainComplex((1,), (), 2)
    assert homology_dims(c) == [1]
    exact = ChainComplex((1, 1), (np.array([[1]]),), 3)
    assert homology_dims(exact) == [0, 0]


def test_stalk_dimension():
    m = build_finite_flag_model(2, 3)
    assert stalk_dimension(m, StalkSelector.full(m), EMPTY) == 4
    assert stalk_dimension(m, StalkSelector.singleton(m), EMPTY) == 1
    half = StalkSelector({EMPTY: m.points[EMPTY][:2], frozenset({0}): m.points[frozenset({0})]})
    assert stalk_dimension(m, half, EMPTY) == 2
    assert homology_dims(assemble_fundamental_complex(m, half)) == [0, 1]


def test_incompatible_selector_rejected():
    m = build_finite_flag_model(3, 2)
    chosen = dict(StalkSelector.singleton(m).chosen)
    other = next(x for x in m.points[EMPTY] if x != chosen[EMPTY][0]
                 and m.project(EMPTY, frozenset({0}), x) != chosen[frozenset({0})][0])
    chosen[EMPTY] = (other,)
    with pytest.raises(ValueError):
        assemble_fundamental_complex(m, StalkSelector(chosen))


def test_e1_page():
    m = build_finite_flag_model(2, 3)
    assert e1_page(m, StalkSelector.full(m)) == [4]
    m = build_finite_flag_model(3, 2)
    page = e1_page(m, StalkSelector.full(m))
    assert page == [14, 21]
    assert e1_euler_identity(page, 8, 2)
    assert e1_page(m, StalkSelector.singleton(m)) == [comb(2, p + 1) for p in range(2)]
    m = build_finite_flag_model(2, 2)
    assert e1_euler_identity(e1_page(m, StalkSelector.full(m)), 2, 1)


def _is_valid_extension(X, F, cover, out):
    X, F = frozenset(X), frozenset(F)
    parts = [frozenset(p) for p in out]
    if sorted(x for p in parts for x in p) != sorted(X):
        return False
    restricted = sorted(sorted(p & F) for p in parts if p & F)
    return restricted == sorted(sorted(c) for c in cover)


def test_extend_disjoint_cover():
    assert extend_disjoint_cover({1, 2}, {1, 2}, [{1}, {2}]) == [frozenset({1}), frozenset({2})]
    out = extend_disjoint_cover({1, 2, 3, 4}, {1, 2}, [{1}, {2}])
    assert _is_valid_extension({1, 2, 3, 4}, {1, 2}, [{1}, {2}], out)
    assert extend_disjoint_cover({1, 2, 3}, set(), []) == [frozenset({1, 2, 3})]


def test_extend_disjoint_cover_random():
    import random
    rng = random.Random(0)
    for _ in range(100):
        X = set(rng.sample(range(20), rng.randint(1, 10)))
        F = {x for x in X if rng.random() < 0.5}
        items = sorted(F)
        rng.shuffle(items)
        cover, i = [], 0
        while i < len(items):
            k = rng.randint(1, len(items) - i)
            cover.append(set(items[i:i + k]))
            i += k
        assert _is_valid_extension(X, F, cover, extend_disjoint_cover(X, F, cover))
