from fractions import Fraction as F

import pytest

from periodlab.exactnum import CapacityError
from periodlab.fundcomplex import all_subsets, coset_count
from periodlab.periodcoh import (
    DegreeFunction,
    DegreeRuleError,
    PeriodDatum,
    calibrate_degree_function,
    cohomology_table,
    degree_constraints,
    drinfeld_datum,
    duality_report,
    flag_dimension,
    flag_dimension_diagnostic,
    i_set,
    solve_degree_rule,
    steinberg_dimension,
    steinberg_index,
    table_caveats,
)
from periodlab.rootdata import RootDatum, WeylElement, identity, kostant_representatives

RULE = DegreeFunction(1, 1, 0)


def test_flag_dimension():
    assert flag_dimension(RootDatum(2), (1, -1)) == 1
    assert flag_dimension(RootDatum(3), (2, -1, -1)) == 2
    assert flag_dimension(RootDatum(3), (1, 1, 1)) == 0
    assert flag_dimension(RootDatum(4), (1, 0, 0, -1)) == 5
    diag = flag_dimension_diagnostic(RootDatum(3), (2, -1, -1), (0, 0, 0))
    assert diag == {"dim_G_over_P_mu": 2, "two_rho_nu_b": 0}


def test_i_set_examples():
    rd = RootDatum(2)
    assert i_set(identity(2), (1, -1), (0, 0), rd) == frozenset()
    assert i_set(WeylElement((1, 0)), (1, -1), (0, 0), rd) == frozenset({0})
    assert i_set(identity(2), (1, 1), (1, 1), rd) == frozenset({0})


def test_i_set_properties():
    for n in (2, 3, 4):
        rd = RootDatum(n)
        mu = tuple(range(n - 1, -1, -1))
        shift = F(sum(mu), n)
        mu0 = tuple(x - shift for x in mu)
        assert i_set(identity(n), mu0, (0,) * n, rd) == frozenset()
        for w in kostant_representatives(rd, mu0):
            wm = w.act(mu0)
            if all(a <= b for a, b in zip(wm, wm[1:])):
                assert i_set(w, mu0, (0,) * n, rd) == frozenset(range(n - 1))


def test_full_index_set_without_antidominance():
    # (-1, 1, 0) is not antidominant, yet its partial sums are <= 0
    rd = RootDatum(3)
    w = next(w for w in kostant_representatives(rd, (1, 0, -1)) if w.act((1, 0, -1)) == (-1, 1, 0))
    assert i_set(w, (1, 0, -1), (0, 0, 0), rd) == frozenset({0, 1})


def test_steinberg_examples():
    assert steinberg_dimension(2, 3, {0}) == 1
    assert steinberg_dimension(2, 3, set()) == 3
    assert steinberg_dimension(3, 2, set()) == 8


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (4, 2)])
def test_steinberg_inclusion_exclusion(n, q):
    subsets = all_subsets(n - 1)
    dims = {I: steinberg_dimension(n, q, I) for I in subsets}
    assert dims[frozenset()] == q ** (n * (n - 1) // 2)
    for I in subsets:
        assert sum(dims[J] for J in subsets if I <= J) == coset_count(n, q, I)


def test_steinberg_capacity():
    with pytest.raises(CapacityError):
        steinberg_dimension(5, 2, set())


def test_period_datum_validation():
    with pytest.raises(ValueError):
        PeriodDatum(RootDatum(2), (-1, 1), (0, 0))
    with pytest.raises(ValueError):
        PeriodDatum(RootDatum(2), (1, -1), (1, 0))
    with pytest.raises(ValueError):
        PeriodDatum(RootDatum(2), (1, -1), (F(1, 2), F(1, 2)), s=1)
    pd = PeriodDatum(RootDatum(2), (1, -1), (F(1, 2), F(1, 2)), s=2)
    assert PeriodDatum.from_json(pd.to_json()) == pd


def test_drinfeld_tables():
    t1 = cohomology_table(drinfeld_datum(1), RULE)
    assert [(s.cohomological_degree, s.I_set, s.rho_twist) for s in t1] == [(0, {0}, -1), (1, set(), 0)]
    t2 = cohomology_table(drinfeld_datum(2), RULE)
    assert [(s.cohomological_degree, s.I_set) for s in t2] == [(0, {0, 1}), (1, {0}), (2, set())]


def test_central_mu_single_summand():
    pd = PeriodDatum(RootDatum(3), (1, 1, 1), (1, 1, 1))
    (s,) = cohomology_table(pd, RULE)
    assert s.cohomological_degree == 0 and s.I_set == {0, 1}


def test_out_of_range_degree_raises():
    with pytest.raises(DegreeRuleError):
        cohomology_table(drinfeld_datum(1), DegreeFunction(1, 1, 5))


def test_table_invariant_under_galois_relabelling():
    rd = RootDatum(3)
    mu = (1, 0, -1)
    reps = kostant_representatives(rd, mu)
    ones = [i for i, w in enumerate(reps) if w.length == 1]
    g = list(range(len(reps)))
    g[ones[0]], g[ones[1]] = ones[1], ones[0]
    pd = PeriodDatum(rd, mu, (0, 0, 0), galois=tuple(g))
    table = cohomology_table(pd, RULE)
    assert len(table) == 5
    assert sorted(s.orbit_size for s in table) == [1, 1, 1, 1, 2]
    (pair,) = [s for s in table if s.orbit_size == 2]
    assert set(pair.member_i_sets) == {frozenset({0}), frozenset({1})}
    assert any("mixes" in c for c in table_caveats(pd, table))
    assert not any("mixes" in c for c in table_caveats(pd, cohomology_table(drinfeld_datum(2), RULE)))


def test_table_invariant_under_rep_order():
    rd = RootDatum(3)
    pd = PeriodDatum(rd, (1, 0, -1), (0, 0, 0))
    n = len(kostant_representatives(rd, pd.mu))
    base = cohomology_table(pd, RULE)
    shifted = PeriodDatum(rd, pd.mu, pd.nu_b, galois=tuple(range(n)))
    assert [s.cohomological_degree for s in cohomology_table(shifted, RULE)] == [
        s.cohomological_degree for s in base]
    assert len(base) == n


def test_non_integral_slope_caveat():
    pd = PeriodDatum(RootDatum(2), (1, 0), (F(1, 2), F(1, 2)), s=2)
    assert any("non-split" in c for c in table_caveats(pd))


def test_calibration():
    assert calibrate_degree_function(3) == DegreeFunction(1, 1, 0, tag="calibrated")
    assert calibrate_degree_function(4) == DegreeFunction(1, 1, 0, tag="calibrated")
    assert degree_constraints(drinfeld_datum(1)) == [(0, 1, 1), (1, 1, 2)]
    with pytest.raises(DegreeRuleError) as err:
        calibrate_degree_function(2)
    assert (1, 1, 0) in err.value.candidates


def test_central_mu_is_under_determined():
    central = PeriodDatum(RootDatum(2), (0, 0), (0, 0))
    with pytest.raises(DegreeRuleError) as err:
        solve_degree_rule(degree_constraints(central))
    assert len(err.value.candidates) > 1


def test_steinberg_index():
    assert steinberg_index(2, 0) == {0, 1}
    assert steinberg_index(2, 2) == frozenset()
    with pytest.raises(ValueError):
        steinberg_index(2, 3)


def test_duality_examples():
    rep = duality_report(cohomology_table(drinfeld_datum(1), RULE), 1)
    assert rep.occupied == [0, 1] and rep.dual_slots == [1, 2]
    assert [p["dual_from_compact_support"] for p in rep.pairs] == [True, True]
    assert duality_report([], 2).pairs == []
    (s,) = [s for s in cohomology_table(drinfeld_datum(2), RULE) if s.cohomological_degree == 2]
    rep = duality_report([s], 2)
    assert rep.pairs[0]["self_paired"]


def test_duality_dimensions():
    rep = duality_report(cohomology_table(drinfeld_datum(2), RULE), 2, q=2)
    assert [p["dimension"] for p in rep.pairs] == [1, 6, 8]
    assert rep.euler_characteristic == 1 - 6 + 8
