import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import make_table
from divindex import (
    GroupDistribution,
    Hierarchy,
    between_district_scores,
    decompose_divergence,
    decompose_entropy_supergroups,
    decompose_info_theory,
    divergence_overall,
    entropy,
    info_theory_overall,
)
from divindex.errors import DegenerateRegion, DimensionMismatch, EmptyDistrictWarning, InputError


def random_partition(rng, n_units, n_districts):
    labels = rng.integers(0, n_districts, size=n_units)
    return Hierarchy({f"u{i}": f"d{labels[i]}" for i in range(n_units)})


def random_rows(rng, n_units, n_groups):
    rows = rng.integers(0, 300, size=(n_units, n_groups)).astype(float)
    rows[:, 0] += 1
    rows[:, 1] += 1
    return rows


# degenerate partitions ----------------------------------------------------------

def test_single_district_is_all_within(rng):
    t = make_table(random_rows(rng, 30, 3))
    for decompose in (decompose_divergence, decompose_info_theory):
        rep = decompose(t, Hierarchy.single(t))
        assert rep.between == pytest.approx(0.0, abs=1e-14)
        assert rep.within_total == pytest.approx(rep.total, abs=1e-12)


def test_singleton_districts_are_all_between(rng):
    t = make_table(random_rows(rng, 30, 3))
    for decompose in (decompose_divergence, decompose_info_theory):
        rep = decompose(t, Hierarchy.singletons(t))
        assert rep.within_total == pytest.approx(0.0, abs=1e-14)
        assert rep.between == pytest.approx(rep.total, abs=1e-12)


# additivity -----------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 120), st.integers(2, 6), st.integers(1, 8))
def test_additivity_random(seed, n_units, n_groups, n_districts):
    rng = np.random.default_rng(seed)
    rows = random_rows(rng, n_units, n_groups)
    rows[rng.random(n_units) < 0.1] = 0
    if rows.sum() == 0:
        rows[0] = 1
    t = make_table(rows)
    h = random_partition(rng, n_units, n_districts)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyDistrictWarning)
        d = decompose_divergence(t, h)
        i = decompose_info_theory(t, h)
    assert d.additivity_residual < 1e-9
    assert i.additivity_residual < 1e-9
    assert d.total == pytest.approx(oracles.divergence(rows.tolist()), abs=1e-12)
    assert i.total == pytest.approx(oracles.info_theory(rows.tolist()), abs=1e-11)
    for c in d.per_district:
        assert c.raw_between >= 0 and c.raw_within >= 0
        assert c.weighted_between == pytest.approx(c.population_share * c.raw_between, abs=1e-15)


def test_divergence_components_match_oracle(rng):
    rows = random_rows(rng, 12, 3)
    labels = ["a"] * 5 + ["b"] * 7
    t = make_table(rows, districts=labels)
    rep = decompose_divergence(t, Hierarchy.from_table(t))
    pi = oracles.overall(rows.tolist())
    T = rows.sum()
    for name, sl in (("a", slice(0, 5)), ("b", slice(5, 12))):
        sub = rows[sl].tolist()
        pj = oracles.overall(sub)
        Tj = rows[sl].sum()
        c = rep.component(name)
        assert c.raw_between == pytest.approx(oracles.kl(pj, pi), abs=1e-13)
        assert c.raw_within == pytest.approx(oracles.divergence(sub), abs=1e-13)
        assert c.population_share == pytest.approx(Tj / T, abs=1e-15)


def test_info_theory_components_match_oracle(rng):
    rows = random_rows(rng, 12, 3)
    labels = ["a"] * 5 + ["b"] * 7
    t = make_table(rows, districts=labels)
    rep = decompose_info_theory(t, Hierarchy.from_table(t))
    E = oracles.entropy(oracles.overall(rows.tolist()))
    T = rows.sum()
    for name, sl in (("a", slice(0, 5)), ("b", slice(5, 12))):
        sub = rows[sl].tolist()
        Ej = oracles.entropy(oracles.overall(sub))
        Tj = rows[sl].sum()
        c = rep.component(name)
        assert c.raw_between == pytest.approx((E - Ej) / E, abs=1e-13)
        assert c.raw_within == pytest.approx(oracles.info_theory(sub), abs=1e-12)
        assert c.weighted_within == pytest.approx(Tj * Ej / (T * E) * oracles.info_theory(sub), abs=1e-13)


def test_unit_order_does_not_matter(rng):
    rows = random_rows(rng, 40, 4)
    labels = [f"d{k % 3}" for k in range(40)]
    perm = rng.permutation(40)
    a = make_table(rows, districts=labels)
    b = make_table(rows[perm], ids=tuple(f"u{k}" for k in perm), districts=[labels[k] for k in perm])
    for decompose in (decompose_divergence, decompose_info_theory):
        ra = decompose(a, Hierarchy.from_table(a))
        rb = decompose(b, Hierarchy.from_table(b))
        assert ra.total == pytest.approx(rb.total, abs=1e-13)
        for c in ra.per_district:
            assert rb.component(c.district_id).weighted_within == pytest.approx(c.weighted_within, abs=1e-13)


def test_coarsening_moves_within_to_between(rng):
    # merging districts can only turn between-variation into within-variation
    rows = random_rows(rng, 60, 3)
    fine = Hierarchy({f"u{i}": f"d{i % 6}" for i in range(60)})
    coarse = Hierarchy({f"u{i}": f"d{i % 2}" for i in range(60)})
    t = make_table(rows)
    f = decompose_divergence(t, fine)
    c = decompose_divergence(t, coarse)
    assert c.between <= f.between + 1e-12
    assert c.total == f.total


def test_empty_district_warns_and_is_dropped():
    t = make_table([[10, 5], [0, 0], [3, 9]], districts=("a", "b", "c"))
    with pytest.warns(EmptyDistrictWarning, match="'b'"):
        rep = decompose_divergence(t, Hierarchy.from_table(t))
    assert [c.district_id for c in rep.per_district] == ["a", "c"]
    assert rep.additivity_residual < 1e-12


def test_single_group_district_within_is_zero():
    t = make_table([[10, 0], [20, 0], [5, 5], [1, 9]], districts=("a", "a", "b", "b"))
    rep = decompose_info_theory(t, Hierarchy.from_table(t))
    assert rep.component("a").raw_within == 0.0
    assert rep.additivity_residual < 1e-12


def test_info_theory_decomposition_degenerate_region():
    t = make_table([[10, 0], [20, 0]], districts=("a", "b"))
    with pytest.raises(DegenerateRegion):
        decompose_info_theory(t, Hierarchy.from_table(t))


def test_shares_undefined_for_zero_total():
    t = make_table([[30, 10], [60, 20]], districts=("a", "b"))
    rep = decompose_divergence(t, Hierarchy.from_table(t))
    with pytest.raises(DegenerateRegion):
        rep.shares()


# Detroit ----------------------------------------------------------------------

def test_detroit_fixture_shares(detroit):
    t, h = detroit.table, detroit.hierarchy
    d = decompose_divergence(t, h).shares()
    assert d["between"] == pytest.approx(0.63, abs=0.01)
    assert d["districts"]["detroit"]["between"] == pytest.approx(0.50, abs=0.01)
    assert d["districts"]["suburbs"]["between"] == pytest.approx(0.14, abs=0.01)
    assert d["districts"]["detroit"]["within"] == pytest.approx(0.05, abs=0.01)
    assert d["districts"]["suburbs"]["within"] == pytest.approx(0.32, abs=0.01)
    i = decompose_info_theory(t, h).shares()
    assert i["districts"]["detroit"]["between"] == pytest.approx(0.13, abs=0.01)
    assert i["districts"]["suburbs"]["between"] == pytest.approx(0.50, abs=0.01)


def test_between_scores_from_summary_data():
    s = between_district_scores([(0.09, 0.91), (0.88, 0.12)], [0.17, 0.83], reference=(0.75, 0.25),
                                district_ids=("detroit", "suburbs"))
    np.testing.assert_allclose(s.raw_divergence, [oracles.kl([0.09, 0.91], [0.75, 0.25]),
                                                  oracles.kl([0.88, 0.12], [0.75, 0.25])], atol=1e-14)
    E = oracles.entropy([0.75, 0.25])
    assert s.region_entropy == pytest.approx(E, abs=1e-15)
    assert s.raw_info_theory[0] == pytest.approx((E - oracles.entropy([0.09, 0.91])) / E, abs=1e-14)
    with pytest.raises(DimensionMismatch):
        between_district_scores([(0.5, 0.5)], [0.5, 0.5])


def test_between_scores_default_reference_is_weighted_mean():
    s = between_district_scores([(0.2, 0.8), (0.6, 0.4)], [0.5, 0.5])
    direct = between_district_scores([(0.2, 0.8), (0.6, 0.4)], [0.5, 0.5], reference=(0.4, 0.6))
    np.testing.assert_allclose(s.raw_divergence, direct.raw_divergence, atol=1e-15)


# supergroups ----------------------------------------------------------------

@settings(max_examples=200)
@given(st.integers(2, 9), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_supergroup_additivity(m, k, seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(m))
    labels = [f"s{x}" for x in rng.integers(0, k, size=m)]
    rep = decompose_entropy_supergroups(p, labels)
    assert abs(rep.total - (rep.between + rep.within_total)) < 1e-12
    b, w = oracles.supergroup_parts(p.tolist(), labels)
    assert rep.between == pytest.approx(b, abs=1e-13)
    assert rep.within_total == pytest.approx(w, abs=1e-13)


def test_supergroup_mapping_and_zero_shares():
    p = GroupDistribution((0.5, 0.0, 0.25, 0.25), ("w", "x", "b", "h"))
    rep = decompose_entropy_supergroups(p, {"w": "white", "x": "other", "b": "nonwhite", "h": "nonwhite"})
    assert [c.district_id for c in rep.per_district] == ["white", "nonwhite"]
    assert rep.between == pytest.approx(1.0, abs=1e-15)
    assert rep.component("nonwhite").raw_within == pytest.approx(1.0, abs=1e-15)
    assert rep.total == pytest.approx(float(entropy(p)), abs=1e-15)
    with pytest.raises(InputError):
        decompose_entropy_supergroups(p, {"w": "a"})
    with pytest.raises(DimensionMismatch):
        decompose_entropy_supergroups(p, ["a", "b"])


def test_report_totals_match_direct_indexes(detroit):
    t = detroit.table
    assert decompose_divergence(t, detroit.hierarchy).total == divergence_overall(t)
    assert decompose_info_theory(t, detroit.hierarchy).total == info_theory_overall(t)
