import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_table
from divindex import (
    correlate_regions,
    equivalence_diagnostics,
    spatially_weighted_table,
    sweep_local_indexes,
    uniform_kernel,
)
from divindex.analysis import pearson, spearman
from divindex.datasets import random_table
from divindex.errors import DegenerateRegion, InputError


# sweep -----------------------------------------------------------------------

def test_sweep_shape_and_grid():
    c = sweep_local_indexes((0.75, 0.25))
    assert c.local_p1.shape == (101,)
    assert c.local_p1[0] == 0.0 and c.local_p1[-1] == 1.0
    assert c.local_p1[75] == 0.75
    assert len(list(c.rows())) == 102


def test_sweep_zeros():
    c = sweep_local_indexes((0.75, 0.25))
    assert c.divergence[75] == 0.0
    assert np.all(np.delete(c.divergence, 75) > 0)
    assert c.info_theory[25] == pytest.approx(0.0, abs=1e-15)
    assert c.info_theory[75] == pytest.approx(0.0, abs=1e-15)
    assert c.info_theory[0] == 1.0 and c.info_theory[100] == 1.0
    assert c.info_theory[50] == pytest.approx(-0.2326, abs=5e-5)


@pytest.mark.parametrize("overall", [(0.5, 0.5), (0.75, 0.25), (0.9, 0.1), (0.3, 0.7)])
def test_sweep_curves_are_convex(overall):
    c = sweep_local_indexes(overall, steps=1001)
    for y in (c.divergence, c.info_theory):
        assert np.all(np.diff(y, 2) >= -1e-12)


def test_sweep_info_theory_is_symmetric():
    c = sweep_local_indexes((0.9, 0.1))
    np.testing.assert_allclose(c.info_theory, c.info_theory[::-1], atol=1e-14)


def test_sweep_validation():
    with pytest.raises(InputError):
        sweep_local_indexes((0.2, 0.3, 0.5))
    with pytest.raises(InputError):
        sweep_local_indexes((0.5, 0.5), steps=2)
    with pytest.raises(DegenerateRegion):
        sweep_local_indexes((1.0, 0.0))


# correlation ----------------------------------------------------------------

def test_pearson_basics():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert pearson([1, 1, 1], [1, 2, 3]) is None
    assert pearson([1], [2]) is None
    assert spearman([1, 2, 3], [1, 4, 9]) == pytest.approx(1.0)
    with pytest.raises(InputError):
        pearson([1, 2], [1, 2, 3])


@settings(max_examples=200)
@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=3, max_size=40),
       st.floats(0.1, 10), st.floats(-100, 100))
def test_pearson_symmetric_and_affine_invariant(pts, a, b):
    x, y = np.array(pts).T
    r = pearson(x, y)
    if r is None:
        return
    assert -1 <= r <= 1
    assert pearson(y, x) == pytest.approx(r, abs=1e-9)
    r2 = pearson(a * x + b, y)
    if r2 is not None:
        assert r2 == pytest.approx(r, abs=1e-6)


def test_correlate_flags_instead_of_crashing(rng):
    good = random_table(rng, 30, 2, concentration=0.5)
    flat = make_table([[30, 10]] * 5)
    single = make_table([[10, 0], [20, 0], [5, 0]])
    tiny = make_table([[5, 1], [1, 5]])
    rep = correlate_regions([good, flat, single, tiny], region_ids=["good", "flat", "single", "tiny"])
    by = {c.region_id: c for c in rep.per_region}
    assert -1 <= by["good"].pearson_r <= 1
    assert by["flat"].pearson_r is None and "zero variance" in by["flat"].flag
    assert by["single"].pearson_r is None and "undefined" in by["single"].flag
    assert by["tiny"].pearson_r is None and "insufficient" in by["tiny"].flag
    assert rep.cross_region is not None
    assert [c.region_id for c in rep.per_region] == ["good", "flat", "single", "tiny"]


def test_correlate_threads_preserve_order(rng):
    regions = [random_table(rng, 20, 3) for _ in range(12)]
    a = correlate_regions(regions)
    b = correlate_regions(regions, max_workers=4)
    assert a == b


def test_correlate_rejects_unknown_index():
    with pytest.raises(InputError):
        correlate_regions([make_table([[1, 2]])], pair=("divergence", "gini"))


def test_cross_region_needs_two_regions(rng):
    rep = correlate_regions([random_table(rng, 10, 2)])
    assert rep.cross_region is None and rep.flags


# equivalence ------------------------------------------------------------------

def test_equivalence_holds_for_partitions(rng):
    d = equivalence_diagnostics(random_table(rng, 40, 3))
    assert d.conditions_hold
    assert d.residual_h_ratio < 1e-12 and d.residual_d_product < 1e-12 and d.residual_d_entropy_gap < 1e-12


def test_equivalence_fails_under_overlap(hyper_table):
    s = spatially_weighted_table(hyper_table, uniform_kernel(hyper_table, 1.0))
    d = equivalence_diagnostics(s)
    assert not d.conditions_hold
    assert d.info_theory < 0 and d.divergence >= 0
    assert d.mean_local_entropy > d.overall_entropy
    assert d.residual_h_ratio > 0.1
    assert "exceeds" in d.note


def test_equivalence_single_group_region():
    d = equivalence_diagnostics(make_table([[10, 0], [30, 0]]))
    assert d.divergence == 0.0 and d.overall_entropy == 0.0
    assert d.info_theory is None
    assert "limit" in d.note
