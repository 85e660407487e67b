"""Bundled and generated example data.

``detroit_wb_synthetic.csv`` is a *synthetic* white/black tract table for a
city ("detroit") inside a metro area ("suburbs" for the rest). It is not
census data. Tract compositions follow beta quantiles whose parameters were
solved so that the city share of the metro population, the two district
compositions, and the overall and average local entropies round to the
published 2010 white-black figures for Detroit (overall entropy 0.42 city,
0.81 metro; average local entropy 0.29 and 0.33; base 2). Coordinates are
a stylized layout in kilometres: the city is a disc, the suburbs a ring.
"""

from __future__ import annotations

from importlib import resources

import numpy as np
from scipy import optimize, stats

from ..io import parse_region_text
from ..popcore import GroupSet, UnitTable

DETROIT_FILE = "detroit_wb_synthetic.csv"

# targets the synthetic tracts are calibrated to (base-2 logs)
DETROIT_TARGETS = {
    "city_population": 642_400,
    "suburb_population": 3_245_700,
    "city_white_share": 0.0862,
    "metro_white_share": 0.7503,
    "city_mean_local_entropy": 0.2875,
    "suburb_mean_local_entropy": 0.3402,
    "city_tracts": 170,
    "suburb_tracts": 850,
}


def load_detroit_synthetic():
    """Return the bundled synthetic Detroit tract fixture as a ``RegionFile``."""
    text = resources.files(__package__).joinpath(DETROIT_FILE).read_text(encoding="utf-8")
    return parse_region_text(text, path=DETROIT_FILE)


def _binary_entropy(p):
    out = np.zeros_like(p)
    for q in (p, 1.0 - p):
        pos = q > 0
        out[pos] -= q[pos] * np.log2(q[pos])
    return out


def _calibrated_district(n, total, white_share, mean_entropy):
    k = np.arange(n)
    pop = 2200.0 + 3600.0 * ((k * 0.6180339887) % 1.0)
    pop *= total / pop.sum()
    q = (k + 0.5) / n

    def resid(x):
        s = stats.beta.ppf(q, *np.exp(x))
        return [np.dot(pop, s) / total - white_share,
                np.dot(pop, _binary_entropy(s)) / total - mean_entropy]

    x, _, ok, msg = optimize.fsolve(resid, [0.0, 1.0], full_output=True)
    if ok != 1:
        raise RuntimeError(f"calibration failed: {msg}")
    share = stats.beta.ppf(q, *np.exp(x))
    white = np.round(pop * share)
    return np.column_stack([white, np.round(pop) - white])


def build_detroit_synthetic() -> UnitTable:
    """Regenerate the synthetic Detroit fixture from ``DETROIT_TARGETS``."""
    t = DETROIT_TARGETS
    n_c, n_s = t["city_tracts"], t["suburb_tracts"]
    suburb_share = (t["metro_white_share"] * (t["city_population"] + t["suburb_population"])
                    - t["city_white_share"] * t["city_population"]) / t["suburb_population"]
    city = _calibrated_district(n_c, t["city_population"], t["city_white_share"],
                                t["city_mean_local_entropy"])
    sub = _calibrated_district(n_s, t["suburb_population"], suburb_share,
                               t["suburb_mean_local_entropy"])
    golden = np.pi * (3.0 - np.sqrt(5.0))
    # whiter tracts sit farther out in both districts
    r = np.concatenate([10.0 * np.sqrt((np.arange(n_c) + 0.5) / n_c),
                        10.0 + 30.0 * np.sqrt((np.arange(n_s) + 0.5) / n_s)])
    theta = golden * np.arange(n_c + n_s)
    coords = np.round(np.column_stack([r * np.cos(theta), r * np.sin(theta)]), 3)
    ids = [f"C{k:04d}" for k in range(n_c)] + [f"S{k:04d}" for k in range(n_s)]
    return UnitTable(
        GroupSet(("white", "black")), tuple(ids), np.vstack([city, sub]),
        district_ids=("detroit",) * n_c + ("suburbs",) * n_s, coords=coords,
    )


def random_table(rng: np.random.Generator, n_units: int = 50, n_groups: int = 3,
                 concentration: float = 1.0, mean_population: float = 1000.0,
                 zero_fraction: float = 0.0) -> UnitTable:
    """Random region with Dirichlet unit compositions around a random overall mix.

    Lower ``concentration`` gives more segregated units. ``zero_fraction``
    of units (chosen at random, never all) get zero population.
    """
    overall = rng.dirichlet(np.ones(n_groups))
    props = rng.dirichlet(np.maximum(concentration * n_groups * overall, 1e-3), size=n_units)
    pops = rng.gamma(4.0, mean_population / 4.0, size=n_units)
    if zero_fraction > 0 and n_units > 1:
        dead = rng.random(n_units) < zero_fraction
        dead[rng.integers(n_units)] = False
        pops[dead] = 0.0
    counts = props * pops[:, None]
    return UnitTable(tuple(f"g{m}" for m in range(n_groups)),
                     tuple(f"u{i}" for i in range(n_units)), counts)
