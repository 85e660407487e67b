"""Comparative analyses of the local and overall indexes.

* :func:`sweep_local_indexes` traces unit divergence and unit information
  theory scores across every local composition of a two-group city.
* :func:`correlate_regions` correlates paired local index series within
  each region and overall index pairs across regions.
* :func:`equivalence_diagnostics` checks when ``H = D / E`` holds.
"""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import DegenerateRegion, DivIndexError, InputError
from .indexes import (
    _entropy_terms,
    _xlogx_ratio,
    dissimilarity_local,
    dissimilarity_multigroup,
    divergence_local,
    divergence_overall,
    info_theory_local,
    info_theory_overall,
    local_entropy,
    mean_local_entropy,
    overall_entropy,
)
from .popcore import GroupDistribution, LogBase, UnitTable, as_distribution

IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class SweepCurve:
    overall: GroupDistribution
    local_p1: np.ndarray
    divergence: np.ndarray
    info_theory: np.ndarray
    base: LogBase = LogBase.BASE2

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.local_p1.tolist(), self.divergence.tolist(), self.info_theory.tolist()))

    def rows(self):
        yield ("local_p1", "divergence", "info_theory")
        yield from self.samples


def sweep_local_indexes(overall, steps: int = 101, base=LogBase.BASE2) -> SweepCurve:
    """Evaluate unit divergence and unit H over local group-1 shares in [0, 1].

    The grid is ``k / (steps - 1)``, so both endpoints and any share that is
    a multiple of the spacing are hit exactly.
    """
    ref = as_distribution(overall)
    if len(ref) != 2:
        raise InputError("the local-index sweep needs a two-group overall distribution")
    if steps < 3:
        raise InputError("steps must be at least 3")
    base = LogBase.parse(base)
    lnb = base.ln_base(2)
    E = _entropy_terms(ref.proportions).sum() / lnb
    if E <= 0:
        raise DegenerateRegion("overall entropy is 0; the information theory index is undefined")
    p1 = np.arange(steps) / (steps - 1)
    P = np.column_stack([p1, 1.0 - p1])
    if np.any((P > 0) & (ref.proportions <= 0)):
        raise DegenerateRegion("reference lacks a group present in the sweep")
    D = np.maximum(_xlogx_ratio(P, ref.proportions).sum(axis=1), 0.0) / lnb
    Ei = _entropy_terms(P).sum(axis=1) / lnb
    return SweepCurve(ref, p1, D, 1.0 - Ei / E, base)


_LOCAL = {
    "divergence": lambda t, b: divergence_local(t, b),
    "info_theory": lambda t, b: info_theory_local(t, b),
    "dissimilarity": lambda t, b: dissimilarity_local(t),
    "entropy": lambda t, b: local_entropy(t, b),
}

_OVERALL = {
    "divergence": lambda t, b: divergence_overall(t, b),
    "info_theory": lambda t, b: info_theory_overall(t, b),
    "dissimilarity": lambda t, b: dissimilarity_multigroup(t),
    "entropy": lambda t, b: overall_entropy(t, b),
}


@dataclass(frozen=True)
class RegionCorrelation:
    region_id: str
    pearson_r: float | None
    spearman_r: float | None
    n_units: int
    overall: tuple[float | None, float | None]
    flag: str | None = None


@dataclass(frozen=True)
class CorrelationReport:
    pair: tuple[str, str]
    base: LogBase
    per_region: tuple[RegionCorrelation, ...]
    cross_region: float | None
    cross_region_spearman: float | None
    n_regions: int
    flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def mean_local(self) -> float | None:
        """Mean of the per-region local correlations (flagged regions excluded)."""
        rs = [c.pearson_r for c in self.per_region if c.pearson_r is not None]
        return float(np.mean(rs)) if rs else None

    @property
    def mean_local_spearman(self) -> float | None:
        rs = [c.spearman_r for c in self.per_region if c.spearman_r is not None]
        return float(np.mean(rs)) if rs else None


def pearson(x, y) -> float | None:
    """Pearson correlation; ``None`` when either series is constant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise InputError("series must have equal length")
    if x.size < 2:
        return None
    xc, yc = x - x.mean(), y - y.mean()
    sxx, syy = np.dot(xc, xc), np.dot(yc, yc)
    scale = max(np.abs(x).max(), np.abs(y).max(), 1.0)
    # constant series up to rounding
    if sxx <= (1e-13 * scale) ** 2 * x.size or syy <= (1e-13 * scale) ** 2 * y.size:
        return None
    return float(np.clip(np.dot(xc, yc) / np.sqrt(sxx * syy), -1.0, 1.0))


def spearman(x, y) -> float | None:
    if pearson(x, y) is None:
        return None
    rho = stats.spearmanr(x, y).statistic
    return None if np.isnan(rho) else float(np.clip(rho, -1.0, 1.0))


def _one_region(region_id, table, pair, base, min_units):
    try:
        a = _LOCAL[pair[0]](table, base).values
        b = _LOCAL[pair[1]](table, base).values
        overall = (float(_OVERALL[pair[0]](table, base)), float(_OVERALL[pair[1]](table, base)))
    except DivIndexError as exc:
        return RegionCorrelation(region_id, None, None, 0, (None, None), f"undefined index: {exc}")
    both = ~np.isnan(a) & ~np.isnan(b)
    n = int(both.sum())
    if n < min_units:
        return RegionCorrelation(region_id, None, None, n, overall,
                                 f"insufficient data: {n} populated units, need {min_units}")
    r = pearson(a[both], b[both])
    if r is None:
        return RegionCorrelation(region_id, None, None, n, overall, "zero variance in a local series")
    return RegionCorrelation(region_id, r, spearman(a[both], b[both]), n, overall)


def correlate_regions(regions: Sequence[UnitTable], pair=("divergence", "info_theory"),
                      base=LogBase.BASE2, region_ids: Sequence[str] | None = None,
                      min_units: int = 3, max_workers: int | None = None) -> CorrelationReport:
    """Correlate two indexes within and across regions.

    Parameters
    ----------
    regions : sequence of UnitTable
    pair : (str, str)
        Index names from ``divergence``, ``info_theory``, ``dissimilarity``,
        ``entropy``. The local ``dissimilarity`` series is the per-unit term
        of the multigroup Dissimilarity Index.
    min_units : int
        Regions with fewer populated units are flagged, not correlated.
    max_workers : int, optional
        Evaluate regions on a thread pool; results keep input order.
    """
    pair = tuple(pair)
    unknown = [p for p in pair if p not in _LOCAL]
    if len(pair) != 2 or unknown:
        raise InputError(f"pair must name two of {sorted(_LOCAL)}")
    base = LogBase.parse(base)
    ids = list(region_ids) if region_ids is not None else [str(k) for k in range(len(regions))]
    if len(ids) != len(regions):
        raise InputError("one region id per region is required")
    args = [(rid, t, pair, base, min_units) for rid, t in zip(ids, regions)]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as ex:
            per_region = list(ex.map(lambda a: _one_region(*a), args))
    else:
        per_region = [_one_region(*a) for a in args]

    flags = []
    xs = [(c.overall[0], c.overall[1]) for c in per_region if None not in c.overall]
    cross = cross_s = None
    if len(xs) < 2:
        flags.append(f"cross-region: insufficient data ({len(xs)} regions with defined indexes)")
    else:
        x, y = np.array(xs).T
        cross = pearson(x, y)
        if cross is None:
            flags.append("cross-region: zero variance in overall index values")
        else:
            cross_s = spearman(x, y)
    return CorrelationReport(pair, base, tuple(per_region), cross, cross_s, len(regions), tuple(flags))


@dataclass(frozen=True)
class EquivalenceDiagnostics:
    overall_entropy: float
    mean_local_entropy: float
    info_theory: float | None
    divergence: float
    conditions_hold: bool
    residual_h_ratio: float | None
    residual_d_product: float | None
    residual_d_entropy_gap: float
    note: str = ""


def equivalence_diagnostics(table: UnitTable, base=LogBase.BASE2) -> EquivalenceDiagnostics:
    """Check the overall equivalence ``H = D / E`` and ``D = E - mean(E_i)``.

    The equivalence requires ``E >= 0`` and ``E >= mean(E_i)``; it fails
    with overlapping (spatially smoothed) units. A single-group region has
    ``E = 0``: ``H`` is reported as ``None`` while ``D = 0``.
    """
    base = LogBase.parse(base)
    E = float(overall_entropy(table, base))
    Ebar = float(mean_local_entropy(table, base))
    D = float(divergence_overall(table, base))
    holds = E >= 0 and E >= Ebar - IDENTITY_TOL
    if E > 0:
        H = 1.0 - Ebar / E
        note = "" if holds else "mean local entropy exceeds overall entropy; H < 0 and H != D/E"
        return EquivalenceDiagnostics(E, Ebar, H, D, holds, abs(H - D / E), abs(D - H * E),
                                      abs(D - (E - Ebar)), note)
    note = ("H is undefined (0/0) for a single-group region; with two groups its limit "
            "as the minority vanishes is 1, while D = 0")
    return EquivalenceDiagnostics(E, Ebar, None, D, holds, None, None, abs(D - (E - Ebar)), note)
