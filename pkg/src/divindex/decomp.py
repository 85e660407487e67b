"""Additive between/within decompositions.

Divergence and information theory decompositions split a region's index
over a :class:`~divindex.popcore.Hierarchy` of districts. The entropy
decomposition splits one distribution over supergroups of its groups.

Every report carries both raw district scores (before population
weighting) and weighted contributions, which sum to the between and
within totals.
"""

from __future__ import annotations

import warnings
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRegion, DimensionMismatch, EmptyDistrictWarning, EmptyRegion, InputError
from .indexes import (
    _entropy_terms,
    _xlogx_ratio,
    divergence_local,
    divergence_overall,
    entropy,
    info_theory_overall,
    kl_divergence,
    local_entropy,
)
from .popcore import GroupDistribution, Hierarchy, LogBase, UnitTable, as_distribution, overall_distribution


@dataclass(frozen=True)
class DistrictComponent:
    district_id: str
    population_share: float
    raw_between: float
    weighted_between: float
    raw_within: float
    weighted_within: float


@dataclass(frozen=True)
class DecompositionReport:
    index_kind: str
    base: LogBase
    total: float
    between: float
    within_total: float
    per_district: tuple[DistrictComponent, ...]

    @property
    def additivity_residual(self) -> float:
        return abs(self.between + self.within_total - self.total)

    def shares(self) -> dict:
        """Components as proportions of the total index."""
        t = self.total
        if t == 0:
            raise DegenerateRegion("total index is 0; shares are undefined")
        return {
            "between": self.between / t,
            "within": self.within_total / t,
            "districts": {
                c.district_id: {"between": c.weighted_between / t, "within": c.weighted_within / t}
                for c in self.per_district
            },
        }

    def component(self, district_id: str) -> DistrictComponent:
        for c in self.per_district:
            if c.district_id == district_id:
                return c
        raise KeyError(district_id)


def _district_index(table: UnitTable, h: Hierarchy):
    labels = h.labels_for(table)
    order = list(dict.fromkeys(labels))
    pos = {d: k for k, d in enumerate(order)}
    idx = np.fromiter((pos[d] for d in labels), dtype=int, count=len(labels))
    tau = table.unit_population
    Tj = np.bincount(idx, weights=tau, minlength=len(order))
    counts = np.zeros((len(order), table.n_groups))
    np.add.at(counts, idx, table.counts)
    keep = (Tj > 0) & (counts.sum(axis=1) > 0)
    for d in np.flatnonzero(~keep):
        warnings.warn(f"district {order[d]!r} has zero population and was dropped", EmptyDistrictWarning,
                      stacklevel=3)
    if not keep.any():
        raise EmptyRegion("every district is empty")
    return order, idx, Tj, counts, keep


def decompose_divergence(table: UnitTable, h: Hierarchy, base=LogBase.BASE2) -> DecompositionReport:
    """Split the Divergence Index into between- and within-district parts.

    The between part scores each district's pooled composition against the
    region; the within part scores each unit against its own district.
    """
    base = LogBase.parse(base)
    ref = overall_distribution(table).proportions
    order, idx, Tj, counts, keep = _district_index(table, h)
    T = table.total_population
    tau = table.unit_population
    lnb = base.ln_base(table.n_groups)

    P = table.local_proportions()
    ok = table.populated()
    # divergence_local performs the support check against the region
    divergence_local(table, base)
    components = []
    for j, name in enumerate(order):
        if not keep[j]:
            continue
        pj = counts[j] / counts[j].sum()
        raw_between = max(_xlogx_ratio(pj, ref).sum(), 0.0) / lnb
        members = (idx == j) & ok
        Di = np.maximum(_xlogx_ratio(P[members], pj).sum(axis=1), 0.0) / lnb
        raw_within = float(np.dot(tau[members], Di) / Tj[j])
        share = float(Tj[j] / T)
        components.append(DistrictComponent(name, share, float(raw_between), share * raw_between,
                                            raw_within, share * raw_within))
    between = float(sum(c.weighted_between for c in components))
    within = float(sum(c.weighted_within for c in components))
    total = float(divergence_overall(table, base))
    return DecompositionReport("divergence", base, total, between, within, tuple(components))


def decompose_info_theory(table: UnitTable, h: Hierarchy, base=LogBase.BASE2) -> DecompositionReport:
    """Split the Information Theory Index into between- and within-district parts.

    With region entropy ``E``, district entropy ``E_j`` and district index
    ``H_j``, district ``j`` contributes ``(T_j/T)(E - E_j)/E`` between and
    ``(T_j E_j)/(T E) H_j`` within. The two sum to ``H`` exactly. A
    single-group district has ``E_j = 0``; its within term is 0.
    """
    base = LogBase.parse(base)
    E = float(entropy(overall_distribution(table), base))
    if E <= 0:
        raise DegenerateRegion("information theory index is undefined when overall entropy is 0")
    order, idx, Tj, counts, keep = _district_index(table, h)
    T = table.total_population
    tau = table.unit_population
    lnb = base.ln_base(table.n_groups)
    Ei = local_entropy(table, base).values
    ok = table.populated()

    components = []
    for j, name in enumerate(order):
        if not keep[j]:
            continue
        pj = counts[j] / counts[j].sum()
        Ej = _entropy_terms(pj).sum() / lnb
        members = (idx == j) & ok
        mean_Ei = float(np.dot(tau[members], Ei[members]) / Tj[j])
        share = float(Tj[j] / T)
        raw_between = float((E - Ej) / E)
        raw_within = float(1.0 - mean_Ei / Ej) if Ej > 0 else 0.0
        weighted_within = float(share * Ej / E * raw_within)
        components.append(DistrictComponent(name, share, raw_between, share * raw_between,
                                            raw_within, weighted_within))
    between = float(sum(c.weighted_between for c in components))
    within = float(sum(c.weighted_within for c in components))
    total = float(info_theory_overall(table, base))
    return DecompositionReport("infoTheory", base, total, between, within, tuple(components))


@dataclass(frozen=True)
class BetweenScores:
    """District-level between components computed from summary data alone."""

    district_ids: tuple[str, ...]
    population_share: np.ndarray
    raw_divergence: np.ndarray
    weighted_divergence: np.ndarray
    raw_info_theory: np.ndarray
    weighted_info_theory: np.ndarray
    region_entropy: float


def between_district_scores(distributions: Sequence, population_shares: Sequence[float],
                            reference=None, district_ids: Sequence[str] | None = None,
                            base=LogBase.BASE2) -> BetweenScores:
    """Between-district components when only district compositions are known.

    Useful for published summary tables where tract data are unavailable.
    ``reference`` defaults to the share-weighted mean of ``distributions``.
    """
    base = LogBase.parse(base)
    dists = [as_distribution(d) for d in distributions]
    w = np.asarray(population_shares, dtype=float)
    if len(dists) != w.size:
        raise DimensionMismatch("one population share per district is required")
    if reference is None:
        reference = GroupDistribution(sum(wj * d.proportions for wj, d in zip(w, dists)) / w.sum())
    ref = as_distribution(reference)
    E = float(entropy(ref, base))
    if E <= 0:
        raise DegenerateRegion("reference distribution has zero entropy")
    raw_d = np.array([float(kl_divergence(d, ref, base)) for d in dists])
    raw_h = np.array([(E - float(entropy(d, base))) / E for d in dists])
    ids = tuple(district_ids) if district_ids is not None else tuple(str(k) for k in range(len(dists)))
    return BetweenScores(ids, w, raw_d, w * raw_d, raw_h, w * raw_h, E)


def decompose_entropy_supergroups(p, grouping, base=LogBase.BASE2) -> DecompositionReport:
    """Split the entropy of one distribution into between/within supergroups.

    Parameters
    ----------
    p : GroupDistribution or array_like
    grouping : mapping or sequence
        Either ``{group label: supergroup}`` (requires ``p`` to carry group
        labels) or one supergroup label per position of ``p``.

    Notes
    -----
    For supergroup shares ``S_g``, between entropy is ``sum_g S_g log(1/S_g)``
    and within supergroup ``g`` it is ``sum_{m in g} (p_m/S_g) log(S_g/p_m)``.
    Empty supergroups carry zero weight and are omitted.
    """
    dist = as_distribution(p)
    base = LogBase.parse(base)
    q = dist.proportions
    if isinstance(grouping, Mapping):
        if dist.groups is None:
            raise InputError("a mapping grouping needs a distribution with group labels")
        missing = [g for g in dist.groups if g not in grouping]
        if missing:
            raise InputError(f"groups {missing} have no supergroup")
        labels = [str(grouping[g]) for g in dist.groups]
    else:
        labels = [str(g) for g in grouping]
        if len(labels) != q.size:
            raise DimensionMismatch("grouping must give one supergroup per group")
    lnb = base.ln_base(q.size)

    components = []
    for g in dict.fromkeys(labels):
        members = np.array([lab == g for lab in labels])
        S = q[members].sum()
        if S <= 0:
            continue
        raw_between = np.log(1.0 / S) / lnb
        raw_within = float(np.sum(_entropy_terms(q[members] / S))) / lnb
        components.append(DistrictComponent(g, float(S), float(raw_between), float(S * raw_between),
                                            raw_within, float(S * raw_within)))
    between = float(sum(c.weighted_between for c in components))
    within = float(sum(c.weighted_within for c in components))
    total = float(entropy(dist, base))
    return DecompositionReport("entropy", base, total, between, within, tuple(components))
