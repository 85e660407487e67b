"""Entropy, divergence, information theory, dissimilarity and Theil indexes.

All entropy-type functions take a ``base`` argument (a :class:`LogBase` or
one of ``2``, ``"e"``, ``"M"``); the default is base 2. ``0 log 0`` is
taken to be exactly 0 by masking, never by relying on floating-point
limits.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRegion, DimensionMismatch, MissingGroup, SupportViolation, ZeroMean
from .popcore import LogBase, UnitTable, as_distribution, overall_distribution


class IndexValue(float):
    """A float that remembers the log base it was computed in."""

    def __new__(cls, value, base=LogBase.BASE2):
        obj = super().__new__(cls, value)
        obj.base = LogBase.parse(base)
        return obj

    def __reduce__(self):
        return (IndexValue, (float(self), self.base))


@dataclass(frozen=True)
class LocalIndexVector:
    """Per-unit index values; NaN marks an undefined (zero-population) unit."""

    unit_ids: tuple[str, ...]
    values: np.ndarray
    base: LogBase = LogBase.BASE2

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.unit_ids)

    def __getitem__(self, unit_id):
        v = self.values[self.unit_ids.index(unit_id)]
        return None if np.isnan(v) else float(v)

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.values)

    def to_dict(self) -> dict[str, float | None]:
        return {u: (None if np.isnan(v) else float(v)) for u, v in zip(self.unit_ids, self.values)}


def _xlogx_ratio(p, q):
    """Elementwise ``p * ln(p / q)`` with ``0 * ln(0 / q) = 0``.

    Assumes support has already been checked (``q > 0`` wherever ``p > 0``).
    """
    p = np.asarray(p, dtype=float)
    q = np.broadcast_to(np.asarray(q, dtype=float), p.shape)
    out = np.zeros(p.shape)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos] / q[pos])
    return out


def _entropy_terms(p):
    """Elementwise ``p * ln(1 / p)`` with ``0 * ln(1 / 0) = 0``."""
    p = np.asarray(p, dtype=float)
    out = np.zeros(p.shape)
    pos = p > 0
    out[pos] = -p[pos] * np.log(p[pos])
    return out


def _check_support(p, q, labels=None, unit_ids=None):
    p = np.atleast_2d(p)
    bad = (p > 0) & (np.asarray(q) <= 0)
    if bad.any():
        i, m = np.argwhere(bad)[0]
        group = labels[m] if labels is not None else m
        unit = unit_ids[i] if unit_ids is not None else None
        raise SupportViolation(group, unit)


def entropy(p, base=LogBase.BASE2) -> IndexValue:
    """Shannon entropy ``sum_m p_m log(1 / p_m)`` of a group distribution."""
    dist = as_distribution(p)
    base = LogBase.parse(base)
    nats = _entropy_terms(dist.proportions).sum()
    return IndexValue(nats / base.ln_base(len(dist)), base)


def kl_divergence(p, q, base=LogBase.BASE2) -> IndexValue:
    """Relative entropy of ``p`` with respect to the reference ``q``.

    Raises
    ------
    SupportViolation
        If some group has ``p_m > 0`` but ``q_m = 0``.
    """
    pd, qd = as_distribution(p), as_distribution(q)
    if len(pd) != len(qd):
        raise DimensionMismatch(f"distributions have {len(pd)} and {len(qd)} groups")
    if pd.groups is not None and qd.groups is not None and pd.groups != qd.groups:
        raise DimensionMismatch("distributions are over different group sets")
    base = LogBase.parse(base)
    labels = (pd.groups or qd.groups).names if (pd.groups or qd.groups) else None
    _check_support(pd.proportions, qd.proportions, labels)
    nats = _xlogx_ratio(pd.proportions, qd.proportions).sum()
    # rounding can leave -1e-17 when p == q
    return IndexValue(max(nats, 0.0) / base.ln_base(len(pd)), base)


def local_entropy(table: UnitTable, base=LogBase.BASE2) -> LocalIndexVector:
    """Entropy of each unit's composition (``E_i``)."""
    base = LogBase.parse(base)
    P = table.local_proportions()
    out = np.full(table.n_units, np.nan)
    ok = table.populated()
    out[ok] = _entropy_terms(P[ok]).sum(axis=1) / base.ln_base(table.n_groups)
    return LocalIndexVector(table.unit_ids, out, base)


def _weighted_mean(table: UnitTable, values: np.ndarray) -> float:
    w = table.weights
    ok = table.populated()
    return float(np.dot(w[ok], values[ok]))


def mean_local_entropy(table: UnitTable, base=LogBase.BASE2) -> IndexValue:
    """Population-weighted average of unit entropies."""
    base = LogBase.parse(base)
    return IndexValue(_weighted_mean(table, local_entropy(table, base).values), base)


def overall_entropy(table: UnitTable, base=LogBase.BASE2) -> IndexValue:
    return entropy(overall_distribution(table), base)


def divergence_local(table: UnitTable, base=LogBase.BASE2, reference=None) -> LocalIndexVector:
    """Divergence of each unit's composition from the overall composition.

    ``reference`` overrides the table's own overall distribution, e.g. to
    score a city's units against a metro-wide composition.
    """
    base = LogBase.parse(base)
    ref = as_distribution(reference) if reference is not None else overall_distribution(table)
    q = ref.proportions
    if q.size != table.n_groups:
        raise DimensionMismatch("reference distribution has the wrong number of groups")
    P = table.local_proportions()
    ok = table.populated()
    _check_support(P[ok], q, table.groups.names, [u for u, k in zip(table.unit_ids, ok) if k])
    out = np.full(table.n_units, np.nan)
    nats = _xlogx_ratio(P[ok], q).sum(axis=1)
    out[ok] = np.maximum(nats, 0.0) / base.ln_base(table.n_groups)
    return LocalIndexVector(table.unit_ids, out, base)


def divergence_overall(table: UnitTable, base=LogBase.BASE2, reference=None) -> IndexValue:
    """Divergence Index: population-weighted mean of the unit divergences."""
    base = LogBase.parse(base)
    local = divergence_local(table, base, reference)
    return IndexValue(_weighted_mean(table, local.values), base)


def _region_entropy_or_raise(table, base):
    E = overall_entropy(table, base)
    if E <= 0:
        raise DegenerateRegion(
            "information theory index is undefined when overall entropy is 0 (one group present)"
        )
    return E


def info_theory_local(table: UnitTable, base=LogBase.BASE2) -> LocalIndexVector:
    """``H_i = 1 - E_i / E`` for each unit; can be negative."""
    base = LogBase.parse(base)
    E = _region_entropy_or_raise(table, base)
    Ei = local_entropy(table, base).values
    return LocalIndexVector(table.unit_ids, 1.0 - Ei / E, base)


def info_theory_overall(table: UnitTable, base=LogBase.BASE2) -> IndexValue:
    """Information Theory Index ``H = 1 - mean(E_i) / E``."""
    base = LogBase.parse(base)
    E = _region_entropy_or_raise(table, base)
    return IndexValue(1.0 - mean_local_entropy(table, base) / E, base)


def dissimilarity_two_group(table: UnitTable, group_a: str, group_b: str) -> IndexValue:
    """Two-group Dissimilarity Index over the named pair (other groups ignored)."""
    a = table.counts[:, table.groups.index(group_a)]
    b = table.counts[:, table.groups.index(group_b)]
    Ta, Tb = a.sum(), b.sum()
    if Ta <= 0 or Tb <= 0:
        missing = group_a if Ta <= 0 else group_b
        raise MissingGroup(f"group {missing!r} has zero population in this region")
    return IndexValue(0.5 * np.abs(a / Ta - b / Tb).sum())


def simpson_interaction(p) -> float:
    """Simpson's interaction index ``sum_m p_m (1 - p_m)``."""
    q = as_distribution(p).proportions
    return float(np.dot(q, 1.0 - q))


def dissimilarity_local(table: UnitTable) -> LocalIndexVector:
    """Per-unit dissimilarity terms ``sum_m |p_im - p_m| / (2 I)``.

    This is a constructed series: its population-weighted mean is the
    multigroup Dissimilarity Index, which makes it a like-for-like local
    comparison for the unit divergences.
    """
    ref = overall_distribution(table).proportions
    interaction = float(np.dot(ref, 1.0 - ref))
    if interaction <= 0:
        raise DegenerateRegion("dissimilarity is undefined for a single-group region")
    P = table.local_proportions()
    ok = table.populated()
    out = np.full(table.n_units, np.nan)
    out[ok] = np.abs(P[ok] - ref).sum(axis=1) / (2.0 * interaction)
    return LocalIndexVector(table.unit_ids, out)


def dissimilarity_multigroup(table: UnitTable) -> IndexValue:
    """Multigroup Dissimilarity Index normalized by Simpson's interaction index."""
    return IndexValue(_weighted_mean(table, dissimilarity_local(table).values))


def theil_income(incomes: Sequence[float], weights: Sequence[float] | None = None,
                 base=LogBase.BASE2) -> IndexValue:
    """Theil inequality index of (optionally weighted) incomes.

    Parameters
    ----------
    incomes : array_like
        Nonnegative incomes ``x_i`` of earners or earner groups.
    weights : array_like, optional
        Head counts ``tau_i``; unit weights when omitted.
    base : LogBase, default base 2
        ``NUM_GROUPS`` resolves to the number of income entries.

    Returns
    -------
    IndexValue
        ``(1/T) sum_i tau_i (x_i / xbar) log(x_i / xbar)``; 0 when all
        incomes are equal.
    """
    x = np.asarray(incomes, dtype=float)
    tau = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    if x.shape != tau.shape or x.ndim != 1:
        raise DimensionMismatch("incomes and weights must be 1-D and the same length")
    if np.any(x < 0) or np.any(tau < 0):
        raise ValueError("incomes and weights must be nonnegative")
    base = LogBase.parse(base)
    T = tau.sum()
    if T <= 0:
        raise ZeroMean("total weight is zero")
    xbar = np.dot(tau, x) / T
    if xbar <= 0:
        raise ZeroMean("mean income is zero")
    r = x / xbar
    nats = np.dot(tau, _xlogx_ratio(r, 1.0)) / T
    return IndexValue(nats / base.ln_base(x.size), base)
