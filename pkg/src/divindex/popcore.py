"""Data model for grouped population counts.

A region is a :class:`UnitTable`: ``N`` units (tracts, blocks, schools)
by ``M`` mutually exclusive groups. Everything downstream consumes tables
and the proportions derived from them.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateUnitId,
    EmptyRegion,
    InputError,
    InvalidDistribution,
    NegativeCount,
    UnassignedUnit,
    ZeroPopulation,
)

PROPORTION_TOL = 1e-9


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


class LogBase(enum.Enum):
    """Logarithm base; fixes the units of every entropy-type index.

    ``NUM_GROUPS`` uses ``M`` (the number of groups) as the base, which
    bounds entropy at 1 for any group count.
    """

    BASE2 = "2"
    NATURAL = "e"
    NUM_GROUPS = "M"

    @classmethod
    def parse(cls, value) -> "LogBase":
        if isinstance(value, cls):
            return value
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            if value == 2:
                return cls.BASE2
            if value == math.e:
                return cls.NATURAL
            raise ValueError(f"unsupported log base {value!r}; use 2, 'e' or 'M'")
        key = str(value).strip().lower()
        aliases = {
            "2": cls.BASE2, "base2": cls.BASE2, "bits": cls.BASE2,
            "e": cls.NATURAL, "ln": cls.NATURAL, "natural": cls.NATURAL, "nats": cls.NATURAL,
            "m": cls.NUM_GROUPS, "numgroups": cls.NUM_GROUPS, "num_groups": cls.NUM_GROUPS,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unsupported log base {value!r}; use 2, 'e' or 'M'") from None

    def ln_base(self, n_groups: int) -> float:
        """Natural log of the base, so ``log_b(x) = ln(x) / ln_base``."""
        if self is LogBase.BASE2:
            return math.log(2.0)
        if self is LogBase.NATURAL:
            return 1.0
        if n_groups < 2:
            raise InputError("log base M is undefined for a single group")
        return math.log(n_groups)

    @property
    def units(self) -> str:
        return {"2": "bits", "e": "nats", "M": "relative"}[self.value]


@dataclass(frozen=True)
class GroupSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if not names:
            raise InputError("a group set needs at least one group")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate group labels in {names}")
        object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown group {name!r}; have {list(self.names)}") from None


@dataclass(frozen=True)
class GroupDistribution:
    """Group proportions summing to one.

    Inputs within ``PROPORTION_TOL`` of summing to one are renormalized;
    anything further off is rejected.
    """

    proportions: np.ndarray
    groups: GroupSet | None = None

    def __post_init__(self):
        p = np.asarray(self.proportions, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidDistribution("proportions must be a non-empty vector")
        if not np.all(np.isfinite(p)) or np.any(p < 0) or np.any(p > 1 + PROPORTION_TOL):
            raise InvalidDistribution(f"proportions must lie in [0, 1], got {p}")
        total = p.sum()
        if abs(total - 1.0) > PROPORTION_TOL:
            raise InvalidDistribution(f"proportions sum to {total!r}, not 1")
        groups = self.groups
        if groups is not None and not isinstance(groups, GroupSet):
            groups = GroupSet(tuple(groups))
        if groups is not None and len(groups) != p.size:
            raise DimensionMismatch(f"{p.size} proportions for {len(groups)} groups")
        object.__setattr__(self, "proportions", _frozen(p / total))
        object.__setattr__(self, "groups", groups)

    @classmethod
    def from_counts(cls, counts, groups=None) -> "GroupDistribution":
        c = np.asarray(counts, dtype=float)
        total = c.sum()
        if total <= 0:
            raise ZeroPopulation("cannot form proportions from zero population")
        return cls(c / total, groups)

    def __len__(self):
        return self.proportions.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.proportions, dtype=dtype)

    def label(self, m: int) -> str:
        return self.groups.names[m] if self.groups is not None else str(m)


def as_distribution(p, groups=None) -> GroupDistribution:
    if isinstance(p, GroupDistribution):
        return p
    return GroupDistribution(np.asarray(p, dtype=float), groups)


@dataclass(frozen=True)
class UnitRecord:
    unit_id: str
    counts: np.ndarray
    district_id: str | None = None
    x: float | None = None
    y: float | None = None

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=float)
        if np.any(c < 0) or not np.all(np.isfinite(c)):
            raise NegativeCount(f"unit {self.unit_id!r} has negative or non-finite counts")
        object.__setattr__(self, "counts", _frozen(c))

    @property
    def population(self) -> float:
        return float(self.counts.sum())


@dataclass(frozen=True)
class UnitTable:
    """Counts for ``N`` units by ``M`` groups in one region.

    Parameters
    ----------
    groups : GroupSet or sequence of str
    unit_ids : sequence of str
        Unique unit labels, in table order.
    counts : array_like, shape (N, M)
        Nonnegative (possibly fractional) counts.
    district_ids : sequence of str, optional
        District label per unit; ``None`` entries mean unassigned.
    coords : array_like, shape (N, 2), optional
        Planar coordinates.
    population : array_like, shape (N,), optional
        Averaging weight per unit. Defaults to the row sums of ``counts``.
        Spatially smoothed tables keep each unit's own population here.
    reference : GroupDistribution, optional
        Overall composition to compare units against. Defaults to the
        pooled composition of ``counts``.
    """

    groups: GroupSet
    unit_ids: tuple[str, ...]
    counts: np.ndarray
    district_ids: tuple[str | None, ...] | None = None
    coords: np.ndarray | None = None
    population: np.ndarray | None = field(default=None, repr=False)
    reference: GroupDistribution | None = field(default=None, repr=False)

    def __post_init__(self):
        groups = self.groups if isinstance(self.groups, GroupSet) else GroupSet(tuple(self.groups))
        ids = tuple(str(u) for u in self.unit_ids)
        counts = np.asarray(self.counts, dtype=float)
        if counts.ndim == 1 and len(groups) == 1:
            counts = counts[:, None]
        if counts.ndim != 2 or counts.shape != (len(ids), len(groups)):
            raise DimensionMismatch(
                f"counts shape {counts.shape} does not match {len(ids)} units x {len(groups)} groups"
            )
        if not np.all(np.isfinite(counts)) or np.any(counts < 0):
            bad = np.argwhere(~(counts >= 0))[0][0]
            raise NegativeCount(f"unit {ids[bad]!r} has a negative or non-finite count")
        if len(set(ids)) != len(ids):
            seen = set()
            dup = next(u for u in ids if u in seen or seen.add(u))
            raise DuplicateUnitId(f"duplicate unit id {dup!r}")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "unit_ids", ids)
        object.__setattr__(self, "counts", _frozen(counts))

        if self.district_ids is not None:
            d = tuple(None if x is None else str(x) for x in self.district_ids)
            if len(d) != len(ids):
                raise DimensionMismatch("district_ids length does not match units")
            object.__setattr__(self, "district_ids", d)
        if self.coords is not None:
            xy = np.asarray(self.coords, dtype=float)
            if xy.shape != (len(ids), 2):
                raise DimensionMismatch(f"coords shape {xy.shape}, expected ({len(ids)}, 2)")
            object.__setattr__(self, "coords", _frozen(xy))
        if self.population is not None:
            pop = np.asarray(self.population, dtype=float)
            if pop.shape != (len(ids),) or np.any(pop < 0) or not np.all(np.isfinite(pop)):
                raise DimensionMismatch("population must be a nonnegative vector, one per unit")
            object.__setattr__(self, "population", _frozen(pop))
        if self.reference is not None:
            ref = as_distribution(self.reference, groups)
            if len(ref) != len(groups):
                raise DimensionMismatch("reference distribution has the wrong number of groups")
            object.__setattr__(self, "reference", ref)

        if self.total_population <= 0:
            raise EmptyRegion("region has zero total population")

    @classmethod
    def from_records(cls, groups, records: Sequence[UnitRecord]) -> "UnitTable":
        groups = groups if isinstance(groups, GroupSet) else GroupSet(tuple(groups))
        counts = np.array([r.counts for r in records], dtype=float).reshape(len(records), len(groups))
        districts = [r.district_id for r in records]
        have_xy = [r.x is not None and r.y is not None for r in records]
        coords = None
        if records and all(have_xy):
            coords = [(r.x, r.y) for r in records]
        return cls(
            groups,
            tuple(r.unit_id for r in records),
            counts,
            district_ids=None if all(d is None for d in districts) else tuple(districts),
            coords=coords,
        )

    def records(self) -> Iterator[UnitRecord]:
        for i, uid in enumerate(self.unit_ids):
            yield UnitRecord(
                uid,
                self.counts[i],
                None if self.district_ids is None else self.district_ids[i],
                None if self.coords is None else float(self.coords[i, 0]),
                None if self.coords is None else float(self.coords[i, 1]),
            )

    def __iter__(self):
        return self.records()

    def __len__(self):
        return len(self.unit_ids)

    @property
    def n_units(self) -> int:
        return len(self.unit_ids)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def unit_population(self) -> np.ndarray:
        """Averaging weight of each unit (tau_i)."""
        if self.population is not None:
            return self.population
        return self.counts.sum(axis=1)

    @property
    def total_population(self) -> float:
        return float(self.unit_population.sum())

    @property
    def weights(self) -> np.ndarray:
        """Population shares tau_i / T."""
        return self.unit_population / self.total_population

    def local_proportions(self) -> np.ndarray:
        """Per-unit proportions, shape (N, M); rows of NaN for empty units."""
        rowsum = self.counts.sum(axis=1)
        out = np.full(self.counts.shape, np.nan)
        ok = rowsum > 0
        out[ok] = self.counts[ok] / rowsum[ok, None]
        return out

    def populated(self) -> np.ndarray:
        return (self.counts.sum(axis=1) > 0) & (self.unit_population > 0)

    def with_counts(self, counts, **changes) -> "UnitTable":
        kw = dict(
            groups=self.groups, unit_ids=self.unit_ids, counts=counts,
            district_ids=self.district_ids, coords=self.coords,
            population=self.population, reference=self.reference,
        )
        kw.update(changes)
        return UnitTable(**kw)

    def subset(self, mask) -> "UnitTable":
        """Table restricted to the units selected by a boolean mask."""
        mask = np.asarray(mask, dtype=bool)
        idx = np.flatnonzero(mask)
        return UnitTable(
            self.groups,
            tuple(self.unit_ids[i] for i in idx),
            self.counts[idx],
            district_ids=None if self.district_ids is None else tuple(self.district_ids[i] for i in idx),
            coords=None if self.coords is None else self.coords[idx],
            population=None if self.population is None else self.population[idx],
        )


@dataclass(frozen=True)
class Hierarchy:
    """Partition of units into districts (``unit_id -> district_id``)."""

    assignment: Mapping[str, str]

    def __post_init__(self):
        a = {str(k): str(v) for k, v in dict(self.assignment).items()}
        if not a:
            raise InputError("a hierarchy needs at least one unit")
        object.__setattr__(self, "assignment", a)

    @classmethod
    def from_table(cls, table: UnitTable) -> "Hierarchy":
        if table.district_ids is None:
            raise UnassignedUnit("table has no district column")
        missing = [u for u, d in zip(table.unit_ids, table.district_ids) if d is None]
        if missing:
            raise UnassignedUnit(f"unit {missing[0]!r} has no district")
        return cls(dict(zip(table.unit_ids, table.district_ids)))

    @classmethod
    def single(cls, table: UnitTable, name="region") -> "Hierarchy":
        return cls({u: name for u in table.unit_ids})

    @classmethod
    def singletons(cls, table: UnitTable) -> "Hierarchy":
        return cls({u: u for u in table.unit_ids})

    @property
    def districts(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.assignment.values()))

    def labels_for(self, table: UnitTable) -> tuple[str, ...]:
        try:
            return tuple(self.assignment[u] for u in table.unit_ids)
        except KeyError as exc:
            raise UnassignedUnit(f"unit {exc.args[0]!r} is not assigned to a district") from None


def proportions(unit: UnitRecord) -> GroupDistribution:
    """Proportions ``counts / tau_i`` for a single unit."""
    if unit.population <= 0:
        raise ZeroPopulation(f"unit {unit.unit_id!r} has zero population")
    return GroupDistribution(unit.counts / unit.population)


def overall_distribution(table: UnitTable) -> GroupDistribution:
    """Overall group proportions of the region.

    For an ordinary table this is the pooled composition, i.e. the
    population-weighted mean of the unit proportions.
    """
    if table.reference is not None:
        return table.reference
    totals = table.counts.sum(axis=0)
    if totals.sum() <= 0:
        raise EmptyRegion("region has zero total population")
    return GroupDistribution(totals / totals.sum(), table.groups)


def aggregate_by_district(table: UnitTable, h: Hierarchy) -> UnitTable:
    """Sum units into one record per district, in order of first appearance."""
    labels = h.labels_for(table)
    order = list(dict.fromkeys(labels))
    pos = {d: k for k, d in enumerate(order)}
    idx = np.fromiter((pos[d] for d in labels), dtype=int, count=len(labels))
    counts = np.zeros((len(order), table.n_groups))
    np.add.at(counts, idx, table.counts)
    population = None
    if table.population is not None:
        population = np.bincount(idx, weights=table.population, minlength=len(order))
    return UnitTable(
        table.groups, tuple(order), counts,
        population=population, reference=table.reference,
    )


def recode_groups(table: UnitTable, mapping: Mapping[str, Sequence[str]]) -> UnitTable:
    """Select and merge group columns.

    ``mapping`` sends each output group to the input groups it sums, e.g.
    ``{"white": ["white"], "black": ["black"]}`` keeps a two-group subset.
    Source groups may not be reused across outputs.
    """
    used: set[str] = set()
    cols = []
    for new, olds in mapping.items():
        olds = [olds] if isinstance(olds, str) else list(olds)
        if not olds:
            raise InputError(f"group {new!r} merges no source groups")
        overlap = used.intersection(olds)
        if overlap:
            raise InputError(f"source groups {sorted(overlap)} are used in more than one merge")
        used.update(olds)
        cols.append([table.groups.index(o) for o in olds])
    counts = np.column_stack([table.counts[:, c].sum(axis=1) for c in cols])
    return UnitTable(
        GroupSet(tuple(mapping)), table.unit_ids, counts,
        district_ids=table.district_ids, coords=table.coords,
    )
