"""Spatially weighted (ego-centric) neighborhood compositions.

Each unit's counts are replaced by a proximity-weighted sum over nearby
units. The smoothed table keeps every unit's own population as its
averaging weight and the unsmoothed regional composition as its reference,
so spatial indexes plug straight into :mod:`divindex.indexes`.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

from .errors import DimensionMismatch, InputError, MissingCoordinates
from .popcore import UnitTable, overall_distribution


@dataclass(frozen=True)
class WeightMatrix:
    """Nonnegative unit-by-unit proximity weights, rows in unit order."""

    weights: sparse.csr_matrix
    unit_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        w = sparse.csr_matrix(self.weights, dtype=float)
        if w.shape[0] != w.shape[1]:
            raise DimensionMismatch(f"weight matrix must be square, got {w.shape}")
        if w.nnz and (w.data.min() < 0 or not np.all(np.isfinite(w.data))):
            raise InputError("weights must be finite and nonnegative")
        w.eliminate_zeros()
        w.sort_indices()
        object.__setattr__(self, "weights", w)
        if self.unit_ids is not None:
            ids = tuple(self.unit_ids)
            if len(ids) != w.shape[0]:
                raise DimensionMismatch("unit_ids length does not match the weight matrix")
            object.__setattr__(self, "unit_ids", ids)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def neighbors(self) -> dict[int, set[int]]:
        w = self.weights
        return {i: set(w.indices[w.indptr[i]:w.indptr[i + 1]].tolist()) for i in range(self.n)}

    def toarray(self) -> np.ndarray:
        return self.weights.toarray()

    @classmethod
    def from_triplets(cls, triplets: Iterable[tuple[str, str, float]], unit_ids) -> "WeightMatrix":
        """Build from ``(row_unit_id, col_unit_id, weight)`` triplets.

        Repeated pairs are summed; pairs not listed have weight 0.
        """
        ids = tuple(unit_ids)
        pos = {u: k for k, u in enumerate(ids)}
        rows, cols, vals = [], [], []
        for r, c, v in triplets:
            try:
                rows.append(pos[r])
                cols.append(pos[c])
            except KeyError as exc:
                raise InputError(f"weight triplet names unknown unit {exc.args[0]!r}") from None
            vals.append(float(v))
        w = sparse.coo_matrix((vals, (rows, cols)), shape=(len(ids), len(ids))).tocsr()
        w.sum_duplicates()
        return cls(w, ids)

    def triplets(self):
        coo = self.weights.tocoo()
        ids = self.unit_ids or tuple(str(k) for k in range(self.n))
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            yield ids[coo.row[k]], ids[coo.col[k]], float(coo.data[k])


def uniform_kernel(table: UnitTable, radius: float) -> WeightMatrix:
    """Weight 1 for every unit within Euclidean ``radius`` (inclusive), self included."""
    if table.coords is None:
        raise MissingCoordinates("uniform kernel needs x, y coordinates for every unit")
    if radius < 0:
        raise InputError("radius must be nonnegative")
    tree = cKDTree(table.coords)
    hits = tree.query_ball_point(table.coords, r=radius)
    rows = np.repeat(np.arange(table.n_units), [len(h) for h in hits])
    cols = np.concatenate([np.asarray(h, dtype=int) for h in hits]) if len(hits) else np.array([], int)
    w = sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(table.n_units, table.n_units))
    # self-weight is always 1
    w = w.maximum(sparse.identity(table.n_units, format="csr"))
    return WeightMatrix(w, table.unit_ids)


def spatially_weighted_table(table: UnitTable, w: WeightMatrix) -> UnitTable:
    """Replace each unit's counts with the weighted sum of its neighbors' counts."""
    if w.n != table.n_units:
        raise DimensionMismatch(f"weight matrix is {w.n}x{w.n} for {table.n_units} units")
    if w.unit_ids is not None and w.unit_ids != table.unit_ids:
        raise DimensionMismatch("weight matrix unit order does not match the table")
    smoothed = np.asarray(w.weights @ table.counts)
    tau = table.unit_population
    dead = (tau > 0) & (smoothed.sum(axis=1) <= 0)
    if dead.any():
        raise InputError(f"unit {table.unit_ids[np.flatnonzero(dead)[0]]!r} has an all-zero weight row")
    return table.with_counts(smoothed, population=tau, reference=overall_distribution(table))
