"""Multi-granularity relabeled under-sampling.

1. Build the ``m`` leave-one-feature-out views of the data.
2. In each view rank every instance by its distance to the view mean and
   flag each majority instance that sits next to a minority instance in
   that ranking.
3. Stack the per-view flags into an ``n x m`` indicator matrix and sum the
   rows into a global relabel index per instance.
4. Delete the majority instances whose index reaches a threshold ``K``.

Deletion keeps instances with index below ``K``: a majority instance
flagged in many views is the likeliest to sit in the overlap region.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mgru._parallel import ordered_map
from mgru.dataset import MAJORITY, Dataset, format_csv
from mgru.distance import MAHALANOBIS, build_context, distances_to, resolve_metric
from mgru.errors import ExhaustionError

INDEX_COLUMN = "mgru_index"
TIE_TOLERANCE = 1e-10
TIE_EPS_FACTOR = 16.0


@dataclass(frozen=True, eq=False)
class SubspaceView:
    removed_feature: int
    columns: tuple[int, ...]
    parent: Dataset

    @property
    def data(self) -> np.ndarray:
        return self.parent.features[:, list(self.columns)]


@dataclass(frozen=True, eq=False)
class IndicatorMatrix:
    flags: np.ndarray  # (n, m) uint8
    metric: str


@dataclass(frozen=True, eq=False)
class RelabeledIndexVector:
    values: np.ndarray  # (n,) int64
    n_subspaces: int

    def positive_values(self) -> list[int]:
        """Distinct index values above zero, ascending."""
        return sorted(int(v) for v in np.unique(self.values) if v > 0)


def local_subspaces(ds: Dataset) -> list[SubspaceView]:
    return [
        SubspaceView(tau, tuple(k for k in range(ds.m) if k != tau), ds)
        for tau in range(ds.m)
    ]


def flag_majority_neighbors(order, y) -> np.ndarray:
    """Flag majority instances adjacent to an opposite-class instance.

    ``order`` lists instance indices in ranked order. A majority instance
    bordering two minority instances is flagged once.
    """
    order = np.asarray(order)
    y = np.asarray(y)
    flags = np.zeros(y.shape[0], dtype=np.uint8)
    ranked = y[order]
    cut = np.flatnonzero(ranked[1:] != ranked[:-1])
    for side in (order[cut], order[cut + 1]):
        flags[side[y[side] == MAJORITY]] = 1
    return flags


def tie_tolerance(ctx, metric: str) -> float:
    """Relative distance gap below which two instances count as tied.

    Mahalanobis forms carry a relative error of roughly cond * eps, so the
    floor is widened for ill-conditioned covariances.
    """
    if metric == MAHALANOBIS:
        return max(TIE_TOLERANCE, TIE_EPS_FACTOR * np.finfo(float).eps * ctx.condition)
    return TIE_TOLERANCE


def rank_by_distance(d, rel_tol=TIE_TOLERANCE) -> np.ndarray:
    """Indices sorted by distance, near-equal distances ranked by index.

    Neighbouring sorted values closer than ``rel_tol`` times the largest
    distance fall into one tie group. Without this, points that are
    equidistant in exact arithmetic (e.g. n = d + 1 under Mahalanobis)
    would be ordered by rounding noise.
    """
    d = np.asarray(d, dtype=np.float64)
    order = np.argsort(d, kind="stable")
    s = d[order]
    gap = rel_tol * (s[-1] if s.size else 0.0)
    group = np.empty(d.size, dtype=np.intp)
    group[order] = np.r_[0, np.cumsum(np.diff(s) > gap)]
    return np.lexsort((np.arange(d.size), group))


def subspace_indicator(view: SubspaceView, metric: str) -> np.ndarray:
    """Indicator vector of one view (length n, values 0/1)."""
    X = view.data
    ctx = build_context(X)
    d = distances_to(X, ctx.mean, ctx, metric)
    return flag_majority_neighbors(rank_by_distance(d, tie_tolerance(ctx, metric)), view.parent.y)


def build_indicator_matrix(ds: Dataset, metric: str, threads=1) -> IndicatorMatrix:
    metric = resolve_metric(metric)
    columns = ordered_map(
        lambda view: subspace_indicator(view, metric), local_subspaces(ds), threads
    )
    flags = np.column_stack(columns).astype(np.uint8)
    flags.setflags(write=False)
    return IndicatorMatrix(flags, metric)


def global_index(mat: IndicatorMatrix) -> RelabeledIndexVector:
    values = np.asarray(mat.flags, dtype=np.int64).sum(axis=1)
    values.setflags(write=False)
    return RelabeledIndexVector(values, mat.flags.shape[1])


def mgru_fit(ds: Dataset, metric: str, threads=1):
    """Indicator matrix and global relabel index for ``ds``."""
    mat = build_indicator_matrix(ds, metric, threads)
    return mat, global_index(mat)


def deletion_mask(ds: Dataset, phi: RelabeledIndexVector, threshold: int) -> np.ndarray:
    if phi.values.shape != (ds.n,):
        raise ValueError(f"index vector has {phi.values.size} entries for {ds.n} rows")
    if not 1 <= threshold <= phi.n_subspaces:
        raise ValueError(f"threshold must be in [1, {phi.n_subspaces}], got {threshold}")
    return (ds.y == MAJORITY) & (phi.values >= threshold)


def undersample(ds: Dataset, phi: RelabeledIndexVector, threshold: int) -> Dataset:
    """Drop majority rows whose relabel index is >= ``threshold``."""
    drop = deletion_mask(ds, phi, threshold)
    if not drop.any():
        return ds
    if drop.sum() == ds.n_majority:
        raise ExhaustionError(
            f"threshold {threshold} would delete all {ds.n_majority} majority instances"
        )
    return ds.subset(~drop)


def augmented_csv(ds: Dataset, phi: RelabeledIndexVector) -> str:
    """The dataset as CSV with a trailing ``mgru_index`` column."""
    return format_csv(ds, {INDEX_COLUMN: phi.values})
