"""Reference under-samplers: Tomek links, modified UCBSS and random."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mgru._backend import kernels
from mgru.core import flag_majority_neighbors
from mgru.dataset import MAJORITY, MINORITY, Dataset, imbalance_ratio
from mgru.errors import ExhaustionError


@dataclass(frozen=True)
class TomekPair:
    minority_index: int
    majority_index: int
    distance: float


@dataclass(frozen=True, eq=False)
class CutPointScan:
    feature: int
    flagged_majority: frozenset


def _drop_majority(ds: Dataset, drop: np.ndarray, what: str) -> Dataset:
    drop = drop & (ds.y == MAJORITY)
    if not drop.any():
        return ds
    if drop.sum() == ds.n_majority:
        raise ExhaustionError(f"{what} would delete all {ds.n_majority} majority instances")
    return ds.subset(~drop)


def tomek_link_pairs(ds: Dataset) -> list[TomekPair]:
    """Opposite-class pairs with no strictly closer third instance.

    With equidistant nearest neighbours an instance can take part in
    several pairs. Sorted by minority index, then majority index.
    """
    X = ds.features
    nearest = kernels.min_sq_dist(X, X, True)
    mins = np.flatnonzero(ds.y == MINORITY)
    majs = np.flatnonzero(ds.y == MAJORITY)
    D = kernels.pairwise_sq_dist(X[mins], X[majs])
    hit = (D == nearest[mins][:, None]) & (D == nearest[majs][None, :])
    a, b = np.nonzero(hit)
    return [
        TomekPair(int(mins[i]), int(majs[j]), float(np.sqrt(D[i, j])))
        for i, j in zip(a, b)
    ]


def tomek_undersample(ds: Dataset) -> Dataset:
    """Remove the majority member of every Tomek pair (single pass)."""
    drop = np.zeros(ds.n, dtype=bool)
    for pair in tomek_link_pairs(ds):
        drop[pair.majority_index] = True
    return _drop_majority(ds, drop, "Tomek-link removal")


def cut_point_scans(ds: Dataset, seed: int) -> list[CutPointScan]:
    """Per feature, the majority instances bordering an unstable cut-point.

    Instances are sorted by the feature value; equal values are put in a
    seeded random order.
    """
    rng = np.random.default_rng(seed)
    scans = []
    for f in range(ds.m):
        tie_key = rng.permutation(ds.n)
        order = np.lexsort((tie_key, ds.features[:, f]))
        flags = flag_majority_neighbors(order, ds.y)
        scans.append(CutPointScan(f, frozenset(np.flatnonzero(flags).tolist())))
    return scans


def ucbss_undersample(ds: Dataset, seed: int) -> Dataset:
    """Keep minority instances and majority ones next to an unstable cut-point."""
    keep = np.zeros(ds.n, dtype=bool)
    for scan in cut_point_scans(ds, seed):
        keep[list(scan.flagged_majority)] = True
    return _drop_majority(ds, ~keep, "UCBSS")


def random_undersample(ds: Dataset, target_ir: float, seed: int) -> Dataset:
    """Uniformly drop majority instances until the imbalance ratio <= ``target_ir``."""
    current = imbalance_ratio(ds)
    if target_ir > current:
        raise ValueError(f"target IR {target_ir} exceeds current IR {current}")
    n_min = ds.n_minority
    keep_n = min(ds.n_majority, int(np.floor(target_ir * n_min)))
    while keep_n + 1 <= ds.n_majority and (keep_n + 1) / n_min <= target_ir:
        keep_n += 1
    while keep_n > 0 and keep_n / n_min > target_ir:
        keep_n -= 1
    if keep_n == ds.n_majority:
        return ds
    if keep_n == 0:
        raise ExhaustionError(f"target IR {target_ir} leaves no majority instances")
    rng = np.random.default_rng(seed)
    majs = np.flatnonzero(ds.y == MAJORITY)
    kept = rng.choice(majs, size=keep_n, replace=False)
    keep = ds.y == MINORITY
    keep[kept] = True
    return ds.subset(keep)
