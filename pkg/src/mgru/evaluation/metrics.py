"""Ranking metrics for minority-class scores."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from mgru.errors import LabelError


@dataclass(frozen=True, eq=False)
class ScoredPredictions:
    scores: np.ndarray
    labels: np.ndarray  # 1 = minority

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=np.float64)
        y = np.asarray(self.labels).astype(np.int8)
        if s.shape != y.shape or s.ndim != 1:
            raise ValueError(f"scores {s.shape} and labels {y.shape} must be equal-length vectors")
        if not np.all(np.isfinite(s)):
            raise ValueError("scores must be finite")
        object.__setattr__(self, "scores", s)
        object.__setattr__(self, "labels", y)


def auc(p: ScoredPredictions) -> float:
    """Mann-Whitney AUC with mid-ranks for tied scores."""
    pos = p.labels == 1
    n_pos = int(pos.sum())
    n_neg = p.labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise LabelError("AUC needs both classes in the labels")
    ranks = rankdata(p.scores, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def aupr(p: ScoredPredictions) -> float:
    """Average precision: sum of (R_k - R_{k-1}) * P_k over score thresholds.

    Thresholds are the distinct scores in descending order; tied scores
    enter the ranking together.
    """
    pos = p.labels == 1
    n_pos = int(pos.sum())
    if n_pos == 0:
        raise LabelError("auPR needs at least one minority label")
    order = np.argsort(-p.scores, kind="stable")
    s = p.scores[order]
    tp = np.cumsum(pos[order])
    # last position of each run of equal scores
    ends = np.r_[np.flatnonzero(s[1:] != s[:-1]), s.size - 1]
    tp = tp[ends]
    precision = tp / (ends + 1)
    recall = tp / n_pos
    gain = np.diff(np.r_[0.0, recall])
    return float(np.sum(gain * precision))


METRICS = {"auc": auc, "aupr": aupr}


def score(metric: str, scores, labels) -> float:
    try:
        fn = METRICS[metric]
    except KeyError:
        raise ValueError(f"unknown metric {metric!r}; expected one of {sorted(METRICS)}") from None
    return fn(ScoredPredictions(scores, labels))
