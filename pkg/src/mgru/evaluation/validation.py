"""Cross-validation and the relabel-threshold sweep.

Samplers only ever see the training part of a fold; the test fold is
scored untouched. Per-fold randomness is seeded with ``seed ^ fold``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from mgru._parallel import ordered_map
from mgru.baselines import random_undersample, tomek_undersample, ucbss_undersample
from mgru.complexity import onb_avg
from mgru.core import RelabeledIndexVector, mgru_fit, undersample
from mgru.dataset import Dataset, stratified_folds
from mgru.distance import MAHALANOBIS, STD_EUCLIDEAN, resolve_metric
from mgru.errors import ExhaustionError
from mgru.evaluation.metrics import score
from mgru.evaluation.models import DecisionTree, KNearestNeighbors

SAMPLERS = ("null", "mgru-md", "mgru-sed", "tomek", "ucbss", "rus")
MGRU_METHODS = {"mgru-md": MAHALANOBIS, "mgru-sed": STD_EUCLIDEAN}
SAMPLING_PROTOCOL = "in-fold"


@dataclass(frozen=True)
class SamplerConfig:
    method: str = "null"
    threshold: int | None = None
    target_ir: float | None = None

    def __post_init__(self):
        if self.method not in SAMPLERS:
            raise ValueError(f"unknown sampler {self.method!r}; expected one of {SAMPLERS}")
        if self.method in MGRU_METHODS and self.threshold is None:
            raise ValueError(f"{self.method} needs a threshold")
        if self.method == "rus" and self.target_ir is None:
            raise ValueError("rus needs a target imbalance ratio")

    def apply(self, ds: Dataset, seed: int, threads=1) -> Dataset:
        if self.method == "null":
            return ds
        if self.method in MGRU_METHODS:
            _, phi = mgru_fit(ds, MGRU_METHODS[self.method], threads)
            return undersample(ds, phi, self.threshold)
        if self.method == "tomek":
            return tomek_undersample(ds)
        if self.method == "ucbss":
            return ucbss_undersample(ds, seed)
        return random_undersample(ds, self.target_ir, seed)


@dataclass(frozen=True)
class ScorerConfig:
    kind: str = "tree"
    max_depth: int = 25
    min_leaf: int = 1
    k: int = 5

    def __post_init__(self):
        if self.kind not in ("tree", "knn"):
            raise ValueError(f"unknown classifier {self.kind!r}")

    def fit(self, train: Dataset):
        if self.kind == "tree":
            return DecisionTree(self.max_depth, self.min_leaf).fit(train)
        return KNearestNeighbors(self.k).fit(train)


def _summary(scores):
    vals = [s for s in scores if s is not None]
    if not vals:
        return math.nan, math.nan
    return float(np.mean(vals)), float(np.std(vals))


def _fit_and_score(train: Dataset, test: Dataset, scorer: ScorerConfig, metric: str) -> float:
    model = scorer.fit(train)
    return score(metric, model.predict_scores(test.features), test.y)


@dataclass(frozen=True, eq=False)
class CVResult:
    mean: float
    std: float
    fold_scores: list  # None where the sampler exhausted the fold
    skipped_folds: int

    def to_dict(self) -> dict:
        return asdict(self)


def cross_validate(
    ds: Dataset,
    sampler: SamplerConfig,
    scorer: ScorerConfig,
    k: int = 10,
    metric: str = "auc",
    seed: int = 42,
    threads=1,
) -> CVResult:
    plan = stratified_folds(ds, k, seed)

    def run(fold):
        train = ds.subset(plan.train_indices(fold))
        test = ds.subset(plan.test_indices(fold))
        try:
            sampled = sampler.apply(train, seed ^ fold)
        except ExhaustionError:
            return None
        return _fit_and_score(sampled, test, scorer, metric)

    scores = ordered_map(run, range(k), threads)
    mean, std = _summary(scores)
    return CVResult(mean, std, scores, sum(s is None for s in scores))


def effective_threshold(K: int, present) -> int | None:
    """``K`` if the fold has it, else the nearest larger value it has.

    ``None`` means the fold has no value >= K, so nothing is deleted.
    """
    larger = [v for v in present if v >= K]
    return min(larger) if larger else None


@dataclass(frozen=True)
class ThresholdScore:
    k: int
    mean: float
    std: float
    missing_folds: int  # folds without this exact index value
    skipped_folds: int  # folds where the deletion emptied the majority class
    fold_scores: list


@dataclass(frozen=True, eq=False)
class SweepReport:
    metric: str
    mgru_metric: str
    per_threshold: list
    best_k: int | None
    best_score: float
    null_score: float
    null_std: float
    null_fold_scores: list
    fold_index_values: list  # distinct positive index values per training fold
    scorer: ScorerConfig
    folds: int
    seed: int
    sampling: str = field(default=SAMPLING_PROTOCOL)
    stratified: bool = True

    def effective_threshold(self, fold: int, K: int) -> int | None:
        return effective_threshold(K, self.fold_index_values[fold])

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "sampler": {"method": _method_for(self.mgru_metric), "metric": self.mgru_metric},
            "scorer": asdict(self.scorer),
            "folds": self.folds,
            "seed": self.seed,
            "sampling": self.sampling,
            "stratified": self.stratified,
            "per_threshold": [
                {
                    "k": t.k,
                    "mean": t.mean,
                    "std": t.std,
                    "missing_folds": t.missing_folds,
                    "skipped_folds": t.skipped_folds,
                    "fold_scores": t.fold_scores,
                }
                for t in self.per_threshold
            ],
            "best_k": self.best_k,
            "best_score": self.best_score,
            "null": {
                "mean": self.null_score,
                "std": self.null_std,
                "fold_scores": self.null_fold_scores,
            },
            "fold_index_values": self.fold_index_values,
        }


def _method_for(mgru_metric: str) -> str:
    return {v: k for k, v in MGRU_METHODS.items()}[mgru_metric]


def greedy_threshold_search(
    ds: Dataset,
    mgru_metric: str = STD_EUCLIDEAN,
    scorer: ScorerConfig = ScorerConfig(),
    k: int = 10,
    seed: int = 42,
    metric: str = "auc",
    threads=1,
) -> SweepReport:
    """Score every relabel threshold seen in any training fold.

    Per fold the relabel index is computed on the training part only. A
    candidate ``K`` missing from a fold is replaced by that fold's nearest
    larger value; with none larger the fold contributes its no-deletion
    score. The best threshold maximises the mean fold score, ties going to
    the larger ``K``.
    """
    mgru_metric = resolve_metric(mgru_metric)
    plan = stratified_folds(ds, k, seed)
    trains = [ds.subset(plan.train_indices(f)) for f in range(k)]
    tests = [ds.subset(plan.test_indices(f)) for f in range(k)]

    def prepare(fold):
        _, phi = mgru_fit(trains[fold], mgru_metric)
        return phi, _fit_and_score(trains[fold], tests[fold], scorer, metric)

    prepared = ordered_map(prepare, range(k), threads)
    phis: list[RelabeledIndexVector] = [p for p, _ in prepared]
    null_scores = [s for _, s in prepared]
    present = [phi.positive_values() for phi in phis]
    candidates = sorted(set().union(*map(set, present)))

    def evaluate(fold):
        out = {}
        for K in candidates:
            eff = effective_threshold(K, present[fold])
            if eff is None or eff in out:
                continue
            try:
                train = undersample(trains[fold], phis[fold], eff)
            except ExhaustionError:
                out[eff] = None
                continue
            out[eff] = _fit_and_score(train, tests[fold], scorer, metric)
        return out

    by_fold = ordered_map(evaluate, range(k), threads)

    rows = []
    for K in candidates:
        scores, missing = [], 0
        for fold in range(k):
            eff = effective_threshold(K, present[fold])
            missing += eff != K
            scores.append(null_scores[fold] if eff is None else by_fold[fold][eff])
        mean, std = _summary(scores)
        rows.append(ThresholdScore(K, mean, std, missing, sum(s is None for s in scores), scores))

    null_mean, null_std = _summary(null_scores)
    best_k, best_score = None, null_mean
    scored = [r for r in rows if not math.isnan(r.mean)]
    if scored:
        top = max(r.mean for r in scored)
        best_k = max(r.k for r in scored if r.mean == top)
        best_score = top
    return SweepReport(
        metric=metric,
        mgru_metric=mgru_metric,
        per_threshold=rows,
        best_k=best_k,
        best_score=best_score,
        null_score=null_mean,
        null_std=null_std,
        null_fold_scores=null_scores,
        fold_index_values=present,
        scorer=scorer,
        folds=k,
        seed=seed,
    )


def training_fold_complexity(
    ds: Dataset,
    sampler: SamplerConfig,
    k: int = 10,
    seed: int = 42,
    threads=1,
) -> list:
    """ONB_avg of each sampled training fold (``None`` if exhausted).

    MGRU thresholds follow the sweep's per-fold rule: a missing value is
    replaced by the nearest larger one, or no deletion when none exists.
    """
    plan = stratified_folds(ds, k, seed)

    def run(fold):
        train = ds.subset(plan.train_indices(fold))
        try:
            if sampler.method in MGRU_METHODS:
                _, phi = mgru_fit(train, MGRU_METHODS[sampler.method])
                eff = effective_threshold(sampler.threshold, phi.positive_values())
                sampled = train if eff is None else undersample(train, phi, eff)
            else:
                sampled = sampler.apply(train, seed ^ fold)
        except ExhaustionError:
            return None
        return onb_avg(sampled).onb_avg

    return ordered_map(run, range(k), threads)
