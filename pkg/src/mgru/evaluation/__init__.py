from mgru.evaluation.metrics import ScoredPredictions, auc, aupr
from mgru.evaluation.models import DecisionTree, KNearestNeighbors, fit_knn, fit_tree
from mgru.evaluation.validation import (
    CVResult,
    SamplerConfig,
    ScorerConfig,
    SweepReport,
    cross_validate,
    greedy_threshold_search,
    training_fold_complexity,
)

__all__ = [
    "CVResult",
    "DecisionTree",
    "KNearestNeighbors",
    "SamplerConfig",
    "ScoredPredictions",
    "ScorerConfig",
    "SweepReport",
    "auc",
    "aupr",
    "cross_validate",
    "fit_knn",
    "fit_tree",
    "greedy_threshold_search",
    "training_fold_complexity",
]
