"""Built-in scorers: a Gini decision tree and k-nearest neighbours.

Both output a minority-class score in [0, 1] per query row.
"""
from __future__ import annotations

import numpy as np

from mgru._backend import kernels
from mgru.dataset import Dataset


class DecisionTree:
    """Binary CART-style tree on axis-aligned midpoint splits.

    Splits minimise weighted Gini impurity over an exhaustive search; ties
    go to the lowest feature index, then the lowest threshold. A leaf
    scores the minority fraction of its training rows.
    """

    def __init__(self, max_depth=25, min_leaf=1):
        if max_depth < 0 or min_leaf < 1:
            raise ValueError("max_depth must be >= 0 and min_leaf >= 1")
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def fit(self, ds: Dataset) -> "DecisionTree":
        X, y = ds.features, ds.y.astype(np.int64)
        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(rows):
            feature.append(-1)
            threshold.append(np.nan)
            left.append(-1)
            right.append(-1)
            value.append(float(y[rows].mean()))
            return len(feature) - 1

        root = new_node(np.arange(ds.n))
        stack = [(root, np.arange(ds.n), 0)]
        while stack:
            node, rows, depth = stack.pop()
            n_pos = int(y[rows].sum())
            if depth >= self.max_depth or n_pos in (0, rows.size):
                continue
            f, thr, _ = kernels.best_split(X[rows], y[rows], self.min_leaf)
            if f < 0:
                continue
            go_left = X[rows, f] <= thr
            l_rows, r_rows = rows[go_left], rows[~go_left]
            feature[node], threshold[node] = f, thr
            left[node], right[node] = new_node(l_rows), new_node(r_rows)
            stack.append((right[node], r_rows, depth + 1))
            stack.append((left[node], l_rows, depth + 1))

        self.feature_ = np.array(feature, dtype=np.intp)
        self.threshold_ = np.array(threshold)
        self.left_ = np.array(left, dtype=np.intp)
        self.right_ = np.array(right, dtype=np.intp)
        self.value_ = np.array(value)
        return self

    @property
    def depth(self) -> int:
        depth = np.zeros(self.feature_.size, dtype=int)
        for node in range(self.feature_.size):
            if self.feature_[node] >= 0:
                depth[self.left_[node]] = depth[self.right_[node]] = depth[node] + 1
        return int(depth.max())

    def predict_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0])
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, rows = stack.pop()
            f = self.feature_[node]
            if f < 0:
                out[rows] = self.value_[node]
                continue
            go_left = X[rows, f] <= self.threshold_[node]
            stack.append((self.left_[node], rows[go_left]))
            stack.append((self.right_[node], rows[~go_left]))
        return out


class KNearestNeighbors:
    """Minority fraction among the k Euclidean-nearest training rows.

    Distance ties at the k-th place go to the lower training index.
    """

    def __init__(self, k=5):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k

    def fit(self, ds: Dataset) -> "KNearestNeighbors":
        if self.k > ds.n:
            raise ValueError(f"k={self.k} exceeds the {ds.n} training instances")
        self.X_ = ds.features
        self.y_ = ds.y.astype(np.float64)
        return self

    def predict_scores(self, X) -> np.ndarray:
        D = kernels.pairwise_sq_dist(np.asarray(X, dtype=np.float64), self.X_)
        nearest = np.argsort(D, axis=1, kind="stable")[:, : self.k]
        return self.y_[nearest].mean(axis=1)


def fit_tree(train: Dataset, max_depth=25, min_leaf=1) -> DecisionTree:
    return DecisionTree(max_depth, min_leaf).fit(train)


def fit_knn(train: Dataset, k=5) -> KNearestNeighbors:
    return KNearestNeighbors(k).fit(train)
