"""Distance kernels and per-view statistics.

Both distances used for ranking are measured against statistics of the
instance set they are given (a training fold restricted to one subspace):

* standardized Euclidean, with per-feature sample standard deviations;
* Mahalanobis, with the inverse sample covariance.

Zero-variance features contribute nothing to the standardized distance.
A numerically singular covariance is ridge-regularized before inversion.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mgru.errors import DegenerateError

MAHALANOBIS = "mahalanobis"
STD_EUCLIDEAN = "std_euclidean"
METRICS = (MAHALANOBIS, STD_EUCLIDEAN)

_ALIASES = {
    "md": MAHALANOBIS,
    "mgru-md": MAHALANOBIS,
    "sed": STD_EUCLIDEAN,
    "mgru-sed": STD_EUCLIDEAN,
}

ZERO_STD = 1e-12
MAX_CONDITION = 1e12
RIDGE_SCALE = 1e-6


def resolve_metric(metric: str) -> str:
    metric = _ALIASES.get(metric.lower(), metric.lower())
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return metric


@dataclass(frozen=True, eq=False)
class DistanceContext:
    mean: np.ndarray
    stds: np.ndarray
    covariance: np.ndarray
    cov_inverse: np.ndarray
    regularized: bool
    ridge: float = 0.0
    condition: float = 1.0  # of the matrix actually inverted


def build_context(view) -> DistanceContext:
    """Mean, standard deviations, covariance and (regularized) inverse.

    The covariance uses the unbiased ``n - 1`` divisor. When its condition
    number exceeds 1e12, or Cholesky factorisation fails, the inverse is
    taken of ``cov + lam * I`` with ``lam = 1e-6 * trace(cov) / d``.
    """
    X = np.asarray(view, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n, d = X.shape
    if n < 2:
        raise DegenerateError(f"need at least 2 instances for a covariance, got {n}")
    if d < 1:
        raise DegenerateError("view has no columns")
    mean = X.mean(axis=0)
    cov = np.atleast_2d(np.cov(X, rowvar=False, ddof=1))
    cov = (cov + cov.T) / 2.0
    stds = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    regularized = False
    ridge = 0.0
    try:
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(cov)
        if not np.isfinite(cond) or cond > MAX_CONDITION:
            raise np.linalg.LinAlgError("ill-conditioned")
        np.linalg.cholesky(cov)
        target = cov
    except np.linalg.LinAlgError:
        regularized = True
        ridge = RIDGE_SCALE * float(np.trace(cov)) / d
        if ridge <= 0.0:
            # every column constant: all centred vectors are zero anyway
            ridge = 1.0
        target = cov + ridge * np.eye(d)
    if regularized:
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(target)
    inverse = np.linalg.inv(target)
    inverse = (inverse + inverse.T) / 2.0
    for a in (mean, stds, cov, inverse):
        a.setflags(write=False)
    return DistanceContext(mean, stds, cov, inverse, regularized, ridge, float(cond))


def _check_dims(a, b):
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def euclidean(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    return float(np.sqrt(np.sum((a - b) ** 2)))


def std_euclidean(a, b, stds) -> float:
    """Euclidean distance after dividing each coordinate gap by its std.

    Coordinates whose std is below 1e-12 are skipped.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    s = np.asarray(stds, dtype=np.float64)
    _check_dims(a, b)
    _check_dims(a, s)
    keep = s >= ZERO_STD
    z = (a[keep] - b[keep]) / s[keep]
    return float(np.sqrt(np.sum(z * z)))


def mahalanobis(a, b, cov_inverse) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    P = np.asarray(cov_inverse, dtype=np.float64)
    if P.shape != (a.size, a.size):
        raise ValueError(f"dimension mismatch: inverse {P.shape} for vectors of {a.size}")
    v = a - b
    return float(np.sqrt(max(float(v @ P @ v), 0.0)))


def distances_to(X, point, ctx: DistanceContext, metric: str) -> np.ndarray:
    """Row-wise distance from every row of ``X`` to ``point``."""
    metric = resolve_metric(metric)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    D = X - np.asarray(point, dtype=np.float64)
    d = D.shape[1]
    # column-by-column accumulation (no BLAS) so equal rows give equal values
    acc = np.zeros(D.shape[0])
    if metric == STD_EUCLIDEAN:
        for k in range(d):
            if ctx.stds[k] >= ZERO_STD:
                z = D[:, k] / ctx.stds[k]
                acc += z * z
        return np.sqrt(acc)
    P = ctx.cov_inverse
    for k in range(d):
        row = np.zeros(D.shape[0])
        for l in range(d):
            row += D[:, l] * P[l, k]
        acc += row * D[:, k]
    return np.sqrt(np.clip(acc, 0.0, None))
