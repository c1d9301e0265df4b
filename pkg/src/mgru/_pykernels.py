"""Pure numpy versions of the hot kernels.

Same contract as the compiled ``_kernels`` module, and the same results bit
for bit: squared distances are accumulated one feature at a time in column
order (never via BLAS or pairwise summation), and every tie-break matches.
"""
import numpy as np

_BLOCK = 1024


def pairwise_sq_dist(A, B):
    """Squared Euclidean distances, shape (len(A), len(B))."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    D = np.zeros((A.shape[0], B.shape[0]))
    for k in range(A.shape[1]):
        t = A[:, k, None] - B[None, :, k]
        D += t * t
    return D


def min_sq_dist(A, B, exclude_diagonal=False):
    """Per row of ``A``, the smallest squared distance to a row of ``B``.

    With ``exclude_diagonal`` (A and B are the same set) row ``i`` of A
    skips row ``i`` of B.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    out = np.empty(A.shape[0])
    for start in range(0, A.shape[0], _BLOCK):
        stop = min(start + _BLOCK, A.shape[0])
        D = pairwise_sq_dist(A[start:stop], B)
        if exclude_diagonal:
            rows = np.arange(stop - start)
            D[rows, rows + start] = np.inf
        out[start:stop] = D.min(axis=1) if D.shape[1] else np.inf
    return out


def ball_cover(X, enemy_sq):
    """cover[i, j] = 1 when j lies strictly inside the ball centred on i.

    The ball radius is the nearest-enemy distance, passed squared. A ball
    always covers its own centre.
    """
    D = pairwise_sq_dist(X, X)
    cover = D < np.asarray(enemy_sq, dtype=np.float64)[:, None]
    np.fill_diagonal(cover, True)
    return cover.astype(np.uint8)


def greedy_cover(cover, priority):
    """Greedy set cover over the rows of a square 0/1 matrix.

    Each round picks the ball covering the most still-uncovered points;
    ties go to the ball appearing first in ``priority``.
    """
    C = np.asarray(cover).astype(bool)
    priority = np.asarray(priority, dtype=np.intp)
    counts = C.sum(axis=1).astype(np.int64)
    uncovered = np.ones(C.shape[0], dtype=bool)
    selected = []
    while uncovered.any():
        best = int(priority[np.argmax(counts[priority])])
        newly = C[best] & uncovered
        uncovered &= ~newly
        counts -= C[:, newly].sum(axis=1)
        selected.append(best)
    return np.array(selected, dtype=np.intp)


def best_split(X, y, min_leaf):
    """Exhaustive Gini split search.

    Returns ``(feature, threshold, score)`` minimising
    ``aL*bL/nL + aR*bR/nR`` (proportional to the weighted child Gini
    impurity), or ``(-1, nan, inf)`` when no valid split exists. Ties go to
    the lowest feature index, then the lowest threshold.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)
    n, m = X.shape
    total = int(y.sum())
    best = (-1, np.nan, np.inf)
    if n < 2 * min_leaf:
        return best
    n_left = np.arange(1, n)
    n_right = n - n_left
    valid_pos = (n_left >= min_leaf) & (n_right >= min_leaf)
    for f in range(m):
        order = np.argsort(X[:, f], kind="stable")
        v = X[order, f]
        a_left = np.cumsum(y[order])[:-1]
        b_left = n_left - a_left
        a_right = total - a_left
        b_right = n_right - a_right
        score = (a_left * b_left) / n_left + (a_right * b_right) / n_right
        ok = valid_pos & (v[:-1] < v[1:])
        if not ok.any():
            continue
        score = np.where(ok, score, np.inf)
        i = int(np.argmin(score))
        if score[i] < best[2]:
            thr = (v[i] + v[i + 1]) / 2.0
            if thr >= v[i + 1]:
                thr = v[i]
            best = (f, float(thr), float(score[i]))
    return best
