"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--n 2000]

Prints best-of-N wall time per kernel and the speedup, and checks that
both backends return identical results.
"""
import argparse
import time

import numpy as np

from mgru import _backend
from mgru.dataset import Dataset


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.asarray(a).tobytes() == np.asarray(b).tobytes()


def cases(n, m, rng):
    X = rng.normal(size=(n, m))
    y = (rng.random(n) < 0.2).astype(np.int64)
    A, B = X[y == 1], X[y == 0]
    enemy = rng.uniform(0.5, 2.0, size=B.shape[0])
    split_rows = min(n, 1000)
    cover = _backend.load("python").ball_cover(B, enemy)
    priority = np.argsort(enemy, kind="stable")
    return {
        "pairwise_sq_dist": lambda k: k.pairwise_sq_dist(A, B),
        "min_sq_dist": lambda k: k.min_sq_dist(B, A),
        "ball_cover": lambda k: k.ball_cover(B, enemy),
        "greedy_cover": lambda k: k.greedy_cover(cover, priority),
        "best_split": lambda k: k.best_split(X[:split_rows], y[:split_rows], 1),
    }


def sweep_case(seed):
    import mgru.baselines
    import mgru.complexity
    import mgru.evaluation.models
    from mgru.evaluation.validation import greedy_threshold_search

    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(size=(500, 4)), rng.normal(size=(50, 4)) + 1.0])
    ds = Dataset(X, np.r_[np.zeros(500), np.ones(50)])

    def run(k):
        for mod in (mgru.baselines, mgru.complexity, mgru.evaluation.models):
            mod.kernels = k
        return greedy_threshold_search(ds, k=10, seed=seed).best_score

    return run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    names = _backend.available()
    if "cython" not in names:
        print("compiled backend not built; run `pip install -e . --no-build-isolation` first")
        return
    py, cy = _backend.load("python"), _backend.load("cython")
    rng = np.random.default_rng(args.seed)
    jobs = cases(args.n, args.m, rng)
    jobs["sweep (550x4, 10 folds)"] = sweep_case(args.seed)

    print(f"{'kernel':<26}{'python s':>12}{'cython s':>12}{'speedup':>10}  equal")
    for name, fn in jobs.items():
        repeat = 1 if name.startswith("sweep") else args.repeat
        tp, rp = best_of(lambda: fn(py), repeat)
        tc, rc = best_of(lambda: fn(cy), repeat)
        print(f"{name:<26}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x  {same(rp, rc)}")


if __name__ == "__main__":
    main()
