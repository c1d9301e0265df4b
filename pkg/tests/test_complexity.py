import numpy as np
import pytest

from mgru.complexity import onb_avg, pure_radius
from mgru.dataset import Dataset

from conftest import random_dataset
from oracles import greedy_ball_count


def line(values, y):
    return Dataset(np.column_stack([values, np.zeros(len(values))]), y)


def test_pure_radius_examples(kernels):
    ds = line([0.0, 1.0, 3.0], [0, 0, 1])
    assert pure_radius(ds, 1) == 2.0
    dup = line([0.0, 0.0, 4.0], [0, 1, 0])
    assert pure_radius(dup, 0) == 0.0
    pair = Dataset([[0.0, 0.0], [3.0, 4.0]], [0, 1])
    assert pure_radius(pair, 0) == pure_radius(pair, 1) == 5.0


def clusters(n_maj=10, n_min=5, seed=0):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(size=(n_maj, 2)) * 0.01, rng.normal(size=(n_min, 2)) * 0.01 + 100])
    return Dataset(X, np.r_[np.zeros(n_maj), np.ones(n_min)])


def test_far_clusters(kernels):
    res = onb_avg(clusters())
    assert [c.balls for c in res.per_class] == [1, 1]
    assert [c.size for c in res.per_class] == [10, 5]
    assert res.onb_avg == pytest.approx((1 / 10 + 1 / 5) / 2)


def test_alternating_line_is_maximal(kernels):
    ds = line(np.arange(12.0), [0, 1] * 6)
    res = onb_avg(ds)
    assert res.onb_avg == 1.0
    assert all(c.balls == c.size for c in res.per_class)


def test_single_minority_term(kernels):
    ds = line([0.0, 1.0, 2.0, 10.0, 1.5], [0, 0, 0, 0, 1])
    res = onb_avg(ds)
    b_maj = res.per_class[0].balls
    assert res.per_class[1].balls == 1
    assert res.onb_avg == pytest.approx((1 + b_maj / 4) / 2)


def test_cross_class_duplicates_still_pure(kernels):
    ds = line([0.0, 0.0, 1.0, 2.0], [0, 1, 0, 1])
    res = onb_avg(ds)
    # the duplicated point has radius 0 and covers only itself
    assert 0 < res.onb_avg <= 1


def test_matches_greedy_oracle(kernels):
    rng = np.random.default_rng(4)
    for trial in range(10):
        ds = random_dataset(rng, int(rng.integers(4, 70)), int(rng.integers(2, 5)), duplicates=trial % 3)
        res = onb_avg(ds)
        for cover in res.per_class:
            assert cover.centers.tolist() == greedy_ball_count(ds.features, ds.y, cover.class_id)
        assert 0 < res.onb_avg <= 1


def test_duplicate_inside_selected_ball_never_adds_balls(kernels):
    rng = np.random.default_rng(8)
    for _ in range(10):
        ds = random_dataset(rng, 40, 2)
        res = onb_avg(ds)
        cover = res.per_class[0]
        center = cover.centers[0]
        X = np.vstack([ds.features, ds.features[center]])
        grown = onb_avg(Dataset(X, np.r_[ds.y, 0]))
        assert grown.per_class[0].balls <= cover.balls


def test_permutation_keeps_ball_counts(kernels):
    rng = np.random.default_rng(1)
    ds = random_dataset(rng, 60, 3)
    perm = rng.permutation(60)
    a = onb_avg(ds)
    b = onb_avg(Dataset(ds.features[perm], ds.y[perm]))
    assert [c.balls for c in a.per_class] == [c.balls for c in b.per_class]
    assert a.onb_avg == b.onb_avg


def test_deleting_covered_majority_raises_score(kernels):
    ds = clusters(n_maj=10, n_min=5)
    before = onb_avg(ds)
    center = before.per_class[0].centers[0]
    majority = np.flatnonzero(ds.y == 0)
    drop = [i for i in majority if i != center][:5]
    keep = np.setdiff1d(np.arange(ds.n), drop)
    after = onb_avg(ds.subset(keep))
    assert after.per_class[0].balls == before.per_class[0].balls
    assert after.onb_avg > before.onb_avg
