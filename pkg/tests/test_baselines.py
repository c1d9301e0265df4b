import numpy as np
import pytest

from mgru.baselines import (
    cut_point_scans,
    random_undersample,
    tomek_link_pairs,
    tomek_undersample,
    ucbss_undersample,
)
from mgru.dataset import Dataset, imbalance_ratio
from mgru.errors import ExhaustionError

from conftest import random_dataset
from oracles import tomek_pairs


def line(values, y):
    """1-D data padded with a constant second feature."""
    return Dataset(np.column_stack([values, np.zeros(len(values))]), y)


def test_tomek_one_dimensional_example(kernels):
    ds = line([0.0, 0.4, 2.0, 0.5], [0, 0, 0, 1])
    pairs = tomek_link_pairs(ds)
    assert [(p.minority_index, p.majority_index) for p in pairs] == [(3, 1)]
    assert pairs[0].distance == pytest.approx(0.1)
    assert {(p.minority_index, p.majority_index) for p in pairs} == tomek_pairs(ds.features, ds.y)
    out = tomek_undersample(ds)
    assert out.features[:, 0].tolist() == [0.0, 2.0, 0.5]


def test_tomek_separated_clusters(kernels):
    rng = np.random.default_rng(0)
    X = np.vstack([rng.uniform(0, 1, size=(20, 2)), rng.uniform(100, 101, size=(5, 2))])
    ds = Dataset(X, np.r_[np.zeros(20), np.ones(5)])
    assert tomek_link_pairs(ds) == []
    assert tomek_undersample(ds) is ds


def test_tomek_two_points(kernels):
    ds = Dataset([[0.0, 0.0], [1.0, 1.0]], [0, 1])
    assert len(tomek_link_pairs(ds)) == 1
    with pytest.raises(ExhaustionError):
        tomek_undersample(ds)


def test_tomek_equidistant_neighbours(kernels):
    # minority at 0 with majority at -1 and +1: both pairs qualify
    ds = line([-1.0, 1.0, 0.0, 5.0], [0, 0, 1, 0])
    assert {(p.minority_index, p.majority_index) for p in tomek_link_pairs(ds)} == {(2, 0), (2, 1)}


def test_tomek_not_idempotent(kernels):
    # dropping 0.5 makes 0.0 and 1.2 mutual nearest neighbours
    ds = line([0.0, 0.5, 1.2, 3.0], [1, 0, 0, 0])
    once = tomek_undersample(ds)
    twice = tomek_undersample(once)
    assert once.n == 3 and twice.n == 2


def test_tomek_matches_oracle(kernels):
    rng = np.random.default_rng(7)
    for trial in range(15):
        ds = random_dataset(rng, int(rng.integers(2, 60)), int(rng.integers(2, 5)), duplicates=trial % 2)
        got = {(p.minority_index, p.majority_index) for p in tomek_link_pairs(ds)}
        assert got == tomek_pairs(ds.features, ds.y)


def test_ucbss_hand_scan(kernels):
    values = [1.0, 2.0, 3.0, 9.0]
    ds = Dataset(np.column_stack([values, values]), [0, 1, 0, 0])
    scans = cut_point_scans(ds, seed=0)
    assert [sorted(s.flagged_majority) for s in scans] == [[0, 2], [0, 2]]
    out = ucbss_undersample(ds, seed=0)
    assert out.features[:, 0].tolist() == [1.0, 2.0, 3.0]


def test_ucbss_interleaved_keeps_everything(kernels):
    x = np.arange(10.0)
    ds = Dataset(np.column_stack([x, x[::-1]]), [0, 1] * 5)
    assert ucbss_undersample(ds, seed=3) is ds


def test_ucbss_separated_flags_boundary_only(kernels):
    X = np.array([[i, i] for i in range(5)] + [[10.0, 10.0], [11.0, 11.0]])
    ds = Dataset(X, [0] * 5 + [1, 1])
    for scan in cut_point_scans(ds, seed=1):
        assert scan.flagged_majority == {4}
    assert ucbss_undersample(ds, seed=1).n == 3


def test_ucbss_seed_only_breaks_ties(kernels):
    ds = random_dataset(np.random.default_rng(2), 50, 4)
    a = ucbss_undersample(ds, seed=1)
    b = ucbss_undersample(ds, seed=99)
    assert a.features.tobytes() == b.features.tobytes()
    tied = Dataset(np.round(ds.features), ds.y)
    assert ucbss_undersample(tied, 5).features.tobytes() == ucbss_undersample(tied, 5).features.tobytes()


def test_rus_examples():
    ds = Dataset(np.random.default_rng(0).normal(size=(12, 2)), [0] * 10 + [1] * 2)
    assert random_undersample(ds, imbalance_ratio(ds), seed=1) is ds
    out = random_undersample(ds, 1.0, seed=1)
    assert out.n_majority == 2 and out.n_minority == 2
    again = random_undersample(ds, 1.0, seed=1)
    assert out.features.tobytes() == again.features.tobytes()
    assert random_undersample(ds, 2.4, seed=4).n_majority == 4
    with pytest.raises(ValueError):
        random_undersample(ds, 6.0, seed=1)
    with pytest.raises(ExhaustionError):
        random_undersample(ds, 0.1, seed=1)


def test_samplers_preserve_minority_and_order(kernels):
    rng = np.random.default_rng(9)
    for _ in range(5):
        ds = random_dataset(rng, 60, 3, p_min=0.2)
        for out in (
            tomek_undersample(ds),
            ucbss_undersample(ds, seed=2),
            random_undersample(ds, 1.5, seed=2),
        ):
            np.testing.assert_array_equal(out.features[out.y == 1], ds.features[ds.y == 1])
            # survivors are an ordered subsequence of the input rows
            pos = [int(np.flatnonzero((ds.features == row).all(axis=1))[0]) for row in out.features]
            assert pos == sorted(pos)
