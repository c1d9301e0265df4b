import numpy as np
import pytest

from mgru import _backend
from mgru.dataset import Dataset

ACCEPTANCE_RESULTS = []


def two_gaussians(seed, n_maj=500, n_min=50, m=4, separation=2.0):
    """Majority ~ N(0, I); minority shifted so the means are ``separation`` sigma apart."""
    rng = np.random.default_rng(seed)
    shift = np.full(m, separation / np.sqrt(m))
    X = np.vstack([rng.normal(size=(n_maj, m)), rng.normal(size=(n_min, m)) + shift])
    y = np.r_[np.zeros(n_maj), np.ones(n_min)]
    return Dataset(X, y, class_names=("negative", "positive"), source=f"two_gaussians:{seed}")


def random_dataset(rng, n, m, p_min=0.3, duplicates=0):
    X = rng.normal(size=(n, m)) * rng.uniform(0.5, 3.0, size=m)
    y = (rng.random(n) < p_min).astype(int)
    y[0], y[1] = 0, 1
    if y.sum() > n - y.sum():
        y = 1 - y
    for _ in range(duplicates):
        i, j = rng.integers(n, size=2)
        X[j] = X[i]
    return Dataset(X, y)


@pytest.fixture
def overlap_data():
    return two_gaussians(0, n_maj=120, n_min=20)


@pytest.fixture(params=_backend.available())
def kernels(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = _backend.load(request.param)
    for name in ("mgru.baselines", "mgru.complexity", "mgru.evaluation.models"):
        monkeypatch.setattr(f"{name}.kernels", mod)
    return mod


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, ok, text in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {cid}: {text}")
