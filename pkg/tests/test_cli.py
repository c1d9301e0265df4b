import json
import os
import re
import subprocess
import sys

import numpy as np
import pytest

from mgru.cli import main
from mgru.dataset import load_dataset, write_csv

from conftest import two_gaussians

STAMP = re.compile(rb'"timestamp":\s*"[^"]*"')


@pytest.fixture
def data_csv(tmp_path):
    path = tmp_path / "d.csv"
    write_csv(two_gaussians(0, 120, 20), path)
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_resample_mgru(tmp_path, data_csv, capsys):
    out = tmp_path / "out.csv"
    assert run("resample", "--input", data_csv, "--method", "mgru-sed", "--threshold", 2, "--output", out) == 0
    header = out.read_text().splitlines()[0]
    assert header.endswith(",mgru_index")
    summary = json.loads(capsys.readouterr().out)
    assert summary["n_after"] == summary["n_before"] - summary["deleted"]
    assert summary["ir_after"] <= summary["ir_before"]
    kept = load_dataset(out, label="class")
    # the index column is read back as an ordinary feature
    assert kept.m == 5 and kept.n == summary["n_after"]
    assert kept.features[:, -1].max() < 2


def test_resample_to_stdout(data_csv, capsys):
    assert run("resample", "--input", data_csv, "--method", "tomek") == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("a1,")
    assert json.loads(captured.err)["command"] == "resample"


def test_complexity_record(data_csv, capsys):
    assert run("complexity", "--input", data_csv) == 0
    text = capsys.readouterr().out
    assert text.count("\n") == 1
    rec = json.loads(text)
    assert 0 < rec["onb_avg"] <= 1
    for key in ("version", "config", "seed", "dataset", "backend"):
        assert key in rec
    assert set(rec["dataset"]) >= {"n", "m", "ir", "hash"}


def test_sweep_report(data_csv, tmp_path):
    out = tmp_path / "sweep.json"
    code = run("sweep", "--input", data_csv, "--method", "mgru-md", "--classifier", "tree",
               "--folds", 5, "--metric", "auc", "--output", out)
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["method"] == "mgru-md"
    assert {"k", "mean", "std", "missing_folds"} <= set(rep["per_threshold"][0])
    assert "best_k" in rep and "best_score" in rep
    assert rep["sampling"] == "in-fold"


def test_evaluate_report(data_csv, capsys):
    assert run("evaluate", "--input", data_csv, "--method", "rus", "--target-ir", 2, "--folds", 4,
               "--classifier", "knn") == 0
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["fold_scores"]) == 4 and 0 <= rep["mean"] <= 1


@pytest.mark.parametrize(
    "argv",
    [
        ["resample", "--method", "mgru-sed"],
        ["resample", "--method", "rus"],
        ["resample", "--method", "tomek", "--target-ir", "2"],
        ["sweep", "--method", "tomek"],
        ["sweep", "--threshold", "2"],
        ["complexity", "--threshold", "2"],
        ["resample", "--method", "mgru-sed", "--threshold", "0"],
        ["resample", "--method", "mgru-sed", "--threshold", "9"],
        ["frobnicate"],
    ],
)
def test_usage_errors(data_csv, argv, capsys):
    args = argv[:1] + (["--input", str(data_csv)] if argv[0] != "frobnicate" else []) + argv[1:]
    assert main(args) == 1
    assert "usage error" in capsys.readouterr().err


def test_data_errors(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,z,y\n1,oops,a\n2,2,b\n")
    assert run("complexity", "--input", bad) == 2
    assert run("complexity", "--input", tmp_path / "missing.csv") == 2
    good = tmp_path / "good.csv"
    write_csv(two_gaussians(1, 40, 6), good)
    # more folds than minority rows depends on the data, not the flags
    assert run("evaluate", "--input", good, "--folds", 50) == 2
    assert "data error" in capsys.readouterr().err


def test_exhaustion_exit_code(tmp_path, capsys):
    path = tmp_path / "tiny.csv"
    path.write_text("x,z,y\n-1,0,a\n1,0,a\n0,0,b\n")
    out = tmp_path / "never.csv"
    assert run("resample", "--input", path, "--method", "tomek", "--output", out) == 3
    assert not out.exists()
    assert "exhausted" in capsys.readouterr().err


def test_failed_run_keeps_previous_output(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("x,z,y\n-1,0,a\n1,0,a\n0,0,b\n")
    out = tmp_path / "keep.csv"
    out.write_text("previous\n")
    assert run("resample", "--input", path, "--method", "tomek", "--output", out) == 3
    assert out.read_text() == "previous\n"
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith("keep")] == ["keep.csv"]


COMMANDS = [
    ["resample", "--method", "mgru-md", "--threshold", "2"],
    ["resample", "--method", "ucbss", "--seed", "5"],
    ["resample", "--method", "rus", "--target-ir", "1.5"],
    ["complexity", "--method", "mgru-sed", "--threshold", "1"],
    ["sweep", "--method", "mgru-sed", "--folds", "4"],
    ["evaluate", "--method", "tomek", "--folds", "4", "--metric", "aupr"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a[:3:2]))
def test_reruns_are_byte_identical(tmp_path, data_csv, argv, monkeypatch, capsys):
    outputs = []
    for threads in ("1", "8", "1"):
        out = tmp_path / f"o{threads}{len(outputs)}"
        assert main(argv[:1] + ["--input", str(data_csv), "--output", str(out), "--threads", threads]
                    + argv[1:]) == 0
        outputs.append((STAMP.sub(b"", out.read_bytes()), STAMP.sub(b"", capsys.readouterr().out.encode())))
    assert outputs[0] == outputs[1] == outputs[2]


def test_threads_env_var(data_csv, monkeypatch, capsys):
    monkeypatch.setenv("OVERLAPCTL_THREADS", "3")
    assert run("complexity", "--input", data_csv) == 0
    a = STAMP.sub(b"", capsys.readouterr().out.encode())
    monkeypatch.setenv("OVERLAPCTL_THREADS", "0")
    assert run("complexity", "--input", data_csv) == 0
    assert a == STAMP.sub(b"", capsys.readouterr().out.encode())


def test_console_entry_point(data_csv):
    proc = subprocess.run(
        [sys.executable, "-m", "mgru", "complexity", "--input", str(data_csv)],
        capture_output=True, text=True, env={**os.environ},
    )
    assert proc.returncode == 0
    assert "onb_avg" in json.loads(proc.stdout)
    bad = subprocess.run([sys.executable, "-m", "mgru", "sweep"], capture_output=True, text=True)
    assert bad.returncode == 1
