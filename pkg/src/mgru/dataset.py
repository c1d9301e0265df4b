"""Binary datasets: loading, validation, imbalance accounting and folds.

Labels are stored as a 0/1 vector where ``1`` marks the minority class.
The minority role is fixed when a dataset is first built from raw labels;
subsets derived from it (folds, under-sampled training sets) keep the
same roles even if deletions later make the majority the smaller class.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from mgru.errors import EmptyClassError, FoldError, LabelError, ParseError

MAJORITY = 0
MINORITY = 1

FORMATS = ("csv", "keel_dat")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix plus binary labels.

    Parameters
    ----------
    features : array, shape (n, m)
        Finite real values; copied and frozen.
    y : array, shape (n,)
        ``1`` for minority instances, ``0`` for majority ones.
    feature_names : sequence of str, length m
    class_names : (majority label, minority label)
        Original label strings, used when writing the data back out.
    """

    features: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...] = ()
    class_names: tuple[str, str] = ("majority", "minority")
    label_name: str = "class"
    source: str = ""

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, order="C", copy=True)
        y = np.array(self.y, copy=True)
        if X.ndim != 2:
            raise ParseError(f"features must be a 2-D matrix, got shape {X.shape}")
        n, m = X.shape
        if n < 2:
            raise ParseError(f"need at least 2 instances, got {n}")
        if m < 2:
            raise ParseError(f"need at least 2 features, got {m}")
        if not np.all(np.isfinite(X)):
            raise ParseError("features contain missing or non-finite values")
        if y.shape != (n,):
            raise LabelError(f"expected {n} labels, got shape {y.shape}")
        if not np.all((y == 0) | (y == 1)):
            raise LabelError("label vector must be 0 (majority) / 1 (minority)")
        y = y.astype(np.int8)
        n_min = int(y.sum())
        if n_min == 0 or n_min == n:
            raise EmptyClassError("both classes must be present")
        names = tuple(self.feature_names) or tuple(f"a{k + 1}" for k in range(m))
        if len(names) != m:
            raise ParseError(f"{len(names)} feature names for {m} columns")
        object.__setattr__(self, "features", _readonly(X))
        object.__setattr__(self, "y", _readonly(y))
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "class_names", tuple(self.class_names))

    @classmethod
    def from_labels(
        cls,
        features,
        labels: Sequence,
        positive_label=None,
        **kwargs,
    ) -> "Dataset":
        """Build a dataset from raw labels, picking the minority class.

        The minority is the least frequent label unless ``positive_label``
        names it explicitly. Equal class counts require ``positive_label``.
        """
        labels = [str(v) for v in labels]
        counts = Counter(labels)
        if len(counts) != 2:
            raise LabelError(
                f"expected exactly 2 distinct labels, found {len(counts)}: "
                f"{sorted(counts)[:5]}"
            )
        if positive_label is not None:
            positive_label = str(positive_label)
            if positive_label not in counts:
                raise LabelError(f"positive label {positive_label!r} not present")
            minority = positive_label
        else:
            (a, na), (b, nb) = sorted(counts.items())
            if na == nb:
                raise LabelError(
                    f"classes {a!r} and {b!r} are tied at {na}; "
                    "pass positive_label to choose the minority"
                )
            minority = a if na < nb else b
        majority = next(k for k in counts if k != minority)
        if counts[minority] > counts[majority]:
            raise LabelError(
                f"positive label {minority!r} has more instances than {majority!r}"
            )
        y = np.fromiter((v == minority for v in labels), dtype=np.int8, count=len(labels))
        return cls(features, y, class_names=(majority, minority), **kwargs)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def m(self) -> int:
        return self.features.shape[1]

    @property
    def n_minority(self) -> int:
        return int(self.y.sum())

    @property
    def n_majority(self) -> int:
        return self.n - self.n_minority

    @property
    def minority_mask(self) -> np.ndarray:
        return self.y == MINORITY

    @property
    def labels(self) -> list[str]:
        """Original label strings in row order."""
        return [self.class_names[v] for v in self.y]

    def subset(self, rows) -> "Dataset":
        """Rows ``rows`` (indices or boolean mask), same roles and names."""
        rows = np.asarray(rows)
        return Dataset(
            self.features[rows],
            self.y[rows],
            feature_names=self.feature_names,
            class_names=self.class_names,
            label_name=self.label_name,
            source=self.source,
        )

    def fingerprint(self) -> dict:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.features, dtype="<f8").tobytes())
        h.update(self.y.astype(np.uint8).tobytes())
        h.update("\x00".join(self.class_names).encode())
        return {
            "n": self.n,
            "m": self.m,
            "n_minority": self.n_minority,
            "ir": imbalance_ratio(self),
            "hash": h.hexdigest(),
        }


def imbalance_ratio(ds: Dataset) -> float:
    """Majority count over minority count."""
    return ds.n_majority / ds.n_minority


# -- reading ----------------------------------------------------------------

def _parse_float(token: str, line_no: int, column: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(
            f"line {line_no}: non-numeric value {token!r} in column {column!r}"
        ) from None
    if not math.isfinite(value):
        raise ParseError(f"line {line_no}: missing/non-finite value in column {column!r}")
    return value


def _read_csv(text: str, label: str):
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty CSV file") from None
    if label == "last":
        label_col = len(header) - 1
    elif label in header:
        label_col = header.index(label)
    else:
        raise LabelError(f"label column {label!r} not in header {header}")
    feature_cols = [k for k in range(len(header)) if k != label_col]
    rows, labels = [], []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"line {line_no}: expected {len(header)} fields, got {len(row)}"
            )
        rows.append([_parse_float(row[k].strip(), line_no, header[k]) for k in feature_cols])
        labels.append(row[label_col].strip())
    return rows, labels, [header[k] for k in feature_cols], header[label_col]


_ATTR_RE = re.compile(
    r"^@attribute\s+('[^']*'|\"[^\"]*\"|[^\s{\[]+)\s*(.*)$", re.IGNORECASE
)


def _read_keel(text: str):
    attributes: list[tuple[str, bool]] = []  # (name, is_numeric)
    inputs = outputs = None
    rows, labels = [], []
    in_data = False
    names = out_col = in_cols = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            key = line.split(None, 1)[0].lower()
            if key == "@relation":
                continue
            if key == "@attribute":
                match = _ATTR_RE.match(line)
                if not match:
                    raise ParseError(f"line {line_no}: bad @attribute line")
                name = match.group(1).strip("'\"")
                kind = match.group(2).strip().lower()
                if kind.startswith("{"):
                    attributes.append((name, False))
                elif kind.split("[")[0].strip() in ("real", "integer", "numeric"):
                    attributes.append((name, True))
                else:
                    raise ParseError(f"line {line_no}: unsupported attribute type {kind!r}")
            elif key in ("@inputs", "@input"):
                inputs = [s.strip() for s in line.split(None, 1)[1].split(",")]
            elif key in ("@outputs", "@output"):
                outputs = [s.strip() for s in line.split(None, 1)[1].split(",")]
            elif key == "@data":
                in_data = True
                names = [a for a, _ in attributes]
                if outputs is not None:
                    if len(outputs) != 1 or outputs[0] not in names:
                        raise ParseError(f"@outputs must name one attribute, got {outputs}")
                    out_col = names.index(outputs[0])
                else:
                    out_col = len(names) - 1
                if inputs is not None:
                    missing = [s for s in inputs if s not in names]
                    if missing:
                        raise ParseError(f"@inputs names unknown attributes {missing}")
                    in_cols = [names.index(s) for s in inputs]
                else:
                    in_cols = [k for k in range(len(names)) if k != out_col]
                nominal = [names[k] for k in in_cols if not attributes[k][1]]
                if nominal:
                    raise ParseError(f"nominal input attributes are not supported: {nominal}")
            else:
                raise ParseError(f"line {line_no}: unexpected header line {line!r}")
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != len(names):
            raise ParseError(f"line {line_no}: expected {len(names)} fields, got {len(fields)}")
        rows.append([_parse_float(fields[k], line_no, names[k]) for k in in_cols])
        labels.append(fields[out_col])
    if not in_data:
        raise ParseError("no @data section")
    return rows, labels, [names[k] for k in in_cols], names[out_col]


def load_dataset(
    path,
    format: str | None = None,
    label: str = "last",
    positive_label: str | None = None,
) -> Dataset:
    """Load a CSV or KEEL ``.dat`` file.

    ``format`` defaults to ``keel_dat`` for ``.dat`` files and ``csv``
    otherwise. ``label`` names the label column or is ``"last"``; KEEL
    files take the label from ``@outputs`` (or the last attribute).
    """
    path = Path(path)
    if format is None:
        format = "keel_dat" if path.suffix.lower() == ".dat" else "csv"
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    text = path.read_text(encoding="utf-8-sig")
    if format == "csv":
        rows, labels, names, label_name = _read_csv(text, label)
    else:
        rows, labels, names, label_name = _read_keel(text)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    X = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    return Dataset.from_labels(
        X,
        labels,
        positive_label=positive_label,
        feature_names=tuple(names),
        label_name=label_name,
        source=str(path),
    )


# -- writing ----------------------------------------------------------------

def atomic_write_text(path, text: str) -> None:
    """Write ``text`` to a sibling temp file, then rename over ``path``."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def format_csv(ds: Dataset, extra_columns: Mapping[str, Sequence[int]] | None = None) -> str:
    """CSV text: features (17 significant digits), label, then extras."""
    extra_columns = dict(extra_columns or {})
    for name, col in extra_columns.items():
        if len(col) != ds.n:
            raise ValueError(f"extra column {name!r} has {len(col)} values for {ds.n} rows")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*ds.feature_names, ds.label_name, *extra_columns])
    extras = [list(v) for v in extra_columns.values()]
    for i, (row, lab) in enumerate(zip(ds.features, ds.labels)):
        writer.writerow(
            [f"{v:.17g}" for v in row] + [lab] + [str(int(col[i])) for col in extras]
        )
    return buf.getvalue()


def write_csv(ds: Dataset, path, extra_columns=None) -> None:
    atomic_write_text(path, format_csv(ds, extra_columns))


# -- folds ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FoldPlan:
    k: int
    assignments: np.ndarray
    seed: int
    stratified: bool = field(default=True)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def __iter__(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        for fold in range(self.k):
            yield self.train_indices(fold), self.test_indices(fold)


def stratified_folds(ds: Dataset, k: int, seed: int) -> FoldPlan:
    """Seeded stratified k-fold assignment.

    Each class is shuffled and dealt round-robin; the dealing position
    carries over from the minority to the majority class, so fold sizes
    differ by at most one both per class and overall.
    """
    if k < 2:
        raise FoldError(f"need at least 2 folds, got {k}")
    if k > ds.n_minority:
        raise FoldError(
            f"{k} folds but only {ds.n_minority} minority instances; "
            "some fold would lack the minority class"
        )
    rng = np.random.default_rng(seed)
    assignments = np.empty(ds.n, dtype=np.int64)
    offset = 0
    for cls in (MINORITY, MAJORITY):
        idx = rng.permutation(np.flatnonzero(ds.y == cls))
        assignments[idx] = (offset + np.arange(idx.size)) % k
        offset = (offset + idx.size) % k
    return FoldPlan(k=k, assignments=_readonly(assignments), seed=seed)
