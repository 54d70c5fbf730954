"""Dataset container, file loaders, synthetic generators, and fold plans."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError, ParseError, ShapeError

TASKS = ("binary", "regression")


@dataclass(frozen=True)
class Dataset:
    """Immutable rows of (feature vector, label).

    Binary tasks require labels in {-1, +1}; regression labels are any
    finite reals.  Arrays are made read-only so a dataset can be shared
    across workers without copies.
    """

    x: np.ndarray
    y: np.ndarray
    task: str

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] < 1:
            raise ShapeError(f"features must be a (rows, dim) matrix, got shape {x.shape}")
        if y.shape != (x.shape[0],):
            raise ShapeError(f"labels of shape {y.shape} do not match {x.shape[0]} rows")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise DataError("dataset contains non-finite values")
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}, expected one of {TASKS}")
        if self.task == "binary" and y.size and not np.all(np.isin(y, (-1.0, 1.0))):
            raise DataError("binary task requires labels in {-1, +1}")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n_rows(self) -> int:
        return int(self.x.shape[0])

    @property
    def dim(self) -> int:
        return int(self.x.shape[1])

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(x=self.x[idx], y=self.y[idx], task=self.task)


@dataclass(frozen=True)
class FoldPlan:
    """Cross-validation assignment: row index -> fold id, sizes differ by <= 1."""

    k: int
    assignments: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.assignments, dtype=np.intp)
        a.flags.writeable = False
        object.__setattr__(self, "assignments", a)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def _infer_binary(y: np.ndarray) -> tuple[np.ndarray, str]:
    """Remap {0, 1} labels to {-1, +1}; classify the task by label range."""
    uniq = np.unique(y)
    if np.all(np.isin(uniq, (-1.0, 1.0))):
        return y, "binary"
    if np.all(np.isin(uniq, (0.0, 1.0))):
        return np.where(y > 0.5, 1.0, -1.0), "binary"
    return y, "regression"


def load_dataset(path: str | Path, fmt: str = "csv") -> Dataset:
    """Load a dataset from disk.

    csv: one header row, comma separated, no quoting; the last column is
    the label.  svmlight: lines of ``label idx:val idx:val ...`` with
    1-based indices, densified up to the largest index seen.
    """
    path = Path(path)
    if fmt == "csv":
        return _load_csv(path)
    if fmt == "svmlight":
        return _load_svmlight(path)
    raise ConfigError(f"unknown dataset format {fmt!r}")


def _load_csv(path: Path) -> Dataset:
    lines = path.read_text().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file")
    n_cols = len(lines[0].split(","))
    if n_cols < 2:
        raise ParseError(f"{path}: line 1: need at least one feature column and a label")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != n_cols:
            raise ParseError(f"{path}: line {lineno}: expected {n_cols} columns, got {len(cells)}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: no data rows")
    mat = np.asarray(rows, dtype=np.float64)
    y, task = _infer_binary(mat[:, -1])
    return Dataset(x=mat[:, :-1], y=y, task=task)


def _load_svmlight(path: Path) -> Dataset:
    labels: list[float] = []
    sparse_rows: list[list[tuple[int, float]]] = []
    max_index = 0
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = line.split()
        try:
            labels.append(float(fields[0]))
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno}: bad label {fields[0]!r}") from exc
        entries = []
        for field in fields[1:]:
            try:
                idx_str, val_str = field.split(":", 1)
                idx = int(idx_str)
                val = float(val_str)
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: bad entry {field!r}") from exc
            if idx < 1:
                raise ParseError(f"{path}: line {lineno}: indices are 1-based, got {idx}")
            entries.append((idx, val))
            max_index = max(max_index, idx)
        sparse_rows.append(entries)
    if not sparse_rows or max_index == 0:
        raise ParseError(f"{path}: no data rows")
    x = np.zeros((len(sparse_rows), max_index))
    for i, entries in enumerate(sparse_rows):
        for idx, val in entries:
            x[i, idx - 1] = val
    y, task = _infer_binary(np.asarray(labels, dtype=np.float64))
    return Dataset(x=x, y=y, task=task)


def synth_classification(
    n: int, d: int, margin_noise: float, seed: int
) -> tuple[Dataset, np.ndarray]:
    """Linearly separable labels with independent flips.

    Features are uniform on [-1, 1]^d, the true separator is a seeded unit
    vector, and each label is flipped with probability ``margin_noise``.
    Returns the dataset and the true weight vector for oracle checks.
    """
    if n < 1 or d < 1:
        raise ConfigError("need n >= 1 and d >= 1")
    if not 0.0 <= margin_noise <= 0.5:
        raise ConfigError("margin_noise must lie in [0, 0.5]")
    rng = np.random.default_rng(seed)
    w_true = rng.standard_normal(d)
    w_true /= np.linalg.norm(w_true)
    x = rng.uniform(-1.0, 1.0, size=(n, d))
    y = np.where(x @ w_true >= 0.0, 1.0, -1.0)
    flips = rng.random(n) < margin_noise
    y[flips] *= -1.0
    return Dataset(x=x, y=y, task="binary"), w_true


def synth_regression(n: int, d: int, noise_sd: float, seed: int) -> tuple[Dataset, np.ndarray]:
    """Linear responses with Gaussian noise of standard deviation noise_sd."""
    if n < 1 or d < 1:
        raise ConfigError("need n >= 1 and d >= 1")
    if noise_sd < 0.0:
        raise ConfigError("noise_sd must be >= 0")
    rng = np.random.default_rng(seed)
    w_true = rng.standard_normal(d)
    w_true /= np.linalg.norm(w_true)
    x = rng.uniform(-1.0, 1.0, size=(n, d))
    y = x @ w_true + noise_sd * rng.standard_normal(n)
    return Dataset(x=x, y=y, task="regression"), w_true


def kfold(dataset: Dataset, k: int, seed: int) -> FoldPlan:
    """Seeded shuffle followed by round-robin fold assignment."""
    if k < 2:
        raise ConfigError(f"need at least 2 folds, got {k}")
    if k > dataset.n_rows:
        raise DataError(f"cannot split {dataset.n_rows} rows into {k} folds")
    perm = np.random.default_rng(seed).permutation(dataset.n_rows)
    assignments = np.empty(dataset.n_rows, dtype=np.intp)
    assignments[perm] = np.arange(dataset.n_rows) % k
    return FoldPlan(k=k, assignments=assignments)
