"""Datasets for specification mining: CSV I/O, synthesis, windowing, binning, splits.

A Dataset is an immutable (features, labels, task) triple. All operations
here are pure functions of their arguments, including the seed, so runs
are reproducible and values can be shared freely across threads.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

__all__ = [
    "TaskKind",
    "Dataset",
    "DatasetStats",
    "load_csv",
    "save_csv",
    "split",
    "synth_spiral",
    "synth_throughput_series",
    "window_timeseries",
    "bin_labels",
]


class TaskKind(Enum):
    """Kind of prediction problem the labels encode."""

    CLASSIFICATION = "classification"
    REGRESSION = "regression"


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Dataset:
    """An N x k feature matrix with one label per row.

    Classification labels are non-negative integers; regression labels are
    finite reals. All feature values must be finite.
    """

    features: np.ndarray
    labels: np.ndarray
    task: TaskKind
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        feats = np.array(self.features, dtype=np.float64)
        if feats.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {feats.shape}")
        n, k = feats.shape
        if n < 1 or k < 1:
            raise ValueError(f"need at least one row and one feature, got shape {feats.shape}")
        if not np.all(np.isfinite(feats)):
            r, c = np.argwhere(~np.isfinite(feats))[0]
            raise ValueError(f"non-finite feature value at row {r}, column {c}")

        labels = np.asarray(self.labels)
        if labels.shape != (n,):
            raise ValueError(f"labels must have shape ({n},), got {labels.shape}")
        vals = labels.astype(np.float64)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"non-finite label at row {np.argwhere(~np.isfinite(vals))[0][0]}")
        if self.task is TaskKind.CLASSIFICATION:
            ints = vals.astype(np.int64)
            if np.any(vals != ints) or np.any(ints < 0):
                bad = int(np.argwhere((vals != ints) | (ints < 0))[0][0])
                raise ValueError(
                    f"classification labels must be non-negative integers; row {bad} has {vals[bad]!r}"
                )
            labels = ints
        else:
            labels = vals

        object.__setattr__(self, "features", _readonly(feats))
        object.__setattr__(self, "labels", _readonly(np.array(labels)))
        if self.feature_names is not None:
            names = tuple(str(s) for s in self.feature_names)
            if len(names) != k:
                raise ValueError(f"{len(names)} feature names for {k} features")
            object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def num_classes(self) -> int:
        if self.task is not TaskKind.CLASSIFICATION:
            raise ValueError("num_classes is only defined for classification datasets")
        return int(self.labels.max()) + 1

    def take(self, indices: np.ndarray) -> "Dataset":
        """Row-subset copy preserving task and names."""
        return Dataset(self.features[indices], self.labels[indices], self.task, self.feature_names)


@dataclass(frozen=True)
class DatasetStats:
    """Per-feature value ranges, plus the label range for regression data."""

    x_min: np.ndarray
    x_max: np.ndarray
    y_min: float | None = None
    y_max: float | None = None

    def __post_init__(self):
        lo = _readonly(np.array(self.x_min, dtype=np.float64))
        hi = _readonly(np.array(self.x_max, dtype=np.float64))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("x_min and x_max must be 1-D vectors of equal length")
        if np.any(lo > hi):
            raise ValueError("x_min must not exceed x_max")
        if (self.y_min is None) != (self.y_max is None):
            raise ValueError("y_min and y_max must be given together")
        if self.y_min is not None and self.y_min > self.y_max:
            raise ValueError("y_min must not exceed y_max")
        object.__setattr__(self, "x_min", lo)
        object.__setattr__(self, "x_max", hi)

    @classmethod
    def from_datasets(cls, *parts: Dataset) -> "DatasetStats":
        """Stats over the union of one or more folds of the same dataset."""
        if not parts:
            raise ValueError("need at least one dataset")
        if len({p.task for p in parts}) != 1 or len({p.dim for p in parts}) != 1:
            raise ValueError("all folds must share task kind and feature dimension")
        x_min = np.min([p.features.min(axis=0) for p in parts], axis=0)
        x_max = np.max([p.features.max(axis=0) for p in parts], axis=0)
        if parts[0].task is TaskKind.REGRESSION:
            y_min = float(min(p.labels.min() for p in parts))
            y_max = float(max(p.labels.max() for p in parts))
            return cls(x_min, x_max, y_min, y_max)
        return cls(x_min, x_max)

    def to_dict(self) -> dict:
        d = {"x_min": [float(v) for v in self.x_min], "x_max": [float(v) for v in self.x_max]}
        if self.y_min is not None:
            d["y_min"] = float(self.y_min)
            d["y_max"] = float(self.y_max)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetStats":
        return cls(d["x_min"], d["x_max"], d.get("y_min"), d.get("y_max"))


def load_csv(path, label_column, task: TaskKind) -> Dataset:
    """Read a headered CSV (UTF-8, '.' decimal) into a Dataset.

    label_column selects the label column by header name (str) or zero-based
    position (int); it is removed from the features. Row order is preserved.
    Parse problems are reported with the file line and column they occur at.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        table = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1) if row]
    if not table:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in table[0][1]]
    body = table[1:]
    if not body:
        raise ValueError(f"{path}: no data rows after the header")

    if isinstance(label_column, int):
        if not 0 <= label_column < len(header):
            raise ValueError(f"{path}: label column index {label_column} out of range for {len(header)} columns")
        label_idx = label_column
    else:
        if label_column not in header:
            raise ValueError(f"{path}: label column {label_column!r} not found in header {header}")
        label_idx = header.index(label_column)

    feat_cols = [j for j in range(len(header)) if j != label_idx]
    features = np.empty((len(body), len(feat_cols)))
    labels = np.empty(len(body))
    for i, (lineno, row) in enumerate(body):
        if len(row) != len(header):
            raise ValueError(f"{path}: line {lineno} has {len(row)} cells, expected {len(header)}")
        parsed = []
        for j, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric value {cell!r} at line {lineno}, column {header[j]!r}"
                ) from None
            if not math.isfinite(v):
                raise ValueError(f"{path}: non-finite value {cell!r} at line {lineno}, column {header[j]!r}")
            parsed.append(v)
        labels[i] = parsed[label_idx]
        features[i] = [parsed[j] for j in feat_cols]

    names = tuple(header[j] for j in feat_cols)
    return Dataset(features, labels, task, names)


def save_csv(data: Dataset, path) -> None:
    """Write a Dataset as a headered CSV, label in the last column 'label'."""
    names = data.feature_names or tuple(f"x{j}" for j in range(data.dim))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + ["label"])
        as_int = data.task is TaskKind.CLASSIFICATION
        for x, y in zip(data.features, data.labels):
            writer.writerow([repr(float(v)) for v in x] + [int(y) if as_int else repr(float(y))])


def split(data: Dataset, gen_fraction: float, seed: int, shuffle: bool = True) -> tuple[Dataset, Dataset]:
    """Partition rows into a generation fold and an evaluation fold.

    The generation fold receives the first floor(gen_fraction * N) rows of a
    seeded shuffle (or of the original order when shuffle=False). The folds
    are disjoint and jointly contain every input row exactly once.
    """
    if data.n < 2:
        raise ValueError("need at least 2 rows to split")
    if not 0.0 < gen_fraction < 1.0:
        raise ValueError(f"gen_fraction must lie in (0, 1), got {gen_fraction}")
    n_gen = int(gen_fraction * data.n)
    if n_gen < 1 or n_gen >= data.n:
        raise ValueError(f"gen_fraction {gen_fraction} leaves an empty fold for {data.n} rows")
    order = np.random.default_rng(seed).permutation(data.n) if shuffle else np.arange(data.n)
    return data.take(order[:n_gen]), data.take(order[n_gen:])


def synth_spiral(points_per_class: int = 300, classes: int = 3, noise_std: float = 0.2, seed: int = 0) -> Dataset:
    """Interleaved 2-D spiral arms, one arm per class.

    Point i of class c sits at radius r = i / points_per_class and angle
    2*pi*c/classes + 3*pi*r plus Gaussian angle noise. Deterministic under
    the seed.
    """
    if points_per_class < 1:
        raise ValueError("points_per_class must be >= 1")
    if classes < 2:
        raise ValueError("classes must be >= 2")
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    rng = np.random.default_rng(seed)
    blocks, labels = [], []
    for c in range(classes):
        r = np.arange(points_per_class) / points_per_class
        theta = 2.0 * np.pi * c / classes + r * 3.0 * np.pi
        theta = theta + rng.normal(0.0, noise_std, points_per_class)
        blocks.append(np.column_stack([r * np.sin(theta), r * np.cos(theta)]))
        labels.append(np.full(points_per_class, c, dtype=np.int64))
    return Dataset(np.vstack(blocks), np.concatenate(labels), TaskKind.CLASSIFICATION, ("x0", "x1"))


def synth_throughput_series(length: int, seed: int = 0, peak: float = 100.0) -> np.ndarray:
    """Synthetic link-throughput trace: runs of rising, falling, and flat trend.

    Values lie in [0, peak]. Deterministic under the seed. Intended as demo
    input for windowing; real traces arrive through load_csv instead.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    if peak <= 0:
        raise ValueError("peak must be positive")
    rng = np.random.default_rng(seed)
    level = float(rng.uniform(0.25, 0.75))
    out = []
    while len(out) < length:
        run = int(rng.integers(6, 24))
        drift = float(rng.choice([-0.05, -0.02, 0.0, 0.02, 0.05]))
        for _ in range(run):
            level = float(np.clip(level + drift + rng.normal(0.0, 0.008), 0.0, 1.0))
            out.append(level)
    return peak * np.asarray(out[:length])


def window_timeseries(series, window: int) -> Dataset:
    """Slide a window over a series: features are the window, label the next value."""
    s = np.asarray(series, dtype=np.float64).ravel()
    if window < 1:
        raise ValueError("window must be >= 1")
    if s.size <= window:
        raise ValueError(f"series of length {s.size} is too short for window {window}")
    features = np.lib.stride_tricks.sliding_window_view(s, window)[:-1]
    labels = s[window:]
    names = tuple(f"x{j}" for j in range(window))
    return Dataset(features, labels, TaskKind.REGRESSION, names)


def bin_labels(data: Dataset, bins: int, bin_features: bool = False) -> Dataset:
    """Quantize regression labels into `bins` ranges of the observed maximum.

    A label y becomes floor(bins * y / y_max) clamped to [0, bins-1], where
    y_max is the dataset maximum, so bin b covers fractions [b/bins,
    (b+1)/bins) of the top value and the top value itself clamps into the
    last bin. With bin_features=True the features (which must share the
    labels' unit, as windowed series do) are mapped to bin indices with the
    same rule and the shared maximum.
    """
    if data.task is not TaskKind.REGRESSION:
        raise ValueError("bin_labels expects a regression dataset")
    if bins < 2:
        raise ValueError("bins must be >= 2")
    y_max = float(data.labels.max())
    if bin_features:
        y_max = max(y_max, float(data.features.max()))
    if y_max <= 0:
        raise ValueError("binning needs a positive maximum value")

    def to_bins(values):
        return np.clip(np.floor(bins * values / y_max), 0, bins - 1)

    feats = to_bins(data.features) if bin_features else data.features
    return Dataset(feats, to_bins(data.labels).astype(np.int64), TaskKind.CLASSIFICATION, data.feature_names)
