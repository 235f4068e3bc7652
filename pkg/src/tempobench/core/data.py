"""Dataset containers, normalization, scoring and the TSV split format."""

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .validation import check_panel, check_series

__all__ = [
    "Subsequence",
    "SplitDataset",
    "z_normalize",
    "z_normalize_rows",
    "accuracy",
    "intern_labels",
    "read_split_tsv",
    "write_split_tsv",
    "load_dataset",
    "save_dataset",
    "ZERO_VARIANCE_EPS",
]

ZERO_VARIANCE_EPS = 1e-12


class Subsequence(NamedTuple):
    """A window ``parent[start:start + length]`` of a training instance."""

    parent: int
    start: int
    length: int

    def extract(self, X):
        return np.asarray(X)[self.parent, self.start:self.start + self.length]


def z_normalize(series):
    """Zero mean, unit population standard deviation.

    Series whose standard deviation is below 1e-12 map to all zeros.

    >>> z_normalize([1.0, 2.0, 3.0]).round(8).tolist()
    [-1.22474487, 0.0, 1.22474487]
    """
    x = check_series(series, min_length=2)
    return z_normalize_rows(x[np.newaxis, :])[0]


def z_normalize_rows(X):
    X = np.asarray(X, dtype=np.float64)
    centred = X - X.mean(axis=-1, keepdims=True)
    # second pass removes the rounding left in the mean of large-offset rows
    centred -= centred.mean(axis=-1, keepdims=True)
    std = np.sqrt((centred * centred).mean(axis=-1, keepdims=True))
    flat = (std < ZERO_VARIANCE_EPS) | (np.ptp(X, axis=-1, keepdims=True) == 0)
    out = centred / np.where(flat, 1.0, std)
    return np.where(flat, 0.0, out)


def accuracy(predictions, truth) -> float:
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape or predictions.ndim != 1:
        raise ValueError(
            f"predictions and truth must be 1-D of equal length, got {predictions.shape} and {truth.shape}"
        )
    if truth.size == 0:
        raise ValueError("cannot score an empty prediction set")
    return float(np.mean(predictions == truth))


def _label_sort_key(label):
    try:
        return (0, float(label), label)
    except ValueError:
        return (1, 0.0, label)


def intern_labels(*label_lists):
    """Map raw labels (strings) to ``0..C-1``.

    Numeric-looking labels sort numerically, others lexicographically after
    them.  Returns the class tuple and one integer array per input list.
    """
    pooled = {str(lab) for labels in label_lists for lab in labels}
    classes = tuple(sorted(pooled, key=_label_sort_key))
    index = {c: i for i, c in enumerate(classes)}
    encoded = [np.array([index[str(lab)] for lab in labels], dtype=np.int64) for labels in label_lists]
    return classes, encoded


@dataclass(frozen=True, eq=False)
class SplitDataset:
    """Equal-length labelled train and test panels.

    ``y_train`` and ``y_test`` hold interned labels in ``0..C-1``; the raw
    label strings are kept in ``classes``.
    """

    name: str
    X_train: np.ndarray
    y_train: np.ndarray
    X_test: np.ndarray
    y_test: np.ndarray
    classes: tuple = field(default=())

    def __post_init__(self):
        X_train = check_panel(self.X_train, min_length=1, name="X_train")
        X_test = check_panel(self.X_test, min_length=1, name="X_test", allow_empty=True)
        if X_test.shape[0] and X_test.shape[1] != X_train.shape[1]:
            raise ValueError(
                f"train and test series lengths differ ({X_train.shape[1]} vs {X_test.shape[1]})"
            )
        y_train = np.asarray(self.y_train, dtype=np.int64)
        y_test = np.asarray(self.y_test, dtype=np.int64)
        if y_train.shape != (X_train.shape[0],) or y_test.shape != (X_test.shape[0],):
            raise ValueError("label arrays do not match the number of instances")
        missing = set(np.unique(y_test)) - set(np.unique(y_train))
        if missing:
            raise ValueError(f"test classes {sorted(missing)} never appear in train")
        classes = tuple(self.classes) or tuple(str(c) for c in range(int(max(y_train.max(), y_test.max(initial=0))) + 1))
        object.__setattr__(self, "X_train", X_train)
        object.__setattr__(self, "X_test", X_test)
        object.__setattr__(self, "y_train", y_train)
        object.__setattr__(self, "y_test", y_test)
        object.__setattr__(self, "classes", classes)

    @property
    def series_length(self) -> int:
        return self.X_train.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def with_panels(self, X_train, X_test, **changes):
        return replace(self, X_train=X_train, X_test=X_test, **changes)

    def equals(self, other) -> bool:
        return (
            self.name == other.name
            and self.classes == other.classes
            and np.array_equal(self.X_train, other.X_train)
            and np.array_equal(self.X_test, other.X_test)
            and np.array_equal(self.y_train, other.y_train)
            and np.array_equal(self.y_test, other.y_test)
        )

    def z_normalized(self):
        return self.with_panels(z_normalize_rows(self.X_train), z_normalize_rows(self.X_test))


def read_split_tsv(path):
    """Read one split file: label, then values, tab separated, one instance per line."""
    labels, rows = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            if len(fields) < 2:
                raise ValueError(f"{path}:{lineno}: expected a label and at least one value")
            try:
                values = [float(v) for v in fields[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            labels.append(fields[0].strip())
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no instances")
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise ValueError(f"{path}: unequal series lengths {sorted(lengths)}")
    X = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{path}: contains missing or non-finite values")
    return labels, X


def write_split_tsv(path, labels: Sequence[str], X):
    with open(path, "w", encoding="utf-8") as fh:
        for lab, row in zip(labels, np.asarray(X, dtype=np.float64)):
            fh.write("\t".join([str(lab)] + [repr(float(v)) for v in row]))
            fh.write("\n")


def load_dataset(directory, name=None):
    """Load ``<name>_TRAIN.tsv`` and ``<name>_TEST.tsv`` from ``directory``.

    When ``name`` is omitted it is inferred from the single ``*_TRAIN.tsv``
    file in the directory.
    """
    directory = Path(directory)
    if name is None:
        found = sorted(directory.glob("*_TRAIN.tsv"))
        if len(found) != 1:
            raise ValueError(f"{directory}: expected exactly one *_TRAIN.tsv file, found {len(found)}")
        name = found[0].name[: -len("_TRAIN.tsv")]
    train_labels, X_train = read_split_tsv(directory / f"{name}_TRAIN.tsv")
    test_labels, X_test = read_split_tsv(directory / f"{name}_TEST.tsv")
    classes, (y_train, y_test) = intern_labels(train_labels, test_labels)
    return SplitDataset(name, X_train, y_train, X_test, y_test, classes)


def save_dataset(dataset: SplitDataset, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    classes = dataset.classes
    write_split_tsv(directory / f"{dataset.name}_TRAIN.tsv", [classes[i] for i in dataset.y_train], dataset.X_train)
    write_split_tsv(directory / f"{dataset.name}_TEST.tsv", [classes[i] for i in dataset.y_test], dataset.X_test)
    return directory
