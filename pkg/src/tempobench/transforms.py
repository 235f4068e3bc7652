"""Dataset transforms: shared-permutation order removal and random-walk padding.

Both come in two flavours: functions over :class:`SplitDataset` used by the
experiment harness, and scikit-learn transformers over plain 2-D arrays.
"""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core.data import SplitDataset
from .core.rng import Prng, derive_seed
from .core.validation import check_panel, check_series

__all__ = [
    "AugmentSpec",
    "make_permutation",
    "apply_shared_permutation",
    "random_walk_pad",
    "augment_instance",
    "augment_panel",
    "augment_dataset",
    "padding_length",
    "SharedPermutation",
    "RandomWalkPadding",
    "DEFAULT_SIGMA",
]

DEFAULT_SIGMA = 0.01


def make_permutation(n: int, seed: int) -> np.ndarray:
    """Fisher-Yates shuffle of ``0..n-1`` drawn from ``Prng(seed)``."""
    if n < 2:
        raise ValueError(f"permutation length must be >= 2, got {n}")
    return np.array(Prng(seed).shuffle(range(n)), dtype=np.int64)


def _check_permutation(perm, n):
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (n,):
        raise ValueError(f"permutation has length {perm.size}, series have length {n}")
    if not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError("index array is not a permutation of 0..n-1")
    return perm


def apply_shared_permutation(dataset: SplitDataset, perm) -> SplitDataset:
    """Reorder every train and test series with the same index: ``out[k] = in[perm[k]]``."""
    perm = _check_permutation(perm, dataset.series_length)
    return dataset.with_panels(dataset.X_train[:, perm], dataset.X_test[:, perm])


def random_walk_pad(anchor: float, length: int, sigma: float, rng: Prng) -> np.ndarray:
    """Gaussian random walk started at ``anchor``; the anchor itself is not emitted."""
    if length < 0:
        raise ValueError(f"padding length must be >= 0, got {length}")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    steps = rng.gaussian_array(length, 0.0, sigma)
    # cumsum adds left to right, matching p_i = p_{i-1} + sigma * z_i
    return np.cumsum(np.concatenate(([float(anchor)], steps)))[1:]


def augment_instance(series, l: int, rng: Prng, sigma: float = DEFAULT_SIGMA):
    """Pad ``series`` with ``l`` random-walk points split between head and tail.

    Returns the padded series and the ``(n_head, n_tail)`` split.  The head
    walk starts at the first value and is reversed before being prepended, so
    it joins the series smoothly.
    """
    x = check_series(series, min_length=1)
    if l < 0:
        raise ValueError(f"total padding length must be >= 0, got {l}")
    if l == 0:
        return x.copy(), (0, 0)
    n_head = rng.next_int(0, l)
    n_tail = l - n_head
    head = random_walk_pad(x[0], n_head, sigma, rng)[::-1]
    tail = random_walk_pad(x[-1], n_tail, sigma, rng)
    return np.concatenate((head, x, tail)), (n_head, n_tail)


def padding_length(l_fraction: float, n: int) -> int:
    """``round(l_fraction * n)``, halves rounded away from zero."""
    if not 0.0 <= l_fraction <= 1.0:
        raise ValueError(f"l_fraction must lie in [0, 1], got {l_fraction}")
    return int(math.floor(l_fraction * n + 0.5))


def augment_panel(X, l: int, sigma: float, seed: int, split_tag: str):
    """Augment each row with its own stream ``derive_seed(seed, split_tag, row)``."""
    X = check_panel(X, min_length=1, allow_empty=True)
    out = np.empty((X.shape[0], X.shape[1] + l), dtype=np.float64)
    records = []
    for i, row in enumerate(X):
        out[i], rec = augment_instance(row, l, Prng(derive_seed(seed, split_tag, i)), sigma)
        records.append(rec)
    return out, records


@dataclass(frozen=True)
class AugmentSpec:
    l_fraction: float
    sigma: float = DEFAULT_SIGMA
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.l_fraction <= 1.0:
            raise ValueError(f"l_fraction must lie in [0, 1], got {self.l_fraction}")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")


def augment_dataset(dataset: SplitDataset, spec: AugmentSpec, return_records=False):
    """Pad every instance of both splits independently.

    The input is expected to be z-normalized already; the output is not
    re-normalized.  With ``return_records`` a dict ``{"train": [...],
    "test": [...]}`` of per-instance ``(n_head, n_tail)`` pairs is returned
    as well.
    """
    l = padding_length(spec.l_fraction, dataset.series_length)
    X_train, rec_train = augment_panel(dataset.X_train, l, spec.sigma, spec.seed, "train")
    X_test, rec_test = augment_panel(dataset.X_test, l, spec.sigma, spec.seed, "test")
    out = dataset.with_panels(X_train, X_test)
    if return_records:
        return out, {"train": rec_train, "test": rec_test}
    return out


class SharedPermutation(TransformerMixin, BaseEstimator):
    """Reorder the time axis of every series with one random index.

    Fit draws the permutation for the series length seen in ``X``; transform
    applies it to any panel of that length, so train and test share it.

    Parameters
    ----------
    random_state : int, default=0
        Seed for :func:`make_permutation`.

    Attributes
    ----------
    permutation_ : ndarray of shape (n_timepoints,)
    """

    def __init__(self, random_state=0):
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_panel(X)
        self.permutation_ = make_permutation(X.shape[1], self.random_state)
        return self

    def transform(self, X):
        check_is_fitted(self, "permutation_")
        X = check_panel(X)
        perm = _check_permutation(self.permutation_, X.shape[1])
        return X[:, perm]


class RandomWalkPadding(TransformerMixin, BaseEstimator):
    """Misalignment augmentation as a stateless transformer.

    Parameters
    ----------
    l_fraction : float, default=0.2
        Total padding per instance as a fraction of the series length.
    sigma : float, default=0.01
        Standard deviation of each random-walk step.
    random_state : int, default=0
    split_tag : str, default="train"
        Mixed into the per-row seed; use different tags for different splits
        to keep their padding draws independent.

    Attributes
    ----------
    records_ : list of (int, int)
        Head/tail lengths from the most recent ``transform`` call.
    """

    def __init__(self, l_fraction=0.2, sigma=DEFAULT_SIGMA, random_state=0, split_tag="train"):
        self.l_fraction = l_fraction
        self.sigma = sigma
        self.random_state = random_state
        self.split_tag = split_tag

    def fit(self, X, y=None):
        check_panel(X, min_length=1)
        return self

    def transform(self, X):
        X = check_panel(X, min_length=1)
        l = padding_length(self.l_fraction, X.shape[1])
        out, self.records_ = augment_panel(X, l, self.sigma, self.random_state, self.split_tag)
        return out
