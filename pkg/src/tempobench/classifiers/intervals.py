"""Fixed-position interval summaries: mean, standard deviation and slope."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..core.rng import Prng
from ..core.validation import check_panel

__all__ = ["sample_intervals", "interval_summaries", "interval_features", "IntervalTransform"]

MIN_SERIES_LENGTH = 6


def sample_intervals(n_timepoints, n_intervals, rng: Prng):
    """``(start, width)`` pairs; width in ``3..n//2``, start in ``0..n-width``."""
    if n_timepoints < MIN_SERIES_LENGTH:
        raise ValueError(f"series length must be >= {MIN_SERIES_LENGTH} for interval features, got {n_timepoints}")
    intervals = []
    for _ in range(n_intervals):
        width = rng.next_int(3, n_timepoints // 2)
        start = rng.next_int(0, n_timepoints - width)
        intervals.append((start, width))
    return intervals


def interval_summaries(segment):
    """Mean, population std and least-squares slope along the last axis."""
    segment = np.asarray(segment, dtype=np.float64)
    t = np.arange(segment.shape[-1], dtype=np.float64)
    t -= t.mean()
    mean = segment.mean(axis=-1)
    std = segment.std(axis=-1)
    slope = ((segment - mean[..., None]) * t).sum(axis=-1) / (t * t).sum()
    return mean, std, slope


def _transform(X, intervals):
    out = np.empty((X.shape[0], 3 * len(intervals)))
    for k, (start, width) in enumerate(intervals):
        mean, std, slope = interval_summaries(X[:, start:start + width])
        out[:, 3 * k] = mean
        out[:, 3 * k + 1] = std
        out[:, 3 * k + 2] = slope
    return out


def interval_features(X_train, X_test, n_intervals=32, rng=None):
    X_train = check_panel(X_train, name="X_train")
    X_test = check_panel(X_test, name="X_test", allow_empty=True)
    intervals = sample_intervals(X_train.shape[1], n_intervals, rng if rng is not None else Prng(0))
    return _transform(X_train, intervals), _transform(X_test, intervals)


class IntervalTransform(TransformerMixin, BaseEstimator):
    """Summaries over ``n_intervals`` random intervals shared by all series.

    Attributes
    ----------
    intervals_ : list of (start, width)
    """

    def __init__(self, n_intervals=32, random_state=0):
        self.n_intervals = n_intervals
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_panel(X)
        self.intervals_ = sample_intervals(X.shape[1], self.n_intervals, Prng(self.random_state))
        return self

    def transform(self, X):
        check_is_fitted(self, "intervals_")
        return _transform(check_panel(X, allow_empty=True), self.intervals_)
