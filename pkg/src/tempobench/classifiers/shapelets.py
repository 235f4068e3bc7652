"""Random shapelet discovery scored by information gain."""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..core.data import Subsequence, z_normalize_rows
from ..core.rng import Prng
from ..core.validation import check_panel, check_series
from ._base import encode_training_labels

__all__ = [
    "shapelet_min_distance",
    "min_distance_profile",
    "information_gain",
    "best_information_gain",
    "shapelet_select",
    "ShapeletTransform",
]

MIN_SERIES_LENGTH = 10


def _normalized_windows(X, width):
    return z_normalize_rows(sliding_window_view(X, width, axis=-1))


def min_distance_profile(shapelet, X, windows=None):
    """Min length-normalised squared distance from ``shapelet`` to each row of ``X``.

    ``windows`` may carry precomputed z-normalised windows of matching width.
    """
    shapelet = np.asarray(shapelet, dtype=np.float64)
    width = shapelet.shape[0]
    if width > X.shape[-1]:
        raise ValueError(f"shapelet length {width} exceeds series length {X.shape[-1]}")
    if windows is None:
        windows = _normalized_windows(X, width)
    return ((windows - shapelet) ** 2).sum(axis=-1).min(axis=-1) / width


def shapelet_min_distance(shapelet, series) -> float:
    """Best match of an (already z-normalised) shapelet over all windows of ``series``."""
    x = check_series(series, min_length=1)
    s = check_series(shapelet, min_length=1, name="shapelet")
    return float(min_distance_profile(s, x[np.newaxis, :])[0])


def _entropy(counts):
    total = counts.sum(axis=-1, keepdims=True)
    p = np.divide(counts, total, out=np.zeros_like(counts, dtype=np.float64), where=total > 0)
    logs = np.log2(p, out=np.zeros_like(p), where=p > 0)
    return -(p * logs).sum(axis=-1)


def information_gain(y, left_mask):
    y = np.asarray(y)
    classes, y_enc = np.unique(y, return_inverse=True)
    counts = np.bincount(y_enc, minlength=classes.shape[0]).astype(np.float64)
    left = np.bincount(y_enc[left_mask], minlength=classes.shape[0]).astype(np.float64)
    right = counts - left
    n = counts.sum()
    return float(_entropy(counts) - left.sum() / n * _entropy(left) - right.sum() / n * _entropy(right))


def best_information_gain(distances, y):
    """Highest gain over thresholds midway between consecutive distinct distances.

    Returns ``(gain, threshold)``; ``threshold`` is ``None`` when every
    distance is equal.
    """
    distances = np.asarray(distances, dtype=np.float64)
    _, y_enc = np.unique(np.asarray(y), return_inverse=True)
    n_classes = int(y_enc.max()) + 1
    order = np.argsort(distances, kind="stable")
    d = distances[order]
    onehot = np.zeros((d.shape[0], n_classes))
    onehot[np.arange(d.shape[0]), y_enc[order]] = 1.0
    left = np.cumsum(onehot, axis=0)[:-1]
    cut = np.flatnonzero(d[1:] > d[:-1])
    if cut.size == 0:
        return 0.0, None
    total = left[-1] + onehot[-1]
    left = left[cut]
    right = total - left
    n = d.shape[0]
    n_left = left.sum(axis=1)
    gains = _entropy(total) - n_left / n * _entropy(left) - (n - n_left) / n * _entropy(right)
    best = int(np.argmax(gains))
    return float(gains[best]), float((d[cut[best]] + d[cut[best] + 1]) / 2)


def _width_bounds(n_timepoints):
    lo = max(3, int(0.1 * n_timepoints))
    hi = int(0.4 * n_timepoints)
    if n_timepoints < MIN_SERIES_LENGTH or lo > hi:
        raise ValueError(f"series length {n_timepoints} too short for shapelet windows")
    return lo, hi


def shapelet_select(X, y, n_candidates=200, n_shapelets=20, rng=None):
    """Sample candidates and keep the ``n_shapelets`` with highest gain.

    Returns a list of ``(shapelet, Subsequence, gain)`` triples in
    descending gain order; ties keep the earlier candidate first.
    """
    X = check_panel(X, name="X")
    y = np.asarray(y)
    if np.unique(y).shape[0] < 2:
        raise ValueError("shapelet selection needs at least two classes")
    rng = rng if rng is not None else Prng(0)
    lo, hi = _width_bounds(X.shape[1])
    window_cache = {}
    candidates = []
    for _ in range(n_candidates):
        parent = rng.next_int(0, X.shape[0] - 1)
        width = rng.next_int(lo, hi)
        start = rng.next_int(0, X.shape[1] - width)
        sub = Subsequence(parent, start, width)
        shapelet = z_normalize_rows(sub.extract(X))
        if width not in window_cache:
            window_cache[width] = _normalized_windows(X, width)
        gain, _ = best_information_gain(min_distance_profile(shapelet, X, window_cache[width]), y)
        candidates.append((shapelet, sub, gain))
    order = sorted(range(len(candidates)), key=lambda i: -candidates[i][2])
    return [candidates[i] for i in order[:n_shapelets]]


class ShapeletTransform(TransformerMixin, BaseEstimator):
    """Distance of each series to the best randomly sampled shapelets.

    Parameters
    ----------
    n_candidates : int, default=200
    n_shapelets : int, default=20
    random_state : int, default=0

    Attributes
    ----------
    shapelets_ : list of ndarray
    subsequences_ : list of Subsequence
        Where each kept shapelet was cut from the training data.
    gains_ : ndarray
    """

    def __init__(self, n_candidates=200, n_shapelets=20, random_state=0):
        self.n_candidates = n_candidates
        self.n_shapelets = n_shapelets
        self.random_state = random_state

    def fit(self, X, y):
        X = check_panel(X)
        _, y_enc = encode_training_labels(y, X.shape[0])
        kept = shapelet_select(X, y_enc, self.n_candidates, self.n_shapelets, Prng(self.random_state))
        self.shapelets_ = [s for s, _, _ in kept]
        self.subsequences_ = [sub for _, sub, _ in kept]
        self.gains_ = np.array([g for _, _, g in kept])
        return self

    def transform(self, X):
        check_is_fitted(self, "shapelets_")
        X = check_panel(X, allow_empty=True)
        cache = {}
        out = np.empty((X.shape[0], len(self.shapelets_)))
        for k, s in enumerate(self.shapelets_):
            w = s.shape[0]
            if w not in cache:
                cache[w] = _normalized_windows(X, w)
            out[:, k] = min_distance_profile(s, X, cache[w])
        return out
