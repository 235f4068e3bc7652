"""Dynamic time warping and one-nearest-neighbour classification."""

import math

import numpy as np
from numba import njit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..core.validation import check_panel, check_series
from ._base import encode_training_labels

__all__ = ["dtw_distance", "squared_euclidean", "nn1", "NearestNeighborClassifier"]


@njit(cache=True)
def _dtw(x, y, window):
    n = x.shape[0]
    m = y.shape[0]
    prev = np.full(m, np.inf)
    curr = np.full(m, np.inf)
    for i in range(n):
        lo = max(0, i - window)
        hi = min(m - 1, i + window)
        for j in range(m):
            curr[j] = np.inf
        for j in range(lo, hi + 1):
            d = x[i] - y[j]
            cost = d * d
            if i == 0 and j == 0:
                curr[j] = cost
                continue
            best = np.inf
            if i > 0 and prev[j] < best:
                best = prev[j]
            if j > 0 and curr[j - 1] < best:
                best = curr[j - 1]
            if i > 0 and j > 0 and prev[j - 1] < best:
                best = prev[j - 1]
            curr[j] = cost + best
        prev, curr = curr, prev
    return prev[m - 1]


@njit(cache=True)
def _dtw_matrix(A, B, window):
    out = np.empty((A.shape[0], B.shape[0]))
    for i in range(A.shape[0]):
        for j in range(B.shape[0]):
            out[i, j] = _dtw(A[i], B[j], window)
    return out


def _band_width(r, n, m):
    if not 0.0 < r <= 1.0:
        raise ValueError(f"band fraction must lie in (0, 1], got {r}")
    window = int(math.ceil(r * max(n, m)))
    if abs(n - m) > window:
        raise ValueError(f"band of {window} cells admits no warping path between lengths {n} and {m}")
    return window


def dtw_distance(x, y, r=1.0) -> float:
    """Banded DTW cost with squared pointwise differences (no square root).

    Cells with ``|i - j| > ceil(r * max(n, m))`` are excluded; ``r=1`` is
    unconstrained.
    """
    x = check_series(x, min_length=1, name="x")
    y = check_series(y, min_length=1, name="y")
    window = _band_width(r, x.shape[0], y.shape[0])
    return float(_dtw(x, y, window))


def squared_euclidean(A, B):
    """Pairwise squared L2 distances, shape ``(len(A), len(B))``.

    Squared differences are sorted before summation so the result does not
    depend on the order of the coordinates.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    out = np.empty((A.shape[0], B.shape[0]))
    for i, a in enumerate(A):
        out[i] = np.sort((B - a) ** 2, axis=1).sum(axis=1)
    return out


def _pairwise(metric, r, X_test, X_train):
    if metric == "euclidean":
        return squared_euclidean(X_test, X_train)
    if metric == "dtw":
        window = _band_width(r, X_test.shape[1], X_train.shape[1])
        return _dtw_matrix(X_test, X_train, window)
    raise ValueError(f"unknown metric {metric!r}")


def nn1(X_train, y_train, X_test, metric="euclidean", r=1.0):
    """Label of the closest training instance; ties go to the lowest index."""
    X_train = check_panel(X_train, min_length=1, name="X_train")
    X_test = check_panel(X_test, min_length=1, name="X_test")
    y_train = np.asarray(y_train)
    if metric == "euclidean" and X_train.shape[1] != X_test.shape[1]:
        raise ValueError("train and test series lengths differ")
    dist = _pairwise(metric, r, X_test, X_train)
    return y_train[np.argmin(dist, axis=1)]


class NearestNeighborClassifier(ClassifierMixin, BaseEstimator):
    """One-nearest-neighbour classifier under Euclidean or DTW distance.

    Parameters
    ----------
    metric : {"euclidean", "dtw"}, default="euclidean"
    band : float, default=1.0
        Sakoe-Chiba band as a fraction of the series length (DTW only).
    """

    def __init__(self, metric="euclidean", band=1.0):
        self.metric = metric
        self.band = band

    def fit(self, X, y):
        X = check_panel(X, min_length=2)
        self.classes_, self._y = encode_training_labels(y, X.shape[0])
        self._X = X
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_panel(X, min_length=2)
        if X.shape[1] != self._X.shape[1]:
            raise ValueError(f"expected series of length {self._X.shape[1]}, got {X.shape[1]}")
        return self.classes_[nn1(self._X, self._y, X, self.metric, self.band)]
