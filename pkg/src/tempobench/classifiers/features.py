"""A fixed set of eight whole-series summary statistics."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..core.validation import check_panel, check_series

__all__ = ["FEATURE_NAMES", "global_features", "GlobalFeatureTransform"]

FEATURE_NAMES = (
    "mean",
    "std",
    "skewness",
    "acf_lag1",
    "acf_lag2",
    "mean_crossing_rate",
    "longest_run_above_mean",
    "slope",
)
_FLAT = 1e-12


def _longest_true_run(mask):
    best = run = 0
    for flag in mask:
        run = run + 1 if flag else 0
        best = max(best, run)
    return best


def global_features(series):
    """Eight summary statistics of one series (length >= 4).

    Autocorrelations use the biased estimator
    ``sum(d[t] * d[t + k]) / sum(d ** 2)`` with ``d = x - mean``; skewness
    and autocorrelations are 0 when the variance is below 1e-12.  A mean
    crossing is a change in ``x > mean`` between neighbours.
    """
    x = check_series(series, min_length=4)
    n = x.shape[0]
    mean = x.mean()
    d = x - mean
    m2 = np.mean(d * d)
    flat = m2 < _FLAT
    skew = 0.0 if flat else np.mean(d ** 3) / m2 ** 1.5
    if flat:
        acf1 = acf2 = 0.0
    else:
        denom = np.sum(d * d)
        acf1 = np.sum(d[:-1] * d[1:]) / denom
        acf2 = np.sum(d[:-2] * d[2:]) / denom
    above = d > 0
    crossings = np.count_nonzero(above[1:] != above[:-1])
    t = np.arange(n, dtype=np.float64)
    t -= t.mean()
    slope = np.sum(t * d) / np.sum(t * t)
    return np.array([
        mean,
        0.0 if flat else np.sqrt(m2),
        skew,
        acf1,
        acf2,
        crossings / (n - 1),
        _longest_true_run(above) / n,
        slope,
    ])


class GlobalFeatureTransform(TransformerMixin, BaseEstimator):
    """Row-wise :func:`global_features`; stateless."""

    def fit(self, X, y=None):
        check_panel(X, min_length=4)
        return self

    def transform(self, X):
        X = check_panel(X, min_length=4, allow_empty=True)
        return np.array([global_features(row) for row in X]).reshape(X.shape[0], len(FEATURE_NAMES))
