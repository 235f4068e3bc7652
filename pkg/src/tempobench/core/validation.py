"""Input validation helpers shared by transforms and estimators."""

import numpy as np

__all__ = ["check_series", "check_panel", "check_labels", "check_fraction"]


def check_series(x, min_length=2, name="series"):
    """Return ``x`` as a finite 1-D float64 array of at least ``min_length``."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] < min_length:
        raise ValueError(f"{name} must have length >= {min_length}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_panel(X, min_length=2, name="X", allow_empty=False):
    """Return ``X`` as a finite 2-D float64 array (instances x timepoints).

    A 1-D input is treated as a single instance.
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D (n_instances, n_timepoints), got shape {arr.shape}")
    if arr.shape[0] == 0 and not allow_empty:
        raise ValueError(f"{name} has no instances")
    if arr.shape[1] < min_length:
        raise ValueError(f"{name} series length must be >= {min_length}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_labels(y, n_instances, name="y"):
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != n_instances:
        raise ValueError(f"{name} must be 1-D with {n_instances} entries, got shape {y.shape}")
    return y


def check_fraction(value, name, low_open=True):
    value = float(value)
    ok = (0.0 < value <= 1.0) if low_open else (0.0 <= value <= 1.0)
    if not ok:
        interval = "(0, 1]" if low_open else "[0, 1]"
        raise ValueError(f"{name} must lie in {interval}, got {value}")
    return value
