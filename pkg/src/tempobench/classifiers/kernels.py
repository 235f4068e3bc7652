"""Random dilated convolution kernels pooled by PPV and max."""

from typing import NamedTuple

import numpy as np
from numba import njit
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..core.rng import Prng
from ..core.validation import check_panel

__all__ = ["KernelBank", "generate_kernels", "apply_kernels", "kernel_conv_features", "RandomKernelTransform"]

KERNEL_LENGTHS = (7, 9, 11)
MIN_SERIES_LENGTH = 12


class KernelBank(NamedTuple):
    weights: np.ndarray  # concatenated, one block per kernel
    lengths: np.ndarray
    biases: np.ndarray
    dilations: np.ndarray
    paddings: np.ndarray


def generate_kernels(n_timepoints: int, n_kernels: int, rng: Prng) -> KernelBank:
    """Draw ``n_kernels`` kernels for series of length ``n_timepoints``.

    Per kernel, in draw order: length from {7, 9, 11}; N(0, 1) weights,
    then mean-centred; bias U(-1, 1); dilation ``floor(2**a)`` with
    ``a ~ U(0, log2((n - 1) / (length - 1)))``; zero padding of
    ``(length - 1) * dilation // 2`` on each side with probability 1/2.
    """
    if n_timepoints < MIN_SERIES_LENGTH:
        raise ValueError(f"series length must be >= {MIN_SERIES_LENGTH} for convolution kernels, got {n_timepoints}")
    if n_kernels < 1:
        raise ValueError("n_kernels must be positive")
    lengths = np.empty(n_kernels, dtype=np.int64)
    biases = np.empty(n_kernels)
    dilations = np.empty(n_kernels, dtype=np.int64)
    paddings = np.empty(n_kernels, dtype=np.int64)
    weights = []
    for k in range(n_kernels):
        length = KERNEL_LENGTHS[rng.next_int(0, len(KERNEL_LENGTHS) - 1)]
        w = rng.gaussian_array(length)
        weights.append(w - w.mean())
        biases[k] = 2.0 * rng.next_uniform() - 1.0
        a = rng.next_uniform() * np.log2((n_timepoints - 1) / (length - 1))
        dilation = int(2.0 ** a)
        lengths[k] = length
        dilations[k] = dilation
        paddings[k] = ((length - 1) * dilation) // 2 if rng.next_int(0, 1) == 1 else 0
    return KernelBank(np.concatenate(weights), lengths, biases, dilations, paddings)


@njit(cache=True)
def _apply_kernel(x, weights, length, bias, dilation, padding):
    n = x.shape[0]
    out_len = n + 2 * padding - (length - 1) * dilation
    positive = 0
    best = -np.inf
    for start in range(-padding, out_len - padding):
        total = bias
        index = start
        for j in range(length):
            if 0 <= index < n:
                total += weights[j] * x[index]
            index += dilation
        if total > best:
            best = total
        if total > 0:
            positive += 1
    return positive / out_len, best


@njit(cache=True)
def _apply_kernels(X, weights, lengths, biases, dilations, paddings):
    n_kernels = lengths.shape[0]
    out = np.empty((X.shape[0], 2 * n_kernels))
    for i in range(X.shape[0]):
        offset = 0
        for k in range(n_kernels):
            stop = offset + lengths[k]
            ppv, mx = _apply_kernel(X[i], weights[offset:stop], lengths[k], biases[k], dilations[k], paddings[k])
            out[i, 2 * k] = ppv
            out[i, 2 * k + 1] = mx
            offset = stop
    return out


def apply_kernels(X, kernels: KernelBank):
    """Features ``[ppv_0, max_0, ppv_1, max_1, ...]`` for every row of ``X``."""
    X = check_panel(X, min_length=1, allow_empty=True)
    return _apply_kernels(X, *kernels)


def kernel_conv_features(X_train, X_test, n_kernels=500, rng=None):
    X_train = check_panel(X_train, name="X_train")
    kernels = generate_kernels(X_train.shape[1], n_kernels, rng if rng is not None else Prng(0))
    return apply_kernels(X_train, kernels), apply_kernels(X_test, kernels)


class RandomKernelTransform(TransformerMixin, BaseEstimator):
    """Convolve with random kernels drawn at fit time.

    Parameters
    ----------
    n_kernels : int, default=500
    random_state : int, default=0

    Attributes
    ----------
    kernels_ : KernelBank
    """

    def __init__(self, n_kernels=500, random_state=0):
        self.n_kernels = n_kernels
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_panel(X)
        self.n_timepoints_ = X.shape[1]
        self.kernels_ = generate_kernels(X.shape[1], self.n_kernels, Prng(self.random_state))
        return self

    def transform(self, X):
        check_is_fitted(self, "kernels_")
        return apply_kernels(X, self.kernels_)
