"""Feature transform + ridge read-out classifiers and the kind registry."""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..core.rng import derive_seed
from ..core.validation import check_panel
from ._base import encode_training_labels
from .distance import NearestNeighborClassifier
from .features import GlobalFeatureTransform
from .intervals import IntervalTransform
from .kernels import RandomKernelTransform
from .ridge import DEFAULT_ALPHAS, RidgeClassifierOVR
from .shapelets import ShapeletTransform

__all__ = [
    "RandomKernelClassifier",
    "ShapeletClassifier",
    "IntervalClassifier",
    "GlobalFeatureClassifier",
    "ClassifierSpec",
    "CLASSIFIER_KINDS",
    "make_classifier",
    "train_predict",
]


class _FeatureRidgeClassifier(ClassifierMixin, BaseEstimator):
    # subclasses supply _make_transform(seed); the transform and the ridge
    # read-out get independent streams derived from random_state

    def _make_transform(self, seed):
        raise NotImplementedError

    def fit(self, X, y):
        X = check_panel(X)
        self.classes_, y_enc = encode_training_labels(y, X.shape[0])
        self.transform_ = self._make_transform(derive_seed(self.random_state, "features"))
        F = self.transform_.fit(X, y_enc).transform(X)
        self.ridge_ = RidgeClassifierOVR(self.alphas, derive_seed(self.random_state, "ridge")).fit(F, y_enc)
        self.n_timepoints_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "ridge_")
        X = check_panel(X)
        if X.shape[1] != self.n_timepoints_:
            raise ValueError(f"expected series of length {self.n_timepoints_}, got {X.shape[1]}")
        return self.classes_[self.ridge_.predict(self.transform_.transform(X))]


class RandomKernelClassifier(_FeatureRidgeClassifier):
    """Random convolution kernels (PPV and max pooling) with a ridge read-out."""

    def __init__(self, n_kernels=500, alphas=DEFAULT_ALPHAS, random_state=0):
        self.n_kernels = n_kernels
        self.alphas = alphas
        self.random_state = random_state

    def _make_transform(self, seed):
        return RandomKernelTransform(self.n_kernels, seed)


class ShapeletClassifier(_FeatureRidgeClassifier):
    """Shapelet distances with a ridge read-out."""

    def __init__(self, n_candidates=200, n_shapelets=20, alphas=DEFAULT_ALPHAS, random_state=0):
        self.n_candidates = n_candidates
        self.n_shapelets = n_shapelets
        self.alphas = alphas
        self.random_state = random_state

    def _make_transform(self, seed):
        return ShapeletTransform(self.n_candidates, self.n_shapelets, seed)


class IntervalClassifier(_FeatureRidgeClassifier):
    """Random fixed-position interval summaries with a ridge read-out."""

    def __init__(self, n_intervals=32, alphas=DEFAULT_ALPHAS, random_state=0):
        self.n_intervals = n_intervals
        self.alphas = alphas
        self.random_state = random_state

    def _make_transform(self, seed):
        return IntervalTransform(self.n_intervals, seed)


class GlobalFeatureClassifier(_FeatureRidgeClassifier):
    """Eight whole-series statistics with a ridge read-out."""

    def __init__(self, alphas=DEFAULT_ALPHAS, random_state=0):
        self.alphas = alphas
        self.random_state = random_state

    def _make_transform(self, seed):
        return GlobalFeatureTransform()


def _nn1_euclid(random_state=0):
    return NearestNeighborClassifier("euclidean")


def _nn1_dtw(band=0.1, random_state=0):
    return NearestNeighborClassifier("dtw", band)


CLASSIFIER_KINDS = {
    "nn1_euclid": _nn1_euclid,
    "nn1_dtw": _nn1_dtw,
    "kernel_conv": RandomKernelClassifier,
    "shapelet": ShapeletClassifier,
    "interval": IntervalClassifier,
    "global_feature": GlobalFeatureClassifier,
}


@dataclass(frozen=True)
class ClassifierSpec:
    """Which classifier to build.

    ``params`` are keyword arguments of the estimator for ``kind``:
    ``band`` (nn1_dtw), ``n_kernels`` (kernel_conv), ``n_candidates`` and
    ``n_shapelets`` (shapelet), ``n_intervals`` (interval) and ``alphas``
    for every ridge-based kind.
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}; choose from {sorted(CLASSIFIER_KINDS)}")
        if not self.name:
            object.__setattr__(self, "name", self.kind)

    def with_seed(self, seed):
        return ClassifierSpec(self.kind, dict(self.params), seed, self.name)


def make_classifier(spec: ClassifierSpec):
    return CLASSIFIER_KINDS[spec.kind](random_state=spec.seed, **spec.params)


def train_predict(spec: ClassifierSpec, X_train, y_train, X_test):
    """Fit the classifier described by ``spec`` and label ``X_test``."""
    X_train = check_panel(X_train, name="X_train")
    X_test = check_panel(X_test, name="X_test")
    if X_train.shape[1] != X_test.shape[1]:
        raise ValueError(f"train and test series lengths differ ({X_train.shape[1]} vs {X_test.shape[1]})")
    return np.asarray(make_classifier(spec).fit(X_train, y_train).predict(X_test))
