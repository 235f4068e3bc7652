"""Desk-scale classifiers, one per family: distance, kernel, shapelet, interval, feature."""

from .distance import NearestNeighborClassifier, dtw_distance, nn1, squared_euclidean
from .features import GlobalFeatureTransform, global_features
from .intervals import IntervalTransform, interval_features
from .kernels import RandomKernelTransform, kernel_conv_features
from .pipelines import (
    CLASSIFIER_KINDS,
    ClassifierSpec,
    GlobalFeatureClassifier,
    IntervalClassifier,
    RandomKernelClassifier,
    ShapeletClassifier,
    make_classifier,
    train_predict,
)
from .ridge import RidgeClassifierOVR, ridge_fit_predict
from .shapelets import ShapeletTransform, shapelet_min_distance, shapelet_select

__all__ = [
    "CLASSIFIER_KINDS",
    "ClassifierSpec",
    "GlobalFeatureClassifier",
    "GlobalFeatureTransform",
    "IntervalClassifier",
    "IntervalTransform",
    "NearestNeighborClassifier",
    "RandomKernelClassifier",
    "RandomKernelTransform",
    "RidgeClassifierOVR",
    "ShapeletClassifier",
    "ShapeletTransform",
    "dtw_distance",
    "global_features",
    "interval_features",
    "kernel_conv_features",
    "make_classifier",
    "nn1",
    "ridge_fit_predict",
    "shapelet_min_distance",
    "shapelet_select",
    "squared_euclidean",
    "train_predict",
]
