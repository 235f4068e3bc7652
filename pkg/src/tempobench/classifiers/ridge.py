"""One-vs-rest ridge read-out with cross-validated regularisation."""

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..core.rng import Prng
from ._base import encode_training_labels

__all__ = ["DEFAULT_ALPHAS", "Standardizer", "solve_ridge", "stratified_folds", "ridge_fit_predict", "RidgeClassifierOVR"]

DEFAULT_ALPHAS = tuple(10.0 ** k for k in range(-3, 4))
_FLAT = 1e-12


class Standardizer:
    """Column standardisation with statistics taken from the rows given to ``fit``."""

    def fit(self, F):
        F = np.asarray(F, dtype=np.float64)
        self.mean_ = F.mean(axis=0)
        std = F.std(axis=0)
        self.flat_ = std < _FLAT
        self.scale_ = np.where(self.flat_, 1.0, std)
        return self

    def transform(self, F):
        Z = (np.asarray(F, dtype=np.float64) - self.mean_) / self.scale_
        Z[:, self.flat_] = 0.0
        return Z


def solve_ridge(Z, Y, alpha):
    """Solve ``(Z'Z + alpha I) W = Z'Y`` by Cholesky.

    If the factorisation fails, ``1e-8 * trace / dim`` is added to the
    diagonal once and the factorisation retried.
    """
    A = Z.T @ Z
    A[np.diag_indices_from(A)] += alpha
    rhs = Z.T @ Y
    try:
        factor = cho_factor(A)
    except LinAlgError:
        A[np.diag_indices_from(A)] += 1e-8 * np.trace(A) / A.shape[0]
        factor = cho_factor(A)
    return cho_solve(factor, rhs)


def _targets(y, n_classes):
    Y = -np.ones((y.shape[0], n_classes))
    Y[np.arange(y.shape[0]), y] = 1.0
    return Y


def _argmax_lowest(scores):
    # np.argmax already returns the first maximum
    return np.argmax(scores, axis=1)


def stratified_folds(y, n_folds, rng: Prng):
    """Fold index per row: each class is shuffled and dealt round-robin."""
    folds = np.empty(y.shape[0], dtype=np.int64)
    position = 0
    for c in np.unique(y):
        members = rng.shuffle(np.flatnonzero(y == c).tolist())
        for idx in members:
            folds[idx] = position % n_folds
            position += 1
    return folds


def _fit_predict_encoded(F_train, y, F_test, n_classes, alpha):
    scaler = Standardizer().fit(F_train)
    Z = scaler.transform(F_train)
    if not Z.any():
        counts = np.bincount(y, minlength=n_classes)
        return np.full(F_test.shape[0], int(np.argmax(counts)))
    W = solve_ridge(Z, _targets(y, n_classes), alpha)
    return _argmax_lowest(scaler.transform(F_test) @ W)


def _select_alpha(F, y, n_classes, alphas, rng):
    n_folds = min(5, F.shape[0])
    folds = stratified_folds(y, n_folds, rng)
    best_alpha, best_score = alphas[0], -1.0
    for alpha in alphas:
        correct = 0
        for k in range(n_folds):
            test = folds == k
            train = ~test
            if not train.any() or not test.any():
                continue
            pred = _fit_predict_encoded(F[train], y[train], F[test], n_classes, alpha)
            correct += int(np.sum(pred == y[test]))
        score = correct / F.shape[0]
        if score > best_score:
            best_alpha, best_score = alpha, score
    return best_alpha, best_score


def ridge_fit_predict(F_train, y_train, F_test, alphas=DEFAULT_ALPHAS, rng=None):
    """Functional form of :class:`RidgeClassifierOVR`; labels must be ``0..C-1``."""
    model = RidgeClassifierOVR(alphas=alphas, random_state=0)
    model._fit(np.asarray(F_train, dtype=np.float64), np.asarray(y_train), rng or Prng(0))
    return model.predict(F_test)


class RidgeClassifierOVR(ClassifierMixin, BaseEstimator):
    """Ridge regression on +/-1 one-vs-rest targets over standardised features.

    The regularisation strength is chosen from ``alphas`` by stratified
    5-fold cross-validated accuracy (ties favour the smaller value).  Score
    ties at prediction time favour the smaller class index.

    Parameters
    ----------
    alphas : sequence of float, default=(1e-3, ..., 1e3)
        Candidate strengths, tried in ascending order.
    random_state : int, default=0
        Seed for the fold assignment.

    Attributes
    ----------
    classes_ : ndarray
    alpha_ : float
    coef_ : ndarray of shape (n_features, n_classes) or None
        ``None`` when every training column is constant, in which case the
        majority class is predicted.
    """

    def __init__(self, alphas=DEFAULT_ALPHAS, random_state=0):
        self.alphas = alphas
        self.random_state = random_state

    def fit(self, X, y):
        return self._fit(np.asarray(X, dtype=np.float64), y, Prng(self.random_state))

    def _fit(self, F, y, rng):
        if F.ndim != 2 or F.shape[1] < 1:
            raise ValueError(f"feature matrix must be 2-D with at least one column, got shape {F.shape}")
        if not np.all(np.isfinite(F)):
            raise ValueError("feature matrix contains NaN or infinite values")
        self.classes_, y_enc = encode_training_labels(y, F.shape[0])
        n_classes = self.classes_.shape[0]
        alphas = sorted(float(a) for a in self.alphas)
        self.alpha_, self.cv_score_ = _select_alpha(F, y_enc, n_classes, alphas, rng)
        self.scaler_ = Standardizer().fit(F)
        Z = self.scaler_.transform(F)
        if Z.any():
            self.coef_ = solve_ridge(Z, _targets(y_enc, n_classes), self.alpha_)
            self.majority_ = None
        else:
            self.coef_ = None
            self.majority_ = int(np.argmax(np.bincount(y_enc, minlength=n_classes)))
        return self

    def decision_function(self, X):
        check_is_fitted(self, "scaler_")
        Z = self.scaler_.transform(X)
        if self.coef_ is None:
            scores = -np.ones((Z.shape[0], self.classes_.shape[0]))
            scores[:, self.majority_] = 1.0
            return scores
        return Z @ self.coef_

    def predict(self, X):
        return self.classes_[_argmax_lowest(self.decision_function(X))]
