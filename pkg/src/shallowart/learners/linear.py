"""Linear separators: the classic perceptron and a Pegasos-style linear SVM.

Both predict class 1 when w.x + b > 0 and class 0 otherwise (an activation
of exactly zero maps to class 0).  Constant training targets short-circuit
to a constant model (w = 0, b = +/-1) so that a corpus with an unvarying
output pixel yields that constant for every input.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..rng import PCG32
from .base import (
    BaseEstimator,
    check_classification_targets,
    check_fitted,
    check_matrix,
    check_vector_width,
)


class _BaseLinear(BaseEstimator):
    def _start(self, X, y):
        X = check_matrix(X)
        y = check_classification_targets(y, X.shape[0])
        if self.epochs < 1:
            raise ConfigError(f"epochs must be at least 1, got {self.epochs}")
        self.n_features_ = X.shape[1]
        if y.min() == y.max():
            self.weights_ = np.zeros(X.shape[1], dtype=np.float64)
            self.bias_ = 1.0 if y[0] == 1 else -1.0
            return None
        return np.asarray(X, dtype=np.float64), np.where(y == 1, 1.0, -1.0)

    def decision_function(self, X) -> np.ndarray:
        check_fitted(self, "weights_")
        X = check_vector_width(X, self.n_features_)
        return X @ self.weights_ + self.bias_

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.uint8)


class Perceptron(_BaseLinear):
    """Mistake-driven perceptron: learning rate 1, bias term, stored data order.

    Training sweeps the data for up to ``epochs`` passes, updating
    w += y*x, b += y on every misclassified sample, and stops early after a
    clean pass (further passes would not change the weights).  The number of
    updates made is recorded in ``n_updates_``.
    """

    _estimator_type = "classifier"

    def __init__(self, epochs: int = 5, random_state: int = 0):
        self.epochs = epochs
        self.random_state = random_state

    def fit(self, X, y) -> "Perceptron":
        started = self._start(X, y)
        self.n_updates_ = 0
        if started is None:
            return self
        X, ys = started
        w = np.zeros(X.shape[1], dtype=np.float64)
        b = 0.0
        for _ in range(self.epochs):
            mistakes = 0
            for i in range(X.shape[0]):
                predicted = 1.0 if X[i] @ w + b > 0 else -1.0
                if predicted != ys[i]:
                    w += ys[i] * X[i]
                    b += ys[i]
                    mistakes += 1
            self.n_updates_ += mistakes
            if mistakes == 0:
                break
        self.weights_ = w
        self.bias_ = b
        return self


class LinearSVM(_BaseLinear):
    """Hinge-loss linear SVM trained by Pegasos-style SGD.

    One sample per step with learning rate 1/(reg_lambda * t); the weight
    vector shrinks by (1 - 1/t) each step and the bias is left
    unregularized.  Sample order is reshuffled every epoch from the
    random_state stream.  With ``track_objective`` the full regularized
    objective is recorded after every step (quadratic cost, test use only).
    """

    _estimator_type = "classifier"

    def __init__(
        self,
        reg_lambda: float = 1e-4,
        epochs: int = 5,
        random_state: int = 0,
        track_objective: bool = False,
    ):
        self.reg_lambda = reg_lambda
        self.epochs = epochs
        self.random_state = random_state
        self.track_objective = track_objective

    def _objective(self, X, ys, w, b) -> float:
        margins = 1.0 - ys * (X @ w + b)
        hinge = np.maximum(margins, 0.0).mean()
        return 0.5 * self.reg_lambda * float(w @ w) + float(hinge)

    def fit(self, X, y) -> "LinearSVM":
        if self.reg_lambda <= 0:
            raise ConfigError(f"reg_lambda must be positive, got {self.reg_lambda}")
        started = self._start(X, y)
        if self.track_objective:
            self.objective_trace_ = []
        if started is None:
            return self
        X, ys = started
        rng = PCG32(self.random_state)
        w = np.zeros(X.shape[1], dtype=np.float64)
        b = 0.0
        t = 1
        for _ in range(self.epochs):
            order = rng.shuffled_indices(X.shape[0])
            for i in order:
                eta = 1.0 / (self.reg_lambda * t)
                violated = ys[i] * (X[i] @ w + b) < 1.0
                w *= 1.0 - 1.0 / t
                if violated:
                    w += eta * ys[i] * X[i]
                    b += eta * ys[i]
                t += 1
                if self.track_objective:
                    self.objective_trace_.append(self._objective(X, ys, w, b))
        self.weights_ = w
        self.bias_ = b
        return self
