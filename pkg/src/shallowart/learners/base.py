"""Estimator plumbing: parameter introspection and input validation.

Estimators follow the familiar convention: constructor arguments are
hyperparameters stored verbatim, fitted state lives in trailing-underscore
attributes, and ``get_params``/``set_params``/``clone`` make them compose
with pipeline tooling that expects that interface.
"""

from __future__ import annotations

import inspect

import numpy as np

from ..errors import (
    InsufficientDataError,
    NotFittedError,
    ShapeError,
    TargetDomainError,
)


class BaseEstimator:
    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [name for name in sig.parameters if name != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "BaseEstimator":
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(f"invalid parameter {name!r} for {type(self).__name__}")
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def clone(estimator):
    """A fresh unfitted copy with the same hyperparameters."""
    return type(estimator)(**estimator.get_params())


def check_matrix(X) -> np.ndarray:
    """Validate a 2-D numeric attribute matrix with at least one row and column."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise ShapeError(f"attribute matrix must be 2-D, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise InsufficientDataError(f"attribute matrix must be non-empty, got shape {X.shape}")
    if not np.issubdtype(X.dtype, np.number):
        raise ShapeError(f"attribute matrix must be numeric, got dtype {X.dtype}")
    return X


def check_classification_targets(y, n_rows: int) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != n_rows:
        raise ShapeError(f"target vector must have shape ({n_rows},), got {y.shape}")
    vals = np.unique(y)
    if not np.isin(vals, (0, 1)).all():
        raise TargetDomainError(f"binary classification targets must be 0 or 1, got values {vals}")
    return y.astype(np.uint8)


def check_regression_targets(y, n_rows: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.shape[0] != n_rows:
        raise ShapeError(f"target vector must have shape ({n_rows},), got {y.shape}")
    if y.size and (y.min() < 0 or y.max() > 255):
        raise TargetDomainError("regression targets must lie in [0, 255]")
    return y


def check_vector_width(X, d: int) -> np.ndarray:
    """Validate prediction input: one vector or a batch of vectors of width d."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != d:
        raise ShapeError(f"expected vectors of length {d}, got shape {np.asarray(X).shape}")
    return X


def check_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(f"{type(estimator).__name__} must be fitted before predicting")
