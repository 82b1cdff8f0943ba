"""Bootstrap-aggregated tree ensembles.

Each tree is grown on a size-n bootstrap sample, considering floor(sqrt(d))
features (sampled fresh per split) as candidates.  Classification aggregates
by majority vote with ties going to class 0; regression averages the trees.
All randomness comes from one PCG32 stream per fit, consumed in tree order,
so a fit is fully determined by (hyperparameters, data, random_state).
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError
from ..rng import PCG32
from .base import (
    BaseEstimator,
    check_classification_targets,
    check_fitted,
    check_regression_targets,
    check_vector_width,
)
from .tree import (
    REGRESSION_MAX,
    REGRESSION_MIN,
    PresortedDesign,
    _validate_max_depth,
    grow_tree,
)


class _BaseForest(BaseEstimator):
    def __init__(self, n_trees: int = 10, max_depth=None, random_state: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.random_state = random_state

    def _fit_design(self, design: PresortedDesign, y):
        _validate_max_depth(self.max_depth)
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be at least 1, got {self.n_trees}")
        classification = self._estimator_type == "classifier"
        if classification:
            y = check_classification_targets(y, design.n)
        else:
            y = check_regression_targets(y, design.n)
        rng = PCG32(self.random_state)
        k = max(1, math.isqrt(design.d))
        self.n_features_ = design.d
        self.trees_ = []
        for _ in range(self.n_trees):
            rows = rng.bounded_array(design.n, design.n)
            self.trees_.append(
                grow_tree(
                    design,
                    y,
                    classification,
                    self.max_depth,
                    rows=rows,
                    rng=rng,
                    n_split_features=k,
                )
            )
        return self

    def fit(self, X, y):
        return self._fit_design(PresortedDesign(X), y)

    def _tree_sum(self, X) -> np.ndarray:
        check_fitted(self, "trees_")
        X = check_vector_width(X, self.n_features_)
        total = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees_:
            total += tree.predict(X)
        return total


class RandomForestClassifier(_BaseForest):
    """Majority vote over bootstrapped classification trees; ties predict 0."""

    _estimator_type = "classifier"

    def predict(self, X) -> np.ndarray:
        votes = self._tree_sum(X)
        return (2 * votes > self.n_trees).astype(np.uint8)


class RandomForestRegressor(_BaseForest):
    """Mean of bootstrapped regression trees, clamped to [0, 255]."""

    _estimator_type = "regressor"

    def predict(self, X) -> np.ndarray:
        return np.clip(self._tree_sum(X) / self.n_trees, REGRESSION_MIN, REGRESSION_MAX)
