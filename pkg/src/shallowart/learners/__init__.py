from .base import BaseEstimator, clone
from .forest import RandomForestClassifier, RandomForestRegressor
from .linear import LinearSVM, Perceptron
from .tree import (
    DecisionTreeClassifier,
    DecisionTreeRegressor,
    PresortedDesign,
    split_impurity_decrease,
)

__all__ = [
    "BaseEstimator",
    "clone",
    "DecisionTreeClassifier",
    "DecisionTreeRegressor",
    "RandomForestClassifier",
    "RandomForestRegressor",
    "Perceptron",
    "LinearSVM",
    "PresortedDesign",
    "split_impurity_decrease",
]
