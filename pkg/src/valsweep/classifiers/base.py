"""Uniform classifier contract and the seven reference model grids."""

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import NonFiniteFeature, SingleClassTraining, WidthMismatch

MODEL_NAMES = (
    "DecisionTree",
    "KNN",
    "GaussianNB",
    "BernoulliNB",
    "LogReg",
    "LinearSVM_Calibrated",
    "HistGB",
)


@dataclass(frozen=True)
class ModelSpec:
    """A classifier family plus its hyperparameter grid.

    ``param_lists`` preserves declaration order; grid points enumerate
    as a Cartesian product with the last parameter varying fastest.
    """

    name: str
    param_lists: tuple  # of (param_name, tuple_of_values)

    def grid_points(self, reduced=False):
        names = [p for p, _ in self.param_lists]
        values = [
            (v[:1] if reduced else v) for _, v in self.param_lists
        ]
        return [dict(zip(names, combo)) for combo in itertools.product(*values)]

    def grid_size(self):
        size = 1
        for _, v in self.param_lists:
            size *= len(v)
        return size


def registry():
    """The seven model families with their exact grids."""
    return [
        ModelSpec("DecisionTree", (
            ("max_depth", (None, 3, 5, 10, 15)),
            ("min_samples_leaf", (1, 2, 5, 10)),
            ("class_weight", (None, "balanced")),
        )),
        ModelSpec("KNN", (
            ("n_neighbors", (3, 5, 7, 11, 15)),
            ("weights", ("uniform", "distance")),
            ("p", (1, 2)),
        )),
        ModelSpec("GaussianNB", (
            ("var_smoothing", (1e-9, 1e-8, 1e-7, 1e-6)),
        )),
        ModelSpec("BernoulliNB", (
            ("alpha", (0.5, 1.0, 2.0)),
            ("binarize", (None, 0.0)),
        )),
        ModelSpec("LogReg", (
            ("C", (0.01, 0.1, 1, 10)),
            ("penalty", ("l1", "l2")),
        )),
        ModelSpec("LinearSVM_Calibrated", (
            ("C", (0.01, 0.1, 1, 10)),
        )),
        ModelSpec("HistGB", (
            ("learning_rate", (0.05, 0.1, 0.2)),
            ("max_depth", (None, 3, 5)),
            ("max_leaf_nodes", (None, 31, 63)),
        )),
    ]


def spec_by_name(name):
    for spec in registry():
        if spec.name == name:
            return spec
    raise KeyError(name)


def validate_training_input(X, y):
    X = np.ascontiguousarray(X, dtype=float)
    y = np.asarray(y)
    if X.shape[0] != y.shape[0]:
        raise WidthMismatch(f"{X.shape[0]} rows vs {y.shape[0]} labels")
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeature("X contains non-finite values")
    if len(np.unique(y)) < 2:
        raise SingleClassTraining("training labels contain a single class")
    return X, y.astype(np.int8)


class FittedModel:
    """Base for fitted models: positive-class probabilities on demand."""

    family = ""

    def __init__(self, hyperparams, n_features):
        self.hyperparams = dict(hyperparams)
        self.n_features = int(n_features)
        self.converged = True

    def check_width(self, X):
        X = np.ascontiguousarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise WidthMismatch(
                f"expected {self.n_features} features, got {X.shape}"
            )
        return X

    def predict_proba(self, X):
        raise NotImplementedError


def labels_from_proba(p, threshold=0.5):
    """Hard labels: 1 iff probability >= threshold."""
    return (np.asarray(p) >= threshold).astype(np.int8)


def balanced_weights(y):
    """Per-sample weights n / (2 * n_class)."""
    y = np.asarray(y)
    n = y.shape[0]
    n1 = int(np.count_nonzero(y == 1))
    n0 = n - n1
    w = np.where(y == 1, n / (2.0 * n1), n / (2.0 * n0))
    return w.astype(float)
