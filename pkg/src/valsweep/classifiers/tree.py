"""CART decision tree with Gini impurity and optional balanced weights."""

import numpy as np

from .. import _kernels
from .base import FittedModel, balanced_weights, validate_training_input

_GAIN_EPS = 1e-12


class DecisionTreeModel(FittedModel):
    family = "DecisionTree"

    def __init__(self, hyperparams, n_features, nodes):
        super().__init__(hyperparams, n_features)
        # node: (feature, threshold, left, right, prob); feature == -1 => leaf
        self.nodes = nodes

    def predict_proba(self, X):
        X = self.check_width(X)
        out = np.empty(X.shape[0])
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node_id, rows = stack.pop()
            feat, thr, left, right, prob = self.nodes[node_id]
            if feat < 0:
                out[rows] = prob
                continue
            go_left = X[rows, feat] <= thr
            if go_left.any():
                stack.append((left, rows[go_left]))
            if not go_left.all():
                stack.append((right, rows[~go_left]))
        return out

    def to_dict(self):
        return {"nodes": [list(n) for n in self.nodes]}

    @classmethod
    def from_dict(cls, hyperparams, n_features, params):
        return cls(hyperparams, n_features, [tuple(n) for n in params["nodes"]])


def _weighted_gini(w0, w1):
    w = w0 + w1
    return 1.0 - (w0 * w0 + w1 * w1) / (w * w)


def _best_split(X, y, w, rows, min_samples_leaf):
    """Best (feature, threshold, position-order) at a node, or None.

    Ties in the weighted child impurity keep the lower feature index and
    then the lower threshold (the kernel scans thresholds ascending).
    """
    yf = y[rows].astype(float)
    wf = w[rows]
    best = None
    best_score = np.inf
    for feat in range(X.shape[1]):
        vals = X[rows, feat]
        order = np.argsort(vals, kind="stable")
        score, thr, pos = _kernels.gini_split_scan(
            np.ascontiguousarray(vals[order]),
            np.ascontiguousarray(yf[order]),
            np.ascontiguousarray(wf[order]),
            min_samples_leaf,
        )
        if pos >= 0 and score < best_score:
            best_score = score
            best = (feat, thr)
    if best is None:
        return None
    return best[0], best[1], best_score


def fit_decision_tree(hp, X, y, seed=0):
    X, y = validate_training_input(X, y)
    w = balanced_weights(y) if hp.get("class_weight") == "balanced" else np.ones(y.shape[0])
    max_depth = hp.get("max_depth")
    msl = int(hp.get("min_samples_leaf", 1))
    nodes = []

    def grow(rows, depth):
        node_id = len(nodes)
        nodes.append(None)
        w1 = float(np.sum(w[rows] * (y[rows] == 1)))
        w0 = float(np.sum(w[rows])) - w1
        prob = w1 / (w0 + w1)
        parent_gini = _weighted_gini(w0, w1)
        split = None
        if parent_gini > 0 and (max_depth is None or depth < max_depth) \
                and rows.shape[0] >= 2 * msl:
            found = _best_split(X, y, w, rows, msl)
            if found is not None and found[2] < parent_gini - _GAIN_EPS:
                split = found
        if split is None:
            nodes[node_id] = (-1, 0.0, -1, -1, prob)
            return node_id
        feat, thr, _ = split
        mask = X[rows, feat] <= thr
        left = grow(rows[mask], depth + 1)
        right = grow(rows[~mask], depth + 1)
        nodes[node_id] = (feat, float(thr), left, right, prob)
        return node_id

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 10000))
    try:
        grow(np.arange(X.shape[0]), 0)
    finally:
        sys.setrecursionlimit(old_limit)
    return DecisionTreeModel(hp, X.shape[1], nodes)
