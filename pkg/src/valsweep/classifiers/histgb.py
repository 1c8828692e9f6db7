"""Histogram-based gradient boosting with logistic loss.

Features are discretized into at most 255 value bins (bin 0 is reserved
for missing values); trees grow leaf-wise by Newton gain with sibling
histograms obtained by subtraction.  100 boosting rounds, fixed.
"""

import heapq

import numpy as np

from .. import _kernels
from .base import FittedModel, validate_training_input
from .linear import _sigmoid

N_ROUNDS = 100
MAX_VALUE_BINS = 255
MIN_SAMPLES_LEAF = 20
LAMBDA = 1e-3
GAIN_EPS = 1e-12


def _fit_bin_edges(col):
    """Bin edges for one feature; code(v) = 1 + #edges <= v."""
    uniq = np.unique(col)
    if uniq.shape[0] <= MAX_VALUE_BINS:
        edges = (uniq[:-1] + uniq[1:]) / 2.0
    else:
        qs = np.linspace(0, 1, MAX_VALUE_BINS + 1)[1:-1]
        edges = np.unique(np.quantile(col, qs))
    return edges


def _bin_column(col, edges):
    codes = np.searchsorted(edges, col, side="right") + 1
    return codes.astype(np.uint8)


def _bin_matrix(X, all_edges):
    codes = np.empty(X.shape, dtype=np.uint8)
    for j, edges in enumerate(all_edges):
        codes[:, j] = _bin_column(X[:, j], edges)
    return np.ascontiguousarray(codes)


class HistGBModel(FittedModel):
    family = "HistGB"

    def __init__(self, hyperparams, n_features, bin_edges, base_score, trees):
        super().__init__(hyperparams, n_features)
        self.bin_edges = bin_edges
        self.base_score = float(base_score)
        # tree node: (feature, bin, left, right, value); feature == -1 => leaf
        self.trees = trees

    def _raw_scores(self, codes):
        raw = np.full(codes.shape[0], self.base_score)
        for nodes in self.trees:
            idx = np.arange(codes.shape[0])
            stack = [(0, idx)]
            while stack:
                node_id, rows = stack.pop()
                feat, split_bin, left, right, value = nodes[node_id]
                if feat < 0:
                    raw[rows] += value
                    continue
                go_left = codes[rows, feat] <= split_bin
                if go_left.any():
                    stack.append((left, rows[go_left]))
                if not go_left.all():
                    stack.append((right, rows[~go_left]))
        return raw

    def predict_proba(self, X):
        X = self.check_width(X)
        codes = _bin_matrix(X, self.bin_edges)
        return _sigmoid(self._raw_scores(codes))

    def to_dict(self):
        return {
            "bin_edges": [e.tolist() for e in self.bin_edges],
            "base_score": self.base_score,
            "trees": [[list(node) for node in t] for t in self.trees],
        }

    @classmethod
    def from_dict(cls, hyperparams, n_features, params):
        edges = [np.asarray(e, dtype=float) for e in params["bin_edges"]]
        trees = [[tuple(node) for node in t] for t in params["trees"]]
        return cls(hyperparams, n_features, edges, params["base_score"], trees)


class _Leaf:
    __slots__ = ("samples", "depth", "hists", "sum_g", "sum_h", "node_id",
                 "split")

    def __init__(self, samples, depth, hists, sum_g, sum_h, node_id):
        self.samples = samples
        self.depth = depth
        self.hists = hists
        self.sum_g = sum_g
        self.sum_h = sum_h
        self.node_id = node_id
        self.split = None


def _grow_tree(codes, n_bins_used, grad, hess, lr, max_depth, max_leaf_nodes):
    n = codes.shape[0]
    nodes = []

    def find_split(leaf):
        if max_depth is not None and leaf.depth >= max_depth:
            return None
        f, b, gain = _kernels.hist_best_split(
            leaf.hists[0], leaf.hists[1], leaf.hists[2], n_bins_used,
            leaf.sum_g, leaf.sum_h, leaf.samples.shape[0],
            MIN_SAMPLES_LEAF, LAMBDA,
        )
        if f < 0 or gain <= GAIN_EPS:
            return None
        return f, b, gain

    def make_root():
        samples = np.arange(n, dtype=np.int64)
        hists = _kernels.hist_build(codes, samples, grad, hess, 256)
        return _Leaf(samples, 0, hists, float(grad.sum()), float(hess.sum()), 0)

    root = make_root()
    nodes.append(None)
    heap = []
    counter = 0
    split = find_split(root)
    leaves = [root]
    if split is not None:
        root.split = split
        heapq.heappush(heap, (-split[2], counter, root))
        counter += 1

    n_leaves = 1
    while heap and (max_leaf_nodes is None or n_leaves < max_leaf_nodes):
        _, _, leaf = heapq.heappop(heap)
        feat, split_bin, _ = leaf.split
        go_left = codes[leaf.samples, feat] <= split_bin
        left_samples = leaf.samples[go_left]
        right_samples = leaf.samples[~go_left]

        # build the smaller side, derive the sibling by subtraction
        if left_samples.shape[0] <= right_samples.shape[0]:
            small, big = left_samples, right_samples
        else:
            small, big = right_samples, left_samples
        sh = _kernels.hist_build(codes, small, grad, hess, 256)
        bh = (np.asarray(leaf.hists[0]) - np.asarray(sh[0]),
              np.asarray(leaf.hists[1]) - np.asarray(sh[1]),
              np.asarray(leaf.hists[2]) - np.asarray(sh[2]))
        if small is left_samples:
            lh, rh = sh, bh
        else:
            lh, rh = bh, sh

        left = _Leaf(left_samples, leaf.depth + 1, lh,
                     float(np.asarray(lh[0]).sum()), float(np.asarray(lh[1]).sum()),
                     len(nodes))
        nodes.append(None)
        right = _Leaf(right_samples, leaf.depth + 1, rh,
                      float(np.asarray(rh[0]).sum()), float(np.asarray(rh[1]).sum()),
                      len(nodes))
        nodes.append(None)
        nodes[leaf.node_id] = (feat, split_bin, left.node_id, right.node_id, 0.0)
        leaves.remove(leaf)
        leaves.extend([left, right])
        n_leaves += 1
        for child in (left, right):
            child.split = find_split(child)
            if child.split is not None:
                heapq.heappush(heap, (-child.split[2], counter, child))
                counter += 1

    update = np.zeros(n)
    for leaf in leaves:
        value = -lr * leaf.sum_g / (leaf.sum_h + LAMBDA)
        nodes[leaf.node_id] = (-1, 0, -1, -1, float(value))
        update[leaf.samples] = value
    return nodes, update


def fit_histgb(hp, X, y, seed=0):
    X, y = validate_training_input(X, y)
    lr = float(hp.get("learning_rate", 0.1))
    max_depth = hp.get("max_depth")
    max_leaf_nodes = hp.get("max_leaf_nodes")

    edges = [_fit_bin_edges(X[:, j]) for j in range(X.shape[1])]
    codes = _bin_matrix(X, edges)
    n_bins_used = np.array([e.shape[0] + 2 for e in edges], dtype=np.int64)

    p1 = float(np.mean(y == 1))
    base = np.log(p1 / (1.0 - p1))
    raw = np.full(X.shape[0], base)
    yf = y.astype(float)
    trees = []
    for _ in range(N_ROUNDS):
        p = _sigmoid(raw)
        grad = p - yf
        hess = p * (1.0 - p)
        nodes, update = _grow_tree(codes, n_bins_used, grad, hess, lr,
                                   max_depth, max_leaf_nodes)
        trees.append(nodes)
        raw += update
    return HistGBModel(hp, X.shape[1], edges, base, trees)
