"""K-nearest-neighbors with Minkowski p in {1, 2}."""

import numpy as np
from scipy.spatial.distance import cdist

from .base import FittedModel, validate_training_input


class KNNModel(FittedModel):
    family = "KNN"

    def __init__(self, hyperparams, n_features, X_train, y_train):
        super().__init__(hyperparams, n_features)
        self.X_train = X_train
        self.y_train = y_train

    def predict_proba(self, X):
        X = self.check_width(X)
        k = min(int(self.hyperparams["n_neighbors"]), self.y_train.shape[0])
        p = int(self.hyperparams.get("p", 2))
        metric = "cityblock" if p == 1 else "euclidean"
        dist = cdist(X, self.X_train, metric=metric)
        # stable argsort: distance ties at the k-th neighbor keep the
        # lower training index
        nbrs = np.argsort(dist, axis=1, kind="stable")[:, :k]
        rows = np.arange(X.shape[0])[:, None]
        nd = dist[rows, nbrs]
        ny = self.y_train[nbrs].astype(float)
        if self.hyperparams.get("weights", "uniform") == "uniform":
            return ny.mean(axis=1)
        out = np.empty(X.shape[0])
        zero = nd == 0.0
        has_zero = zero.any(axis=1)
        with np.errstate(divide="ignore"):
            wts = 1.0 / nd
        for i in range(X.shape[0]):
            if has_zero[i]:
                out[i] = ny[i, zero[i]].mean()
            else:
                out[i] = float(np.sum(wts[i] * ny[i]) / np.sum(wts[i]))
        return out

    def to_dict(self):
        return {"X_train": self.X_train.tolist(), "y_train": self.y_train.tolist()}

    @classmethod
    def from_dict(cls, hyperparams, n_features, params):
        return cls(hyperparams, n_features,
                   np.asarray(params["X_train"], dtype=float),
                   np.asarray(params["y_train"], dtype=np.int8))


def fit_knn(hp, X, y, seed=0):
    X, y = validate_training_input(X, y)
    return KNNModel(hp, X.shape[1], X.copy(), y.copy())
