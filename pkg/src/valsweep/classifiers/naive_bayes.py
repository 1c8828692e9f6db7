"""Gaussian and Bernoulli naive Bayes."""

import warnings

import numpy as np
from scipy.special import logsumexp

from .base import FittedModel, validate_training_input


class GaussianNBModel(FittedModel):
    family = "GaussianNB"

    def __init__(self, hyperparams, n_features, theta, var, log_prior):
        super().__init__(hyperparams, n_features)
        self.theta = theta          # (2, d) per-class means
        self.var = var              # (2, d) smoothed per-class variances
        self.log_prior = log_prior  # (2,)

    def _joint_log_likelihood(self, X):
        jll = np.empty((X.shape[0], 2))
        for c in (0, 1):
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * self.var[c]))
            ll = ll - 0.5 * np.sum((X - self.theta[c]) ** 2 / self.var[c], axis=1)
            jll[:, c] = self.log_prior[c] + ll
        return jll

    def predict_proba(self, X):
        X = self.check_width(X)
        jll = self._joint_log_likelihood(X)
        return np.exp(jll[:, 1] - logsumexp(jll, axis=1))

    def to_dict(self):
        return {"theta": self.theta.tolist(), "var": self.var.tolist(),
                "log_prior": self.log_prior.tolist()}

    @classmethod
    def from_dict(cls, hyperparams, n_features, params):
        return cls(hyperparams, n_features,
                   np.asarray(params["theta"], dtype=float),
                   np.asarray(params["var"], dtype=float),
                   np.asarray(params["log_prior"], dtype=float))


def fit_gaussian_nb(hp, X, y, seed=0):
    X, y = validate_training_input(X, y)
    var_smoothing = float(hp.get("var_smoothing", 1e-9))
    epsilon = var_smoothing * float(np.max(np.var(X, axis=0)))
    theta = np.empty((2, X.shape[1]))
    var = np.empty((2, X.shape[1]))
    log_prior = np.empty(2)
    n = X.shape[0]
    for c in (0, 1):
        rows = X[y == c]
        theta[c] = rows.mean(axis=0)
        var[c] = rows.var(axis=0) + epsilon
        log_prior[c] = np.log(rows.shape[0] / n)
    return GaussianNBModel(hp, X.shape[1], theta, var, log_prior)


class BernoulliNBModel(FittedModel):
    family = "BernoulliNB"

    def __init__(self, hyperparams, n_features, log_theta, log_one_minus, log_prior):
        super().__init__(hyperparams, n_features)
        self.log_theta = log_theta
        self.log_one_minus = log_one_minus
        self.log_prior = log_prior

    def _binarize(self, X):
        thr = self.hyperparams.get("binarize")
        return (X > thr).astype(float) if thr is not None else X

    def predict_proba(self, X):
        X = self._binarize(self.check_width(X))
        jll = np.empty((X.shape[0], 2))
        for c in (0, 1):
            jll[:, c] = (self.log_prior[c]
                         + X @ self.log_theta[c]
                         + (1.0 - X) @ self.log_one_minus[c])
        return np.exp(jll[:, 1] - logsumexp(jll, axis=1))

    def to_dict(self):
        return {"log_theta": self.log_theta.tolist(),
                "log_one_minus": self.log_one_minus.tolist(),
                "log_prior": self.log_prior.tolist()}

    @classmethod
    def from_dict(cls, hyperparams, n_features, params):
        return cls(hyperparams, n_features,
                   np.asarray(params["log_theta"], dtype=float),
                   np.asarray(params["log_one_minus"], dtype=float),
                   np.asarray(params["log_prior"], dtype=float))


def fit_bernoulli_nb(hp, X, y, seed=0):
    X, y = validate_training_input(X, y)
    alpha = float(hp.get("alpha", 1.0))
    binarize = hp.get("binarize")
    if binarize is not None:
        Xb = (X > binarize).astype(float)
    else:
        Xb = X
        if np.any((X != 0.0) & (X != 1.0)):
            warnings.warn(
                "BernoulliNB with binarize=None on non-binary features",
                stacklevel=2,
            )
    log_theta = np.empty((2, X.shape[1]))
    log_one_minus = np.empty((2, X.shape[1]))
    log_prior = np.empty(2)
    n = X.shape[0]
    for c in (0, 1):
        rows = Xb[y == c]
        theta = (rows.sum(axis=0) + alpha) / (rows.shape[0] + 2.0 * alpha)
        # non-binary input can push theta outside (0, 1); clamp so the
        # (meaningless) ill-posed arm still yields finite probabilities
        theta = np.clip(theta, 1e-12, 1.0 - 1e-12)
        log_theta[c] = np.log(theta)
        log_one_minus[c] = np.log(1.0 - theta)
        log_prior[c] = np.log(rows.shape[0] / n)
    return BernoulliNBModel(hp, X.shape[1], log_theta, log_one_minus, log_prior)
