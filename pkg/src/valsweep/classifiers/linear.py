"""Linear classifiers: logistic regression and the Platt-calibrated
hinge-loss linear SVM.

Logistic regression minimizes  penalty(w) + C * sum_i s_i * log-loss_i
with balanced per-sample weights s_i; L2 uses L-BFGS, L1 uses FISTA with
soft-thresholding (intercept unpenalized).  The SVM is solved in the
dual by cyclic coordinate descent (see the kernel backends).
"""

import warnings

import numpy as np
from scipy.optimize import minimize

from .. import _kernels
from ..partition import mix64, stratified_kfold
from .base import FittedModel, balanced_weights, validate_training_input

LOGREG_TOL = 1e-6
LOGREG_MAX_ITER = 2000
SVM_TOL = 1e-6
SVM_MAX_ITER = 5000
PLATT_FOLDS = 3


def _sigmoid(z):
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LinearScoreModel(FittedModel):
    """Shared store for (w, b) linear models."""

    def __init__(self, hyperparams, n_features, w, b):
        super().__init__(hyperparams, n_features)
        self.w = np.asarray(w, dtype=float)
        self.b = float(b)

    def decision_scores(self, X):
        X = self.check_width(X)
        return X @ self.w + self.b


class LogRegModel(LinearScoreModel):
    family = "LogReg"

    def predict_proba(self, X):
        return _sigmoid(self.decision_scores(X))

    def to_dict(self):
        return {"w": self.w.tolist(), "b": self.b}

    @classmethod
    def from_dict(cls, hyperparams, n_features, params):
        return cls(hyperparams, n_features, params["w"], params["b"])


def _logloss_grad(theta, X, ys, sw, C):
    w, b = theta[:-1], theta[-1]
    z = ys * (X @ w + b)
    loss = C * float(np.sum(sw * np.logaddexp(0.0, -z)))
    coef = C * sw * ys * (_sigmoid(z) - 1.0)
    grad_w = X.T @ coef
    grad_b = float(np.sum(coef))
    return loss, np.concatenate([grad_w, [grad_b]])


def fit_logreg(hp, X, y, seed=0):
    X, y = validate_training_input(X, y)
    C = float(hp.get("C", 1.0))
    penalty = hp.get("penalty", "l2")
    sw = balanced_weights(y)
    ys = np.where(y == 1, 1.0, -1.0)
    n, d = X.shape
    converged = True

    if penalty == "l2":
        def objective(theta):
            loss, grad = _logloss_grad(theta, X, ys, sw, C)
            loss += 0.5 * float(theta[:-1] @ theta[:-1])
            grad = grad.copy()
            grad[:-1] += theta[:-1]
            return loss, grad

        res = minimize(objective, np.zeros(d + 1), jac=True, method="L-BFGS-B",
                       options={"maxiter": LOGREG_MAX_ITER, "gtol": LOGREG_TOL,
                                "ftol": 1e-14})
        theta = res.x
        converged = bool(res.success) or float(np.max(np.abs(res.jac))) < 1e-3
    elif penalty == "l1":
        theta = _fista_l1(X, ys, sw, C)
        theta, converged = theta
    else:
        raise ValueError(f"unknown penalty {penalty!r}")

    if not converged:
        warnings.warn("logistic regression did not fully converge", stacklevel=2)
    model = LogRegModel(hp, d, theta[:-1], theta[-1])
    model.converged = converged
    return model


def _fista_l1(X, ys, sw, C):
    """FISTA on the weighted log-loss with an L1 prox on the weights."""
    n, d = X.shape
    Xa = np.column_stack([X, np.ones(n)])
    scaled = Xa * np.sqrt(C * sw)[:, None]
    # Lipschitz constant of the smooth part: 0.25 * lambda_max(Xa' S Xa)
    lam_max = float(np.linalg.eigvalsh(scaled.T @ scaled)[-1])
    step = 1.0 / max(0.25 * lam_max, 1e-12)

    theta = np.zeros(d + 1)
    momentum = theta.copy()
    t = 1.0
    for _ in range(LOGREG_MAX_ITER):
        z = ys * (Xa @ momentum)
        coef = C * sw * ys * (_sigmoid(z) - 1.0)
        grad = Xa.T @ coef
        nxt = momentum - step * grad
        nxt[:-1] = np.sign(nxt[:-1]) * np.maximum(np.abs(nxt[:-1]) - step, 0.0)
        t_next = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
        momentum = nxt + ((t - 1.0) / t_next) * (nxt - theta)
        delta = float(np.max(np.abs(nxt - theta)))
        theta = nxt
        t = t_next
        if delta < LOGREG_TOL:
            return theta, True
    return theta, False


class LinearSVMCalibratedModel(LinearScoreModel):
    family = "LinearSVM_Calibrated"

    def __init__(self, hyperparams, n_features, w, b, platt_a, platt_b):
        super().__init__(hyperparams, n_features, w, b)
        self.platt_a = float(platt_a)
        self.platt_b = float(platt_b)

    def predict_proba(self, X):
        s = self.decision_scores(X)
        return _sigmoid(-(self.platt_a * s + self.platt_b))

    def to_dict(self):
        return {"w": self.w.tolist(), "b": self.b,
                "platt_a": self.platt_a, "platt_b": self.platt_b}

    @classmethod
    def from_dict(cls, hyperparams, n_features, params):
        return cls(hyperparams, n_features, params["w"], params["b"],
                   params["platt_a"], params["platt_b"])


def _fit_linear_svm(X, y, C):
    sw = balanced_weights(y)
    ys = np.where(y == 1, 1.0, -1.0).astype(float)
    Xa = np.ascontiguousarray(np.column_stack([X, np.ones(X.shape[0])]))
    w, _, converged = _kernels.svm_dual_cd(
        Xa, ys, np.ascontiguousarray(C * sw), SVM_TOL, SVM_MAX_ITER
    )
    w = np.asarray(w)
    return w[:-1], float(w[-1]), converged


def fit_platt(scores, y, max_iter=100, tol=1e-12):
    """Platt sigmoid p = 1 / (1 + exp(A*s + B)) by penalized Newton MLE.

    Follows the Lin-Weng-Keerthi formulation with prior-corrected
    targets.  Returns (A, B).
    """
    scores = np.asarray(scores, dtype=float)
    y = np.asarray(y)
    n1 = int(np.count_nonzero(y == 1))
    n0 = y.shape[0] - n1
    hi = (n1 + 1.0) / (n1 + 2.0)
    lo = 1.0 / (n0 + 2.0)
    t = np.where(y == 1, hi, lo)

    a = 0.0
    b = np.log((n0 + 1.0) / (n1 + 1.0))
    sigma = 1e-12
    for _ in range(max_iter):
        z = a * scores + b
        p = _sigmoid(-z)
        # gradient of NLL wrt (a, b)
        d1 = t - p
        g_a = float(np.sum(d1 * scores))
        g_b = float(np.sum(d1))
        if max(abs(g_a), abs(g_b)) < 1e-10:
            break
        d2 = p * (1.0 - p)
        h11 = float(np.sum(d2 * scores * scores)) + sigma
        h22 = float(np.sum(d2)) + sigma
        h12 = float(np.sum(d2 * scores))
        det = h11 * h22 - h12 * h12
        if det <= 0:
            break
        da = -(h22 * g_a - h12 * g_b) / det
        db = -(h11 * g_b - h12 * g_a) / det
        a += da
        b += db
        if max(abs(da), abs(db)) < tol:
            break
    return a, b


def fit_linear_svm_calibrated(hp, X, y, seed=0):
    """Hinge-loss linear SVM with sigmoid calibration on out-of-fold
    decision scores from a 3-fold stratified internal split."""
    X, y = validate_training_input(X, y)
    C = float(hp.get("C", 1.0))

    counts = np.bincount(y, minlength=2)
    folds = min(PLATT_FOLDS, int(counts.min()))
    oof_scores = np.zeros(y.shape[0])
    have_oof = folds >= 2
    converged = True
    if have_oof:
        plan = stratified_kfold(y, folds, mix64(seed, 101))
        for split in plan.splits:
            w, b, ok = _fit_linear_svm(X[split.train], y[split.train], C)
            converged &= ok
            oof_scores[split.test] = X[split.test] @ w + b

    w, b, ok = _fit_linear_svm(X, y, C)
    converged &= ok
    if not have_oof:
        oof_scores = X @ w + b
    a_platt, b_platt = fit_platt(oof_scores, y)
    if not converged:
        warnings.warn("linear SVM did not fully converge", stacklevel=2)
    model = LinearSVMCalibratedModel(hp, X.shape[1], w, b, a_platt, b_platt)
    model.converged = converged
    return model
