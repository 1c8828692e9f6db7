"""The six evaluation metrics over binary labels, predictions, and scores.

Ranking metrics (ROC-AUC, average precision) return NaN when only one
class is present, mirroring the single-class guard in the evaluation
loop; degenerate MCC denominators map to 0.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import EmptyInput, LengthMismatch, OutOfRangeProbability

METRIC_NAMES = ("accuracy", "roc_auc", "pr_auc", "f1", "mcc", "brier")


@dataclass(frozen=True)
class MetricSet:
    accuracy: float
    roc_auc: float
    pr_auc: float
    f1: float
    mcc: float
    brier: float

    def as_dict(self):
        return {name: getattr(self, name) for name in METRIC_NAMES}


def _check_pair(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(f"{a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] == 0:
        raise EmptyInput("empty input")
    return a, b


def accuracy(y_true, y_pred):
    y_true, y_pred = _check_pair(y_true, y_pred)
    return float(np.mean(y_true == y_pred))


def roc_auc(y_true, scores):
    """Mann-Whitney AUC: P(pos score > neg score) + 0.5 P(tie)."""
    y_true, scores = _check_pair(y_true, scores)
    pos = int(np.count_nonzero(y_true == 1))
    neg = y_true.shape[0] - pos
    if pos == 0 or neg == 0:
        return float("nan")
    ranks = rankdata(scores, method="average")
    rank_sum = float(np.sum(ranks[y_true == 1]))
    return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg)


def average_precision(y_true, scores):
    """Step-interpolated area under the precision-recall curve.

    Tied scores are grouped at a single threshold.
    """
    y_true, scores = _check_pair(y_true, scores)
    total_pos = int(np.count_nonzero(y_true == 1))
    if total_pos == 0 or total_pos == y_true.shape[0]:
        return float("nan")
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = y_true[order]
    ap = 0.0
    tp = 0
    seen = 0
    i = 0
    n = y.shape[0]
    while i < n:
        j = i
        while j < n and s[j] == s[i]:
            j += 1
        block_pos = int(np.count_nonzero(y[i:j] == 1))
        tp += block_pos
        seen = j
        recall_step = block_pos / total_pos
        precision = tp / seen
        ap += recall_step * precision
        i = j
    return ap


def f1_weighted(y_true, y_pred):
    """Support-weighted mean of the two per-class F1 scores."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    n = y_true.shape[0]
    out = 0.0
    for cls in (0, 1):
        support = int(np.count_nonzero(y_true == cls))
        if support == 0:
            continue
        tp = int(np.count_nonzero((y_true == cls) & (y_pred == cls)))
        pred_pos = int(np.count_nonzero(y_pred == cls))
        denom = pred_pos + support
        f1 = 2.0 * tp / denom if denom > 0 else 0.0
        out += support / n * f1
    return out


def mcc(y_true, y_pred):
    """Matthews correlation from the confusion matrix; 0 when degenerate."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    tp = int(np.count_nonzero((y_true == 1) & (y_pred == 1)))
    tn = int(np.count_nonzero((y_true == 0) & (y_pred == 0)))
    fp = int(np.count_nonzero((y_true == 0) & (y_pred == 1)))
    fn = int(np.count_nonzero((y_true == 1) & (y_pred == 0)))
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(denom)


def brier(y_true, prob_positive):
    y_true, prob_positive = _check_pair(y_true, prob_positive)
    p = np.asarray(prob_positive, dtype=float)
    if np.any(p < 0) or np.any(p > 1) or not np.all(np.isfinite(p)):
        raise OutOfRangeProbability("probabilities must lie in [0, 1]")
    return float(np.mean((p - y_true) ** 2))


def compute_all(y_true, y_pred, prob_positive):
    """All six metrics; ranking metrics, F1, and Brier are NaN on a
    single-class y_true (accuracy and MCC are still computed)."""
    y_true = np.asarray(y_true)
    acc = accuracy(y_true, y_pred)
    m = mcc(y_true, y_pred)
    if len(np.unique(y_true)) > 1:
        auc = roc_auc(y_true, prob_positive)
        ap = average_precision(y_true, prob_positive)
        f1 = f1_weighted(y_true, y_pred)
        bs = brier(y_true, prob_positive)
    else:
        auc = ap = f1 = bs = float("nan")
    return MetricSet(accuracy=acc, roc_auc=auc, pr_auc=ap, f1=f1, mcc=m, brier=bs)
