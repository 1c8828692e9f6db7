"""Pure-numpy kernels, used when the compiled extension is unavailable.

Both backends must be numerically bit-identical: every formula here is
evaluated element-wise in the same order as the C loops in ``_cykernels``.
"""

import numpy as np


def gini_split_scan(sorted_vals, sorted_y, sorted_w, min_samples_leaf):
    """Best Gini split of one feature, pre-sorted ascending by value.

    Returns ``(score, threshold, pos)`` where ``score`` is the weighted
    mean child impurity (lower is better) and ``pos`` is the left-block
    length, or ``(inf, nan, -1)`` when no valid split exists.  Exact score
    ties keep the lowest threshold.
    """
    n = sorted_vals.shape[0]
    if n < 2 * min_samples_leaf:
        return np.inf, np.nan, -1

    w1 = sorted_w * sorted_y
    w0 = sorted_w - w1
    cw0 = np.cumsum(w0)
    cw1 = np.cumsum(w1)
    tot0 = cw0[-1]
    tot1 = cw1[-1]
    wtot = tot0 + tot1

    # candidate split positions: left = [0, i)
    i = np.arange(1, n)
    valid = sorted_vals[:-1] < sorted_vals[1:]
    valid &= i >= min_samples_leaf
    valid &= (n - i) >= min_samples_leaf
    if not valid.any():
        return np.inf, np.nan, -1

    lw0 = cw0[:-1]
    lw1 = cw1[:-1]
    wl = lw0 + lw1
    rw0 = tot0 - lw0
    rw1 = tot1 - lw1
    wr = wtot - wl
    with np.errstate(divide="ignore", invalid="ignore"):
        score = (
            (wl - (lw0 * lw0 + lw1 * lw1) / wl)
            + (wr - (rw0 * rw0 + rw1 * rw1) / wr)
        ) / wtot
    score = np.where(valid, score, np.inf)
    best = int(np.argmin(score))
    if not np.isfinite(score[best]):
        return np.inf, np.nan, -1
    pos = best + 1
    thr = (sorted_vals[pos - 1] + sorted_vals[pos]) / 2.0
    return float(score[best]), float(thr), pos


def hist_build(codes, sample_idx, grad, hess, n_bins):
    """Per-feature (grad, hess, count) histograms over the given samples.

    ``codes`` is (n_samples, n_features) uint8 bin codes; accumulation is
    in sample order per bin, matching the compiled loop.
    """
    d = codes.shape[1]
    gh = np.zeros((d, n_bins))
    hh = np.zeros((d, n_bins))
    ch = np.zeros((d, n_bins), dtype=np.int64)
    sub = codes[sample_idx]
    g = grad[sample_idx]
    h = hess[sample_idx]
    for j in range(d):
        c = sub[:, j]
        gh[j] = np.bincount(c, weights=g, minlength=n_bins)
        hh[j] = np.bincount(c, weights=h, minlength=n_bins)
        ch[j] = np.bincount(c, minlength=n_bins)
    return gh, hh, ch


def hist_best_split(gh, hh, ch, n_bins_used, sum_g, sum_h, total_count,
                    min_samples_leaf, lam):
    """Best (feature, bin) split by Newton gain over prebuilt histograms.

    Split sends bins ``<= bin`` left.  Returns ``(feature, bin, gain)``
    with ``feature == -1`` when no valid split exists; exact gain ties
    keep the lowest (feature, bin).
    """
    d = gh.shape[0]
    parent = (sum_g * sum_g) / (sum_h + lam)
    best_gain = -np.inf
    best_f = -1
    best_b = -1
    for j in range(d):
        nb = int(n_bins_used[j])
        if nb < 2:
            continue
        gl = np.cumsum(gh[j, :nb])[:-1]
        hl = np.cumsum(hh[j, :nb])[:-1]
        cl = np.cumsum(ch[j, :nb])[:-1]
        cr = total_count - cl
        gr = sum_g - gl
        hr = sum_h - hl
        ok = (cl >= min_samples_leaf) & (cr >= min_samples_leaf)
        if not ok.any():
            continue
        gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent)
        gain = np.where(ok, gain, -np.inf)
        b = int(np.argmax(gain))
        if gain[b] > best_gain:
            best_gain = float(gain[b])
            best_f = j
            best_b = b
    return best_f, best_b, best_gain


def svm_dual_cd(X, y_signed, c_upper, tol, max_epochs):
    """Dual coordinate descent for the L2-regularized L1-hinge linear SVM.

    ``X`` already carries the bias column.  Returns ``(w, epochs,
    converged)``.  The sweep order is cyclic, so results are
    deterministic and identical to the compiled backend.
    """
    n, d = X.shape
    alpha = np.zeros(n)
    w = np.zeros(d)
    qii = np.einsum("ij,ij->i", X, X)
    epochs = 0
    converged = False
    for epoch in range(max_epochs):
        epochs = epoch + 1
        vmax = 0.0
        for i in range(n):
            g = y_signed[i] * float(X[i] @ w) - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= c_upper[i]:
                pg = max(g, 0.0)
            else:
                pg = g
            apg = abs(pg)
            if apg > vmax:
                vmax = apg
            if apg > 1e-12 and qii[i] > 0.0:
                a_new = min(max(a - g / qii[i], 0.0), c_upper[i])
                if a_new != a:
                    w += (a_new - a) * y_signed[i] * X[i]
                    alpha[i] = a_new
        if vmax < tol:
            converged = True
            break
    return w, epochs, converged
