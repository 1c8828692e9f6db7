# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: CART split scan and boosting histograms.

Semantics (including accumulation order and tie handling) must stay
bit-identical to ``_pykernels``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def gini_split_scan(double[::1] sorted_vals, double[::1] sorted_y,
                    double[::1] sorted_w, Py_ssize_t min_samples_leaf):
    """Best Gini split of one pre-sorted feature; see the numpy twin."""
    cdef Py_ssize_t n = sorted_vals.shape[0]
    cdef Py_ssize_t i, best_pos = -1
    cdef double lw0 = 0.0, lw1 = 0.0, tot0 = 0.0, tot1 = 0.0
    cdef double w1i, wl, wr, rw0, rw1, wtot, score
    cdef double best = np.inf

    if n < 2 * min_samples_leaf:
        return np.inf, np.nan, -1

    for i in range(n):
        w1i = sorted_w[i] * sorted_y[i]
        tot0 += sorted_w[i] - w1i
        tot1 += w1i
    wtot = tot0 + tot1

    for i in range(1, n):
        w1i = sorted_w[i - 1] * sorted_y[i - 1]
        lw0 += sorted_w[i - 1] - w1i
        lw1 += w1i
        if not (sorted_vals[i - 1] < sorted_vals[i]):
            continue
        if i < min_samples_leaf or n - i < min_samples_leaf:
            continue
        wl = lw0 + lw1
        rw0 = tot0 - lw0
        rw1 = tot1 - lw1
        wr = wtot - wl
        score = ((wl - (lw0 * lw0 + lw1 * lw1) / wl)
                 + (wr - (rw0 * rw0 + rw1 * rw1) / wr)) / wtot
        if score < best:
            best = score
            best_pos = i
    if best_pos < 0:
        return np.inf, np.nan, -1
    return best, (sorted_vals[best_pos - 1] + sorted_vals[best_pos]) / 2.0, best_pos


def hist_build(cnp.uint8_t[:, ::1] codes, long long[::1] sample_idx,
               double[::1] grad, double[::1] hess, Py_ssize_t n_bins):
    """Per-feature (grad, hess, count) histograms over the given samples."""
    cdef Py_ssize_t d = codes.shape[1]
    cdef Py_ssize_t m = sample_idx.shape[0]
    cdef Py_ssize_t i, j, s, b
    gh_arr = np.zeros((d, n_bins))
    hh_arr = np.zeros((d, n_bins))
    ch_arr = np.zeros((d, n_bins), dtype=np.int64)
    cdef double[:, ::1] gh = gh_arr
    cdef double[:, ::1] hh = hh_arr
    cdef long long[:, ::1] ch = ch_arr
    for i in range(m):
        s = sample_idx[i]
        for j in range(d):
            b = codes[s, j]
            gh[j, b] += grad[s]
            hh[j, b] += hess[s]
            ch[j, b] += 1
    return gh_arr, hh_arr, ch_arr


def hist_best_split(double[:, ::1] gh, double[:, ::1] hh,
                    long long[:, ::1] ch, long long[::1] n_bins_used,
                    double sum_g, double sum_h, long long total_count,
                    Py_ssize_t min_samples_leaf, double lam):
    """Best (feature, bin) split by Newton gain; see the numpy twin."""
    cdef Py_ssize_t d = gh.shape[0]
    cdef Py_ssize_t j, b, nb
    cdef Py_ssize_t best_f = -1, best_b = -1
    cdef double parent = (sum_g * sum_g) / (sum_h + lam)
    cdef double best_gain = -np.inf
    cdef double gl, hl, gr, hr, gain
    cdef long long cl, cr
    for j in range(d):
        nb = n_bins_used[j]
        if nb < 2:
            continue
        gl = 0.0
        hl = 0.0
        cl = 0
        for b in range(nb - 1):
            gl += gh[j, b]
            hl += hh[j, b]
            cl += ch[j, b]
            cr = total_count - cl
            if cl < min_samples_leaf or cr < min_samples_leaf:
                continue
            gr = sum_g - gl
            hr = sum_h - hl
            gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent)
            if gain > best_gain:
                best_gain = gain
                best_f = j
                best_b = b
    return best_f, best_b, best_gain


def svm_dual_cd(double[:, ::1] X, double[::1] y_signed, double[::1] c_upper,
                double tol, Py_ssize_t max_epochs):
    """Dual coordinate descent for the hinge-loss linear SVM; see twin."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t i, j, epoch
    cdef Py_ssize_t epochs = 0
    cdef bint converged = False
    cdef double g, a, pg, apg, vmax, a_new, delta, dot
    alpha_arr = np.zeros(n)
    w_arr = np.zeros(d)
    qii_arr = np.einsum("ij,ij->i", np.asarray(X), np.asarray(X))
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] w = w_arr
    cdef double[::1] qii = qii_arr
    for epoch in range(max_epochs):
        epochs = epoch + 1
        vmax = 0.0
        for i in range(n):
            dot = 0.0
            for j in range(d):
                dot += X[i, j] * w[j]
            g = y_signed[i] * dot - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= c_upper[i]:
                pg = max(g, 0.0)
            else:
                pg = g
            apg = pg if pg >= 0.0 else -pg
            if apg > vmax:
                vmax = apg
            if apg > 1e-12 and qii[i] > 0.0:
                a_new = min(max(a - g / qii[i], 0.0), c_upper[i])
                if a_new != a:
                    delta = (a_new - a) * y_signed[i]
                    for j in range(d):
                        w[j] += delta * X[i, j]
                    alpha[i] = a_new
        if vmax < tol:
            converged = True
            break
    return w_arr, epochs, converged
