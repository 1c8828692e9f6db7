"""Synthetic binary-classification datasets.

Used by the test and benchmark suites: a logistic-signal generator, a
null (permuted-label) generator, and a heart-study-style generator that
mimics a small distinct-row pool upsampled with duplicates, the
structure that lets memorizing models reach near-perfect CV scores.
"""

import numpy as np

from .tabular import Dataset


def _dataset_from_matrix(X, y, name, target_name="target"):
    feature_names = tuple(f"f{j}" for j in range(X.shape[1]))
    numeric = {fname: np.ascontiguousarray(X[:, j], dtype=float)
               for j, fname in enumerate(feature_names)}
    return Dataset(
        feature_names=feature_names, numeric=numeric, categorical={},
        target=np.asarray(y, dtype=np.int8), target_name=target_name,
        name=name,
    )


def make_signal(n, d, seed, informative=None, scale=2.0, name="synth-signal"):
    """Gaussian features with a logistic linear signal on `informative`
    of them (default: half)."""
    rng = np.random.default_rng(seed)
    informative = informative if informative is not None else max(1, d // 2)
    X = rng.normal(size=(n, d))
    beta = np.zeros(d)
    beta[:informative] = rng.uniform(0.5, 1.5, size=informative)
    z = scale * (X @ beta) / np.sqrt(float(beta @ beta))
    p = 1.0 / (1.0 + np.exp(-z))
    y = (rng.random(n) < p).astype(np.int8)
    # guard against a degenerate draw
    if y.min() == y.max():
        y[0] = 1 - y[0]
    return _dataset_from_matrix(X, y, name)


def make_null(n, d, seed, name="synth-null"):
    """No signal: independent features and balanced random labels."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = np.zeros(n, dtype=np.int8)
    y[rng.permutation(n)[: n // 2]] = 1
    return _dataset_from_matrix(X, y, name)


def make_heart_style(seed=0, n_rows=1025, n_distinct=240, d=13,
                     linear_scale=4.0, name="synth-heart"):
    """Heart-study-style dataset: a distinct-row pool resampled with
    duplicates up to `n_rows`.

    Labels are attached to the distinct rows, so duplicated rows carry
    consistent labels; nearest-neighbor and deep-tree models can then
    score near 1.0 under cross-validation.  The signal is linear and
    concentrated on three features, so linear models are capped by the
    signal strength (`linear_scale`) instead of memorization.
    """
    rng = np.random.default_rng(seed)
    base = rng.normal(size=(n_distinct, d))
    # a few integer-ish clinical-style columns
    base[:, 0] = np.round(base[:, 0] * 9 + 54)          # age-like
    base[:, 1] = (base[:, 1] > 0).astype(float)         # sex-like
    base[:, 2] = np.round(np.clip(base[:, 2], -1, 2)) + 1

    beta = np.full(d, 0.15)
    beta[[3, 4, 5]] = [2.2, 1.8, 1.5]
    zd = (base - base.mean(axis=0)) / base.std(axis=0)
    z = linear_scale * (zd @ beta) / np.sqrt(float(beta @ beta))
    p = 1.0 / (1.0 + np.exp(-z))
    y_base = (rng.random(n_distinct) < p).astype(np.int8)
    if y_base.min() == y_base.max():
        y_base[0] = 1 - y_base[0]

    pick = rng.integers(0, n_distinct, size=n_rows)
    return _dataset_from_matrix(base[pick], y_base[pick], name)
