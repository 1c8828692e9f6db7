"""Leakage-safe preprocessing fitted on training rows only.

Numeric columns: constant-0 imputation, then standard or quantile-normal
scaling.  Categorical columns: "__missing__" imputation, then one-hot
with the training vocabulary.  Finally mutual-information top-k feature
selection over the encoded matrix.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import EmptyTrainingSet, SchemaMismatch, SingleClassTraining

MISSING_TOKEN = "__missing__"
CDF_CLIP = 1e-7
MAX_MI_BINS = 32
MAX_QUANTILES = 1000


@dataclass(frozen=True)
class PreprocessSpec:
    scaler: str = "standard"           # "standard" | "quantile_normal"
    select_k: object = "all"           # "all" | int >= 1

    def __post_init__(self):
        if self.scaler not in ("standard", "quantile_normal"):
            raise ValueError(f"unknown scaler {self.scaler!r}")
        if self.select_k != "all" and int(self.select_k) < 1:
            raise ValueError("select_k must be 'all' or >= 1")


@dataclass(frozen=True)
class FittedPreprocessor:
    spec: PreprocessSpec
    numeric_names: tuple
    categorical_names: tuple
    # standard scaling: per-column (mean, std); quantile: (quantiles, refs)
    numeric_stats: dict
    vocab: dict                        # per categorical column, ordered tokens
    encoded_names: tuple
    selected: np.ndarray               # boolean mask over encoded columns
    mi_scores: np.ndarray

    @property
    def output_width(self):
        return int(np.count_nonzero(self.selected))


def _impute_numeric(col, rows):
    out = col[rows].astype(float)
    out[np.isnan(out)] = 0.0
    return out


def _encode(ds, rows, numeric_names, categorical_names, numeric_stats,
            vocab, scaler):
    blocks = []
    for name in numeric_names:
        x = _impute_numeric(ds.numeric[name], rows)
        if scaler == "standard":
            mean, std = numeric_stats[name]
            blocks.append(np.zeros_like(x) if std == 0.0 else (x - mean) / std)
        else:
            quantiles, refs = numeric_stats[name]
            if quantiles.shape[0] == 1 or quantiles[0] == quantiles[-1]:
                blocks.append(np.zeros_like(x))
            else:
                cdf = np.interp(x, quantiles, refs)
                blocks.append(ndtri(np.clip(cdf, CDF_CLIP, 1.0 - CDF_CLIP)))
    for name in categorical_names:
        raw = ds.categorical[name][rows]
        tokens = np.array(
            [MISSING_TOKEN if v is None else v for v in raw], dtype=object
        )
        for tok in vocab[name]:
            blocks.append((tokens == tok).astype(float))
    if not blocks:
        return np.empty((rows.shape[0], 0))
    return np.column_stack(blocks)


def mutual_information(feature, labels):
    """Plug-in MI (nats) between an equal-width-binned feature and labels.

    Bin count is min(ceil(sqrt(n)), 32); already-discrete features with
    few distinct values are measured exactly.
    """
    feature = np.asarray(feature, dtype=float)
    labels = np.asarray(labels)
    if len(np.unique(labels)) < 2:
        raise SingleClassTraining("labels contain a single class")
    n = feature.shape[0]
    lo, hi = float(np.min(feature)), float(np.max(feature))
    if lo == hi:
        return 0.0
    n_bins = min(int(np.ceil(np.sqrt(n))), MAX_MI_BINS)
    edges = np.linspace(lo, hi, n_bins + 1)
    codes = np.clip(np.searchsorted(edges, feature, side="right") - 1, 0, n_bins - 1)
    joint = np.zeros((n_bins, 2))
    for c in (0, 1):
        joint[:, c] = np.bincount(codes[labels == c], minlength=n_bins)
    joint /= n
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    mask = joint > 0
    outer = np.outer(px, py)
    mi = float(np.sum(joint[mask] * np.log(joint[mask] / outer[mask])))
    return max(mi, 0.0)


def fit_preprocessor(ds, rows, spec, seed=0):
    """Fit all statistics on the training rows of ``ds``.

    ``seed`` is accepted for interface uniformity; the fit itself is
    deterministic and does not consume randomness.
    """
    rows = np.asarray(rows)
    if rows.shape[0] == 0:
        raise EmptyTrainingSet("no training rows")
    labels = ds.target[rows]
    if len(np.unique(labels)) < 2:
        raise SingleClassTraining("training rows contain a single class")

    kinds = ds.column_kinds()
    numeric_stats = {}
    for name in kinds.numeric:
        x = _impute_numeric(ds.numeric[name], rows)
        if spec.scaler == "standard":
            numeric_stats[name] = (float(np.mean(x)), float(np.std(x)))
        else:
            n_q = min(MAX_QUANTILES, x.shape[0])
            refs = np.linspace(0.0, 1.0, n_q)
            numeric_stats[name] = (np.quantile(x, refs), refs)

    vocab = {}
    for name in kinds.categorical:
        raw = ds.categorical[name][rows]
        tokens = {MISSING_TOKEN if v is None else v for v in raw}
        vocab[name] = tuple(sorted(tokens))

    encoded_names = []
    for name in kinds.numeric:
        encoded_names.append(name)
    for name in kinds.categorical:
        encoded_names.extend(f"{name}={tok}" for tok in vocab[name])

    encoded = _encode(ds, rows, kinds.numeric, kinds.categorical,
                      numeric_stats, vocab, spec.scaler)
    width = encoded.shape[1]
    mi_scores = np.array(
        [mutual_information(encoded[:, j], labels) for j in range(width)]
    )
    if spec.select_k == "all":
        k = width
    else:
        k = min(int(spec.select_k), width)
    order = np.lexsort((np.arange(width), -mi_scores))
    selected = np.zeros(width, dtype=bool)
    selected[order[:k]] = True

    return FittedPreprocessor(
        spec=spec,
        numeric_names=kinds.numeric,
        categorical_names=kinds.categorical,
        numeric_stats=numeric_stats,
        vocab=vocab,
        encoded_names=tuple(encoded_names),
        selected=selected,
        mi_scores=mi_scores,
    )


def transform(fp, ds, rows):
    """Apply fitted statistics to rows of a same-schema Dataset."""
    kinds = ds.column_kinds()
    if kinds.numeric != fp.numeric_names or kinds.categorical != fp.categorical_names:
        raise SchemaMismatch("dataset schema differs from the fitting schema")
    rows = np.asarray(rows)
    encoded = _encode(ds, rows, fp.numeric_names, fp.categorical_names,
                      fp.numeric_stats, fp.vocab, fp.spec.scaler)
    return encoded[:, fp.selected]
