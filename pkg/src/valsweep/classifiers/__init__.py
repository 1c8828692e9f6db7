"""The seven reference classifier families under a uniform contract."""

import json

from .base import (
    MODEL_NAMES,
    FittedModel,
    ModelSpec,
    labels_from_proba,
    registry,
    spec_by_name,
)
from .histgb import HistGBModel, fit_histgb
from .knn import KNNModel, fit_knn
from .linear import (
    LinearSVMCalibratedModel,
    LogRegModel,
    fit_linear_svm_calibrated,
    fit_logreg,
    fit_platt,
)
from .naive_bayes import (
    BernoulliNBModel,
    GaussianNBModel,
    fit_bernoulli_nb,
    fit_gaussian_nb,
)
from .tree import DecisionTreeModel, fit_decision_tree

_FITTERS = {
    "DecisionTree": fit_decision_tree,
    "KNN": fit_knn,
    "GaussianNB": fit_gaussian_nb,
    "BernoulliNB": fit_bernoulli_nb,
    "LogReg": fit_logreg,
    "LinearSVM_Calibrated": fit_linear_svm_calibrated,
    "HistGB": fit_histgb,
}

_MODEL_CLASSES = {
    "DecisionTree": DecisionTreeModel,
    "KNN": KNNModel,
    "GaussianNB": GaussianNBModel,
    "BernoulliNB": BernoulliNBModel,
    "LogReg": LogRegModel,
    "LinearSVM_Calibrated": LinearSVMCalibratedModel,
    "HistGB": HistGBModel,
}

MODEL_FILE_VERSION = 1


def fit(spec, hp, X, y, seed):
    """Fit one grid point of a model family; deterministic given seed."""
    name = spec.name if isinstance(spec, ModelSpec) else spec
    return _FITTERS[name](hp, X, y, seed)


def dump_model(model, path):
    """Write a fitted model as a self-describing versioned JSON file."""
    doc = {
        "format": "valsweep-model",
        "version": MODEL_FILE_VERSION,
        "family": model.family,
        "n_features": model.n_features,
        "hyperparams": model.hyperparams,
        "params": model.to_dict(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "valsweep-model":
        raise ValueError(f"{path}: not a valsweep model file")
    if doc.get("version") != MODEL_FILE_VERSION:
        raise ValueError(f"{path}: unsupported version {doc.get('version')}")
    cls = _MODEL_CLASSES[doc["family"]]
    return cls.from_dict(doc["hyperparams"], doc["n_features"], doc["params"])


__all__ = [
    "MODEL_NAMES", "ModelSpec", "FittedModel", "registry", "spec_by_name",
    "fit", "labels_from_proba", "dump_model", "load_model", "fit_platt",
]
