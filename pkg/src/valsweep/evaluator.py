"""The experiment engine.

Builds deterministic work items (one outer evaluation each), executes
them inline or in a process pool, and folds the per-evaluation records
into StrategyResults.  Results are merged by work-item key, never by
completion order, so parallelism never changes the output.
"""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import classifiers, metrics, pipeline, report, tabular
from .errors import AllCandidatesFailed, ValsweepError
from .partition import (
    mix64,
    repeated_stratified_kfold,
    stratified_holdout,
    stratified_kfold,
)

# strategy-family codes mixed into work-item seeds
_S_NESTED, _S_HOLDOUT, _S_KFOLD, _S_REPEATED = 1, 2, 3, 4

DEFAULT_TEST_SIZES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_K_RANGE = tuple(range(2, 16))
SELECT_K_VALUES = ("all", 10, 20, 40)
SCALERS = ("standard", "quantile_normal")


@dataclass(frozen=True)
class ScorerChoice:
    id: str


def choose_scorer(prev):
    """average_precision iff training prevalence < 0.30 (strict)."""
    return ScorerChoice("average_precision" if prev < 0.30 else "roc_auc")


@dataclass(frozen=True)
class CandidateConfig:
    preprocess: pipeline.PreprocessSpec
    model_hp: tuple  # sorted-free ordered (name, value) pairs

    def hp_dict(self):
        return dict(self.model_hp)

    def describe(self):
        return {
            "scaler": self.preprocess.scaler,
            "select_k": self.preprocess.select_k,
            **{k: v for k, v in self.model_hp},
        }


def candidate_grid(model_spec, n_dataset_features, reduced=False):
    """Preprocessing x model grid in declaration order.

    select_k values larger than or equal to the dataset feature count are
    equivalent to "all" and are dropped after clamping.
    """
    select_ks = []
    for k in SELECT_K_VALUES:
        if k != "all" and int(k) >= n_dataset_features:
            k = "all"
        elif k != "all":
            k = int(k)
        if k not in select_ks:
            select_ks.append(k)
    scalers = SCALERS[:1] if reduced else SCALERS
    if reduced:
        select_ks = select_ks[:1]
    points = model_spec.grid_points(reduced=reduced)
    grid = []
    for scaler in scalers:
        for k in select_ks:
            for hp in points:
                grid.append(CandidateConfig(
                    preprocess=pipeline.PreprocessSpec(scaler=scaler, select_k=k),
                    model_hp=tuple(hp.items()),
                ))
    return grid


def _score_predictions(scorer, y_true, proba):
    if scorer.id == "average_precision":
        return metrics.average_precision(y_true, proba)
    return metrics.roc_auc(y_true, proba)


def grid_search(model_spec, ds, train_rows, scorer, inner_folds, seed,
                reduced=False):
    """Inner stratified-CV selection over the candidate grid.

    Returns (best candidate, model refit on the full training rows,
    preprocessor fitted on the full training rows).  The preprocessor is
    refitted inside every inner fold, so no test statistic leaks.
    """
    train_rows = np.asarray(train_rows)
    labels = ds.target[train_rows]
    counts = np.bincount(labels, minlength=2)
    folds = min(inner_folds, int(counts.min()))
    if folds < 2:
        raise AllCandidatesFailed("inner CV infeasible: a class has < 2 rows")

    plan = stratified_kfold(labels, folds, mix64(seed, 11))
    grid = candidate_grid(model_spec, len(ds.feature_names), reduced=reduced)

    best_mean = -math.inf
    best_candidate = None
    for cand_idx, cand in enumerate(grid):
        fold_scores = []
        for fold_idx, split in enumerate(plan.splits):
            fit_rows = train_rows[split.train]
            val_rows = train_rows[split.test]
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    fp = pipeline.fit_preprocessor(ds, fit_rows, cand.preprocess)
                    Xf = pipeline.transform(fp, ds, fit_rows)
                    model = classifiers.fit(
                        model_spec, cand.hp_dict(), Xf, ds.target[fit_rows],
                        mix64(seed, 12, cand_idx, fold_idx),
                    )
                    proba = model.predict_proba(pipeline.transform(fp, ds, val_rows))
                if not np.all(np.isfinite(proba)):
                    continue
                score = _score_predictions(scorer, ds.target[val_rows], proba)
            except ValsweepError:
                continue
            if not math.isnan(score):
                fold_scores.append(score)
        if fold_scores:
            mean = float(np.mean(fold_scores))
            if mean > best_mean:
                best_mean = mean
                best_candidate = cand
    if best_candidate is None:
        raise AllCandidatesFailed("every candidate failed on every inner fold")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fp = pipeline.fit_preprocessor(ds, train_rows, best_candidate.preprocess)
        Xf = pipeline.transform(fp, ds, train_rows)
        model = classifiers.fit(
            model_spec, best_candidate.hp_dict(), Xf, ds.target[train_rows],
            mix64(seed, 13),
        )
    return best_candidate, model, fp


@dataclass(frozen=True)
class WorkItem:
    model: str
    strategy: str
    repeat: int
    fold: int
    train_rows: np.ndarray
    test_rows: np.ndarray
    seed: int


@dataclass(frozen=True)
class EngineConfig:
    inner_folds: int = 3
    seed: int = 42
    grid: str = "full"      # "full" | "reduced"
    jobs: int = 1

    @property
    def reduced(self):
        return self.grid == "reduced"


def _evaluate_item(ds, item, scorer, cfg):
    """One outer evaluation; failures become NaN records, not crashes."""
    base = {
        "model": item.model, "strategy": item.strategy,
        "repeat": item.repeat, "fold": item.fold, "seed": item.seed,
    }
    nan_metrics = {m: float("nan") for m in metrics.METRIC_NAMES}
    try:
        spec = classifiers.spec_by_name(item.model)
        cand, model, fp = grid_search(
            spec, ds, item.train_rows, scorer, cfg.inner_folds, item.seed,
            reduced=cfg.reduced,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            proba = model.predict_proba(
                pipeline.transform(fp, ds, item.test_rows))
        if not np.all(np.isfinite(proba)):
            raise AllCandidatesFailed("non-finite test probabilities")
        proba = np.clip(proba, 0.0, 1.0)
        y_pred = classifiers.labels_from_proba(proba)
        ms = metrics.compute_all(ds.target[item.test_rows], y_pred, proba)
        return {**base, "candidate": cand.describe(),
                "metrics": ms.as_dict(), "failed": False, "reason": ""}
    except ValsweepError as exc:
        return {**base, "candidate": None, "metrics": nan_metrics,
                "failed": True, "reason": f"{type(exc).__name__}: {exc}"}


# --- process-pool plumbing ---

_POOL_CTX = {}


def _pool_init(ds, scorer, cfg):
    _POOL_CTX["args"] = (ds, scorer, cfg)


def _pool_eval(item):
    ds, scorer, cfg = _POOL_CTX["args"]
    return _evaluate_item(ds, item, scorer, cfg)


def run_items(ds, items, scorer, cfg):
    """Execute work items at the configured parallelism.

    Records come back in work-item order regardless of completion order.
    """
    if cfg.jobs <= 1:
        return [_evaluate_item(ds, item, scorer, cfg) for item in items]
    with ProcessPoolExecutor(
        max_workers=cfg.jobs, initializer=_pool_init,
        initargs=(ds, scorer, cfg),
    ) as pool:
        return list(pool.map(_pool_eval, items, chunksize=1))


def aggregate(model, strategy, records, skipped=False, skip_reason=""):
    """Fold per-evaluation records into a StrategyResult (NaN-ignoring)."""
    mean = {}
    std = {}
    for m in metrics.METRIC_NAMES:
        vals = np.array([r["metrics"][m] for r in records], dtype=float)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mean[m] = float(np.nanmean(vals)) if vals.size else float("nan")
            std[m] = float(np.nanstd(vals)) if vals.size else float("nan")
    failures = sum(1 for r in records if r["failed"])
    return report.StrategyResult(
        model=model, strategy=strategy, mean=mean, std=std,
        eval_count=len(records) - failures, failure_count=failures,
        skipped=skipped, skip_reason=skip_reason,
    )


# --- strategy planners ---

def plan_nested_cv(ds, model, outer_splits=5, outer_repeats=2, seed=42):
    strategy = f"Nested_CV_{outer_splits}x{outer_repeats}"
    plan = repeated_stratified_kfold(
        ds.target, outer_splits, outer_repeats, mix64(seed, _S_NESTED))
    items = []
    for i, split in enumerate(plan.splits):
        rep, fold = divmod(i, outer_splits)
        items.append(WorkItem(
            model=model, strategy=strategy, repeat=rep, fold=fold,
            train_rows=split.train, test_rows=split.test,
            seed=mix64(seed, _S_NESTED, rep, fold),
        ))
    return strategy, items


def plan_holdout(ds, model, test_size, repeats=10, seed=42):
    pct = int(round(test_size * 100))
    strategy = f"Holdout_{pct}%"
    items = []
    for rep in range(repeats):
        split_seed = mix64(seed, _S_HOLDOUT, pct, rep)
        split = stratified_holdout(ds.target, test_size, split_seed)
        items.append(WorkItem(
            model=model, strategy=strategy, repeat=rep, fold=0,
            train_rows=split.train, test_rows=split.test, seed=split_seed,
        ))
    return strategy, items


def plan_kfold(ds, model, k, repeats=3, seed=42):
    strategy = f"Kfold_{k}"
    plan = repeated_stratified_kfold(
        ds.target, k, repeats, mix64(seed, _S_KFOLD, k))
    items = []
    for i, split in enumerate(plan.splits):
        rep, fold = divmod(i, k)
        items.append(WorkItem(
            model=model, strategy=strategy, repeat=rep, fold=fold,
            train_rows=split.train, test_rows=split.test,
            seed=mix64(seed, _S_KFOLD, k, rep, fold),
        ))
    return strategy, items


def plan_repeated_holdout(ds, model, test_size=0.3, n_repeats_nominal=1000,
                          cap=50, seed=42):
    pct = int(round(test_size * 100))
    strategy = f"Repeated_Holdout_{pct}_{100 - pct}_{n_repeats_nominal}x"
    items = []
    for rep in range(min(n_repeats_nominal, cap)):
        split_seed = mix64(seed, _S_REPEATED, rep)
        split = stratified_holdout(ds.target, test_size, split_seed)
        items.append(WorkItem(
            model=model, strategy=strategy, repeat=rep, fold=0,
            train_rows=split.train, test_rows=split.test, seed=split_seed,
        ))
    return strategy, items


# --- strategy evaluators ---

def evaluate_nested_cv(spec, ds, outer_splits=5, outer_repeats=2,
                       inner_folds=3, seed=42, cfg=None):
    cfg = cfg or EngineConfig(inner_folds=inner_folds, seed=seed)
    scorer = choose_scorer(tabular.prevalence(ds))
    strategy, items = plan_nested_cv(ds, spec.name, outer_splits,
                                     outer_repeats, seed)
    records = run_items(ds, items, scorer, cfg)
    return aggregate(spec.name, strategy, records)


def evaluate_holdout_sweep(spec, ds, test_sizes=DEFAULT_TEST_SIZES,
                           repeats_per_size=10, inner_folds=3, seed=42,
                           cfg=None):
    cfg = cfg or EngineConfig(inner_folds=inner_folds, seed=seed)
    scorer = choose_scorer(tabular.prevalence(ds))
    out = {}
    for ts in test_sizes:
        strategy, items = plan_holdout(ds, spec.name, ts,
                                       repeats_per_size, seed)
        records = run_items(ds, items, scorer, cfg)
        out[strategy] = aggregate(spec.name, strategy, records)
    return out


def evaluate_kfold_sweep(spec, ds, k_range=DEFAULT_K_RANGE, repeats=3,
                         inner_folds=3, seed=42, cfg=None):
    cfg = cfg or EngineConfig(inner_folds=inner_folds, seed=seed)
    scorer = choose_scorer(tabular.prevalence(ds))
    min_class = min(tabular.class_counts(ds))
    out = {}
    for k in k_range:
        strategy = f"Kfold_{k}"
        if min_class < k:
            out[strategy] = aggregate(
                spec.name, strategy, [], skipped=True,
                skip_reason=f"minority class has {min_class} rows, k={k}")
            continue
        strategy, items = plan_kfold(ds, spec.name, k, repeats, seed)
        records = run_items(ds, items, scorer, cfg)
        out[strategy] = aggregate(spec.name, strategy, records)
    return out


def evaluate_repeated_holdout(spec, ds, test_size=0.3,
                              n_repeats_nominal=1000, cap=50, inner_folds=3,
                              seed=42, cfg=None):
    cfg = cfg or EngineConfig(inner_folds=inner_folds, seed=seed)
    scorer = choose_scorer(tabular.prevalence(ds))
    strategy, items = plan_repeated_holdout(ds, spec.name, test_size,
                                            n_repeats_nominal, cap, seed)
    records = run_items(ds, items, scorer, cfg)
    return aggregate(spec.name, strategy, records)


best_strategy_per_model = report.best_strategy_per_model


@dataclass(frozen=True)
class FactorialConfig:
    models: tuple = classifiers.MODEL_NAMES
    test_sizes: tuple = DEFAULT_TEST_SIZES
    holdout_repeats: int = 10
    k_range: tuple = DEFAULT_K_RANGE
    kfold_repeats: int = 3
    nested_outer: int = 5
    nested_repeats: int = 2
    repeated_test_size: float = 0.3
    repeated_nominal: int = 1000
    repeated_cap: int = 50
    engine: EngineConfig = field(default_factory=EngineConfig)


STRATEGY_FAMILIES = ("nested", "holdout", "kfold", "repeated")


def full_factorial(ds, config=None, families=STRATEGY_FAMILIES):
    """All strategies x all requested models; returns (ReportTable, records).

    Per-cell failures are recorded in the evaluation log and the result
    rows; the run continues.  `families` restricts the run to a subset of
    the strategy families (used by the per-family sweep commands).
    """
    config = config or FactorialConfig()
    cfg = config.engine
    scorer = choose_scorer(tabular.prevalence(ds))
    min_class = min(tabular.class_counts(ds))

    plans = []  # (model, strategy, items or None, skip_reason)
    for model in config.models:
        if "nested" in families:
            strategy, items = plan_nested_cv(
                ds, model, config.nested_outer, config.nested_repeats,
                cfg.seed)
            plans.append((model, strategy, items, ""))
        if "holdout" in families:
            for ts in config.test_sizes:
                strategy, items = plan_holdout(
                    ds, model, ts, config.holdout_repeats, cfg.seed)
                plans.append((model, strategy, items, ""))
        if "kfold" in families:
            for k in config.k_range:
                if min_class < k:
                    plans.append((model, f"Kfold_{k}", None,
                                  f"minority class has {min_class} rows, k={k}"))
                    continue
                strategy, items = plan_kfold(
                    ds, model, k, config.kfold_repeats, cfg.seed)
                plans.append((model, strategy, items, ""))
        if "repeated" in families:
            strategy, items = plan_repeated_holdout(
                ds, model, config.repeated_test_size, config.repeated_nominal,
                config.repeated_cap, cfg.seed)
            plans.append((model, strategy, items, ""))

    all_items = [it for _, _, items, _ in plans if items for it in items]
    all_records = run_items(ds, all_items, scorer, cfg)

    rows = []
    records_out = []
    pos = 0
    for model, strategy, items, skip_reason in plans:
        if items is None:
            rows.append(aggregate(model, strategy, [], skipped=True,
                                  skip_reason=skip_reason))
            continue
        records = all_records[pos:pos + len(items)]
        pos += len(items)
        records_out.extend(records)
        rows.append(aggregate(model, strategy, records))

    rt = report.ReportTable(
        rows=rows,
        best_view=report.build_best_view(rows),
        metadata={
            "dataset": ds.name,
            "rows": ds.row_count,
            "features": len(ds.feature_names),
            "prevalence": tabular.prevalence(ds),
            "scorer": scorer.id,
            "seed": cfg.seed,
            "grid": cfg.grid,
        },
    )
    return rt, records_out
