"""Engine behavior: scorer rule, grid search, counts, determinism."""

import math

import numpy as np
import pytest

from valsweep import evaluator, tabular
from valsweep.classifiers import spec_by_name
from valsweep.errors import AllCandidatesFailed
from valsweep.evaluator import (
    EngineConfig,
    FactorialConfig,
    aggregate,
    candidate_grid,
    choose_scorer,
    full_factorial,
    grid_search,
    plan_holdout,
    plan_kfold,
    plan_nested_cv,
    plan_repeated_holdout,
    run_items,
)
from valsweep.synth import make_signal
from valsweep.tabular import Dataset


def dataset_with_prevalence(n, prev, d=4, seed=0):
    rng = np.random.default_rng(seed)
    n1 = int(round(prev * n))
    y = np.zeros(n, dtype=np.int8)
    y[:n1] = 1
    X = rng.normal(size=(n, d)) + y[:, None]
    names = tuple(f"f{j}" for j in range(d))
    return Dataset(feature_names=names,
                   numeric={nm: X[:, j].copy() for j, nm in enumerate(names)},
                   categorical={}, target=y, target_name="y", name="t")


class TestChooseScorer:
    @pytest.mark.parametrize("prev,expected", [
        (0.25, "average_precision"),
        (0.29, "average_precision"),
        (0.30, "roc_auc"),
        (0.31, "roc_auc"),
        (0.50, "roc_auc"),
    ])
    def test_switch(self, prev, expected):
        assert choose_scorer(prev).id == expected


class TestCandidateGrid:
    def test_full_size_small_dataset(self):
        # 10-feature data: numeric select_k values clamp to "all" and dedupe
        grid = candidate_grid(spec_by_name("KNN"), 10)
        assert len(grid) == 2 * 1 * 20

    def test_full_size_wide_dataset(self):
        grid = candidate_grid(spec_by_name("KNN"), 50)
        assert len(grid) == 2 * 4 * 20

    def test_partial_clamp(self):
        grid = candidate_grid(spec_by_name("GaussianNB"), 15)
        select_ks = {c.preprocess.select_k for c in grid}
        assert select_ks == {"all", 10}

    def test_reduced_single_candidate(self):
        grid = candidate_grid(spec_by_name("HistGB"), 10, reduced=True)
        assert len(grid) == 1
        assert grid[0].preprocess.scaler == "standard"
        assert grid[0].preprocess.select_k == "all"

    def test_declaration_order(self):
        grid = candidate_grid(spec_by_name("LogReg"), 50)
        assert grid[0].preprocess.scaler == "standard"
        assert grid[0].preprocess.select_k == "all"
        assert dict(grid[0].model_hp) == {"C": 0.01, "penalty": "l1"}
        assert dict(grid[1].model_hp) == {"C": 0.01, "penalty": "l2"}


class TestGridSearch:
    def test_single_candidate_selected(self):
        ds = dataset_with_prevalence(80, 0.5, seed=1)
        cand, model, fp = grid_search(
            spec_by_name("GaussianNB"), ds, np.arange(80),
            choose_scorer(0.5), 3, seed=42, reduced=True)
        assert dict(cand.model_hp) == {"var_smoothing": 1e-9}

    def test_separable_winner_scores_high(self):
        ds = dataset_with_prevalence(120, 0.5, seed=2)
        for nm in ds.numeric:
            col = ds.numeric[nm].copy()
            col += 5.0 * ds.target  # make classes far apart
            ds.numeric[nm] = col
        cand, model, fp = grid_search(
            spec_by_name("LogReg"), ds, np.arange(120),
            choose_scorer(0.5), 3, seed=42)
        from valsweep import metrics, pipeline
        p = model.predict_proba(pipeline.transform(fp, ds, np.arange(120)))
        assert metrics.roc_auc(ds.target, p) >= 0.99

    def test_infeasible_inner_cv(self):
        ds = dataset_with_prevalence(40, 0.5, seed=3)
        rows = np.concatenate([np.flatnonzero(ds.target == 0)[:10],
                               np.flatnonzero(ds.target == 1)[:1]])
        with pytest.raises(AllCandidatesFailed):
            grid_search(spec_by_name("GaussianNB"), ds, rows,
                        choose_scorer(0.5), 3, seed=42, reduced=True)

    def test_inner_fold_degradation(self):
        # min class 2 in training rows: inner CV degrades to 2 folds
        ds = dataset_with_prevalence(40, 0.5, seed=4)
        rows = np.concatenate([np.flatnonzero(ds.target == 0)[:12],
                               np.flatnonzero(ds.target == 1)[:2]])
        cand, model, fp = grid_search(
            spec_by_name("GaussianNB"), ds, rows,
            choose_scorer(0.5), 3, seed=42, reduced=True)
        assert model is not None


class TestPlans:
    def test_nested_count(self):
        ds = dataset_with_prevalence(60, 0.5)
        _, items = plan_nested_cv(ds, "KNN", 5, 2, 42)
        assert len(items) == 10

    def test_holdout_counts_and_names(self):
        ds = dataset_with_prevalence(60, 0.5)
        strategy, items = plan_holdout(ds, "KNN", 0.1, 10, 42)
        assert strategy == "Holdout_10%"
        assert len(items) == 10

    def test_kfold_items(self):
        ds = dataset_with_prevalence(60, 0.5)
        strategy, items = plan_kfold(ds, "KNN", 5, 3, 42)
        assert strategy == "Kfold_5"
        assert len(items) == 15

    def test_repeated_cap(self):
        ds = dataset_with_prevalence(60, 0.5)
        strategy, items = plan_repeated_holdout(ds, "KNN", 0.3, 1000, 50, 42)
        assert strategy == "Repeated_Holdout_30_70_1000x"
        assert len(items) == 50

    def test_repeated_cap_one(self):
        ds = dataset_with_prevalence(60, 0.5)
        _, items = plan_repeated_holdout(ds, "KNN", 0.3, 1000, 1, 42)
        assert len(items) == 1


class TestRunAndAggregate:
    def engine(self, jobs=1):
        return EngineConfig(inner_folds=3, seed=42, grid="reduced", jobs=jobs)

    def test_jobs_do_not_change_records(self):
        ds = dataset_with_prevalence(60, 0.5, seed=5)
        _, items = plan_holdout(ds, "GaussianNB", 0.3, 6, 42)
        scorer = choose_scorer(0.5)
        seq = run_items(ds, items, scorer, self.engine(jobs=1))
        par = run_items(ds, items, scorer, self.engine(jobs=3))
        assert seq == par

    def test_aggregate_matches_recomputation(self):
        ds = dataset_with_prevalence(70, 0.5, seed=6)
        strategy, items = plan_kfold(ds, "GaussianNB", 4, 2, 42)
        records = run_items(ds, items, choose_scorer(0.5), self.engine())
        res = aggregate("GaussianNB", strategy, records)
        for m in ("roc_auc", "accuracy", "mcc"):
            vals = np.array([r["metrics"][m] for r in records])
            assert abs(res.mean[m] - float(np.nanmean(vals))) <= 1e-12
            assert abs(res.std[m] - float(np.nanstd(vals))) <= 1e-12
        assert res.eval_count == len(items)
        assert res.failure_count == 0

    def test_failure_becomes_nan_record(self):
        ds = dataset_with_prevalence(24, 0.5, seed=7)
        # training rows with a single positive: inner CV infeasible
        item_rows = np.concatenate([np.flatnonzero(ds.target == 0)[:8],
                                    np.flatnonzero(ds.target == 1)[:1]])
        from valsweep.evaluator import WorkItem, _evaluate_item
        item = WorkItem(model="GaussianNB", strategy="Holdout_50%", repeat=0,
                        fold=0, train_rows=item_rows,
                        test_rows=np.arange(20, 24), seed=1)
        rec = _evaluate_item(ds, item, choose_scorer(0.5), self.engine())
        assert rec["failed"]
        assert math.isnan(rec["metrics"]["roc_auc"])
        assert "AllCandidatesFailed" in rec["reason"]


class TestFullFactorial:
    def small_config(self, models, jobs=1):
        return FactorialConfig(
            models=models, test_sizes=(0.2, 0.5), holdout_repeats=2,
            k_range=(2, 3, 12), kfold_repeats=1,
            nested_outer=3, nested_repeats=1, repeated_test_size=0.3,
            repeated_nominal=1000, repeated_cap=3,
            engine=EngineConfig(inner_folds=3, seed=42, grid="reduced",
                                jobs=jobs),
        )

    def test_row_count_and_skips(self):
        ds = dataset_with_prevalence(22, 0.5, seed=8)  # 11 per class
        rt, records = full_factorial(ds, self.small_config(("GaussianNB",)))
        # 1 nested + 2 holdout + 3 kfold + 1 repeated = 7 rows
        assert len(rt.rows) == 7
        skipped = [r for r in rt.rows if r.skipped]
        assert [r.strategy for r in skipped] == ["Kfold_12"]
        assert all(not math.isnan(r.mean["roc_auc"])
                   for r in rt.rows if not r.skipped)

    def test_rows_per_model_scaling(self):
        ds = dataset_with_prevalence(30, 0.5, seed=9)
        rt, _ = full_factorial(
            ds, self.small_config(("GaussianNB", "BernoulliNB")))
        assert len(rt.rows) == 14

    def test_determinism_across_jobs(self):
        ds = dataset_with_prevalence(26, 0.5, seed=10)
        rt1, rec1 = full_factorial(ds, self.small_config(("GaussianNB",), jobs=1))
        rt2, rec2 = full_factorial(ds, self.small_config(("GaussianNB",), jobs=4))
        assert rec1 == rec2
        assert rt1.rows == rt2.rows

    def test_best_view_consistent_with_rows(self):
        from valsweep.report import build_best_view
        ds = dataset_with_prevalence(30, 0.5, seed=11)
        rt, _ = full_factorial(ds, self.small_config(("GaussianNB",)))
        assert build_best_view(rt.rows) == rt.best_view

    def test_metadata_scorer(self):
        ds = dataset_with_prevalence(40, 0.25, seed=12)
        rt, _ = full_factorial(ds, self.small_config(("GaussianNB",)))
        assert rt.metadata["scorer"] == "average_precision"
        assert rt.metadata["prevalence"] == tabular.prevalence(ds)


class TestLeakage:
    def test_grid_search_ignores_non_training_rows(self):
        import copy
        ds = make_signal(100, 5, seed=13)
        train = np.arange(60)
        spec = spec_by_name("LogReg")
        cand1, model1, fp1 = grid_search(spec, ds, train, choose_scorer(0.5),
                                         3, seed=42, reduced=True)
        poisoned = copy.deepcopy(ds)
        for nm in poisoned.numeric:
            col = poisoned.numeric[nm].copy()
            col[60:] = -999.0
            poisoned.numeric[nm] = col
        cand2, model2, fp2 = grid_search(spec, poisoned, train,
                                         choose_scorer(0.5), 3, seed=42,
                                         reduced=True)
        assert cand1 == cand2
        assert np.array_equal(model1.w, model2.w)
        assert model1.b == model2.b
        assert fp1.numeric_stats == fp2.numeric_stats
