"""End-to-end CLI flows via the click test runner."""

import json

import pytest
from click.testing import CliRunner

from valsweep import synth, tabular
from valsweep.cli import main
from valsweep.config import RunConfig, load_config

FAST = [
    "--grid", "reduced", "--models", "GaussianNB",
    "--test-sizes", "0.2,0.5", "--k", "2,3", "--kfold-repeats", "1",
    "--holdout-repeats", "2", "--repeated-cap", "2", "--nested-outer", "3",
    "--nested-repeats", "1",
]


@pytest.fixture(scope="module")
def data_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "sig.csv"
    tabular.save_csv(synth.make_signal(80, 5, seed=11), str(path))
    return str(path)


def run_cli(args, env=None):
    return CliRunner().invoke(main, args, env=env, catch_exceptions=False)


class TestRun:
    def test_full_flow(self, data_csv, tmp_path):
        out = str(tmp_path / "out")
        r = run_cli(["run", "--data", data_csv, "--target", "target",
                     "--out", out, *FAST])
        assert r.exit_code == 0
        assert "Best ROC-AUC (Strategy)" in r.output
        for f in ("summary.csv", "summary.json", "best.md", "best.json",
                  "evals.log"):
            assert (tmp_path / "out" / f).exists()

    def test_row_count_scales_with_models(self, data_csv, tmp_path):
        out = str(tmp_path / "out")
        args = ["run", "--data", data_csv, "--target", "target", "--out", out,
                *FAST]
        args[args.index("GaussianNB")] = "GaussianNB,BernoulliNB"
        r = run_cli(args)
        assert r.exit_code == 0
        lines = (tmp_path / "out" / "summary.csv").read_text().splitlines()
        # 2 models x (1 nested + 2 holdout + 2 kfold + 1 repeated) rows
        assert len(lines) - 1 == 12

    def test_missing_target_column(self, data_csv, tmp_path):
        r = run_cli(["run", "--data", data_csv, "--target", "label",
                     "--out", str(tmp_path / "o"), *FAST])
        assert r.exit_code == 3
        assert "label" in r.output

    def test_missing_file(self, tmp_path):
        r = run_cli(["run", "--data", "/no/file.csv", "--target", "y",
                     "--out", str(tmp_path / "o")])
        assert r.exit_code == 3

    def test_config_error(self, data_csv):
        r = run_cli(["run", "--data", data_csv, "--target", "target",
                     "--k", "1,5"])
        assert r.exit_code == 2

    def test_no_data_flag(self):
        r = run_cli(["run"])
        assert r.exit_code == 2

    def test_env_var_default_out(self, data_csv, tmp_path):
        out = str(tmp_path / "envout")
        r = run_cli(["run", "--data", data_csv, "--target", "target", *FAST],
                    env={"VALSWEEP_OUT": out})
        assert r.exit_code == 0
        assert (tmp_path / "envout" / "summary.csv").exists()

    def test_dump_config_round_trip(self, data_csv, tmp_path):
        cfg_path = str(tmp_path / "run.ini")
        r = run_cli(["run", "--data", data_csv, "--target", "target",
                     "--seed", "7", "--grid", "reduced",
                     "--dump-config", cfg_path])
        assert r.exit_code == 0
        cfg = load_config(open(cfg_path).read())
        assert cfg.seed == 7
        assert cfg.grid == "reduced"
        assert cfg.data == data_csv
        # defaults preserved for everything not flagged
        assert cfg.k_range == RunConfig().k_range

    def test_config_file_with_flag_override(self, data_csv, tmp_path):
        cfg_path = tmp_path / "base.ini"
        cfg_path.write_text(f"[data]\npath = {data_csv}\ntarget = target\n"
                            "[run]\nseed = 5\ngrid = reduced\n")
        dump = str(tmp_path / "eff.ini")
        r = run_cli(["run", "--config", str(cfg_path), "--seed", "9",
                     "--dump-config", dump])
        assert r.exit_code == 0
        cfg = load_config(open(dump).read())
        assert cfg.seed == 9          # flag wins
        assert cfg.grid == "reduced"  # file value kept


class TestSweep:
    def test_holdout_sizes(self, data_csv, tmp_path):
        out = str(tmp_path / "o")
        r = run_cli(["sweep", "holdout", "--data", data_csv, "--target",
                     "target", "--sizes", "0.1,0.9", "--out", out, *FAST])
        assert r.exit_code == 0
        lines = (tmp_path / "o" / "summary.csv").read_text().splitlines()
        strategies = {line.split(",")[1] for line in lines[1:]}
        assert strategies == {"Holdout_10%", "Holdout_90%"}

    def test_kfold_skips_listed_exit_zero(self, tmp_path):
        # 80 rows at prevalence 0.1 -> minority 8: k in 9..15 infeasible
        import numpy as np
        from valsweep.tabular import Dataset, save_csv
        rng = np.random.default_rng(0)
        y = np.zeros(80, dtype=np.int8)
        y[:8] = 1
        ds = Dataset(feature_names=("a", "b"),
                     numeric={"a": rng.normal(size=80) + y,
                              "b": rng.normal(size=80)},
                     categorical={}, target=y, target_name="y")
        path = str(tmp_path / "imb.csv")
        save_csv(ds, path)
        out = str(tmp_path / "o")
        r = run_cli(["sweep", "kfold", "--data", path, "--target", "y",
                     "--k", "2..15", "--kfold-repeats", "1", "--grid",
                     "reduced", "--models", "GaussianNB", "--out", out])
        assert r.exit_code == 0
        assert "skipped:" in r.output
        assert "Kfold_9" in r.output and "Kfold_15" in r.output

    def test_kfold_full_range_strategy_count(self, data_csv, tmp_path):
        out = str(tmp_path / "o")
        r = run_cli(["sweep", "kfold", "--data", data_csv, "--target",
                     "target", "--k", "2..15", "--kfold-repeats", "1",
                     "--grid", "reduced", "--models", "GaussianNB",
                     "--out", out])
        assert r.exit_code == 0
        lines = (tmp_path / "o" / "summary.csv").read_text().splitlines()
        assert len(lines) - 1 == 14


class TestReport:
    def test_rerender_byte_identical(self, data_csv, tmp_path):
        out = str(tmp_path / "o")
        r = run_cli(["run", "--data", data_csv, "--target", "target",
                     "--out", out, *FAST])
        assert r.exit_code == 0
        before = {f: (tmp_path / "o" / f).read_bytes()
                  for f in ("summary.csv", "best.md", "best.json")}
        r = run_cli(["report", "--out", out])
        assert r.exit_code == 0
        for f, data in before.items():
            assert (tmp_path / "o" / f).read_bytes() == data

    def test_format_json_only(self, data_csv, tmp_path):
        out = str(tmp_path / "o")
        assert run_cli(["run", "--data", data_csv, "--target", "target",
                        "--out", out, *FAST]).exit_code == 0
        (tmp_path / "o" / "best.json").unlink()
        r = run_cli(["report", "--out", out, "--format", "json"])
        assert r.exit_code == 0
        doc = json.loads((tmp_path / "o" / "best.json").read_text())
        assert "best_view" in doc

    def test_corrupt_log(self, data_csv, tmp_path):
        out = str(tmp_path / "o")
        assert run_cli(["run", "--data", data_csv, "--target", "target",
                        "--out", out, *FAST]).exit_code == 0
        log = tmp_path / "o" / "evals.log"
        lines = log.read_text().splitlines()
        lines[1] = "{broken"
        log.write_text("\n".join(lines) + "\n")
        r = run_cli(["report", "--out", out])
        assert r.exit_code != 0
        assert "line 2" in r.output

    def test_missing_artifacts(self, tmp_path):
        r = run_cli(["report", "--out", str(tmp_path / "nothing")])
        assert r.exit_code != 0
