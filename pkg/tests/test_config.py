"""RunConfig defaults, validation, INI round trip, and digest."""

import pytest

from valsweep.config import RunConfig, config_digest, dump_config, load_config
from valsweep.errors import ConfigError


class TestDefaults:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.test_sizes == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
        assert cfg.k_range == tuple(range(2, 16))
        assert cfg.kfold_repeats == 3
        assert cfg.holdout_repeats == 10
        assert (cfg.repeated_nominal, cfg.repeated_cap) == (1000, 50)
        assert (cfg.nested_outer, cfg.nested_repeats, cfg.inner_folds) == (5, 2, 3)
        assert cfg.seed == 42
        assert len(cfg.models) == 7

    def test_validate_ok(self):
        assert RunConfig().validate() is not None


class TestValidation:
    def test_bad_fraction(self):
        with pytest.raises(ConfigError):
            RunConfig(test_sizes=(0.5, 1.0)).validate()

    def test_bad_k(self):
        with pytest.raises(ConfigError):
            RunConfig(k_range=(1, 5)).validate()

    def test_bad_count(self):
        with pytest.raises(ConfigError):
            RunConfig(inner_folds=0).validate()

    def test_bad_grid(self):
        with pytest.raises(ConfigError):
            RunConfig(grid="medium").validate()

    def test_unknown_model(self):
        with pytest.raises(ConfigError):
            RunConfig(models=("KNN", "XGBoost")).validate()


class TestRoundTrip:
    def test_dump_load_equal(self):
        cfg = RunConfig(data="x.csv", target="y", models=("KNN", "LogReg"),
                        test_sizes=(0.15, 0.35), k_range=(2, 3, 4),
                        seed=7, grid="reduced", jobs=3, out_dir="o")
        assert load_config(dump_config(cfg)) == cfg

    def test_partial_file_keeps_defaults(self):
        cfg = load_config("[run]\nseed = 9\n")
        assert cfg.seed == 9
        assert cfg.k_range == RunConfig().k_range

    def test_malformed_ini(self):
        with pytest.raises(ConfigError):
            load_config("not an ini file [")

    def test_bad_value_type(self):
        with pytest.raises(ConfigError):
            load_config("[run]\nseed = forty-two\n")


class TestDigest:
    def test_stable_and_distinct(self):
        a = config_digest(RunConfig())
        assert a == config_digest(RunConfig())
        assert a != config_digest(RunConfig(seed=43))
        assert len(a) == 16
