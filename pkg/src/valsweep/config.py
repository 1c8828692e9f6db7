"""Run configuration: defaults, INI round trip, and digesting."""

import configparser
import hashlib
import io
from dataclasses import dataclass, replace

from .classifiers import MODEL_NAMES
from .errors import ConfigError
from .evaluator import DEFAULT_K_RANGE, DEFAULT_TEST_SIZES


@dataclass(frozen=True)
class RunConfig:
    data: str = ""
    target: str = ""
    models: tuple = MODEL_NAMES
    test_sizes: tuple = DEFAULT_TEST_SIZES
    k_range: tuple = DEFAULT_K_RANGE
    kfold_repeats: int = 3
    holdout_repeats: int = 10
    repeated_nominal: int = 1000
    repeated_cap: int = 50
    repeated_test_size: float = 0.3
    nested_outer: int = 5
    nested_repeats: int = 2
    inner_folds: int = 3
    seed: int = 42
    grid: str = "full"
    jobs: int = 1
    out_dir: str = "valsweep-out"

    def validate(self):
        for ts in list(self.test_sizes) + [self.repeated_test_size]:
            if not 0.0 < ts < 1.0:
                raise ConfigError(f"test size {ts} not in (0, 1)")
        for k in self.k_range:
            if not 2 <= k <= 50:
                raise ConfigError(f"k={k} outside [2, 50]")
        for name, v in (("kfold_repeats", self.kfold_repeats),
                        ("holdout_repeats", self.holdout_repeats),
                        ("repeated_nominal", self.repeated_nominal),
                        ("repeated_cap", self.repeated_cap),
                        ("nested_outer", self.nested_outer),
                        ("nested_repeats", self.nested_repeats),
                        ("inner_folds", self.inner_folds),
                        ("jobs", self.jobs)):
            if v < 1:
                raise ConfigError(f"{name} must be >= 1, got {v}")
        if self.grid not in ("full", "reduced"):
            raise ConfigError(f"grid must be full or reduced, got {self.grid!r}")
        unknown = set(self.models) - set(MODEL_NAMES)
        if unknown:
            raise ConfigError(f"unknown models: {sorted(unknown)}")
        return self


def dump_config(cfg):
    """Serialize to an INI document (text)."""
    cp = configparser.ConfigParser()
    cp["data"] = {"path": cfg.data, "target": cfg.target}
    cp["strategies"] = {
        "test_sizes": ",".join(repr(t) for t in cfg.test_sizes),
        "k_range": ",".join(str(k) for k in cfg.k_range),
        "kfold_repeats": str(cfg.kfold_repeats),
        "holdout_repeats": str(cfg.holdout_repeats),
        "repeated_nominal": str(cfg.repeated_nominal),
        "repeated_cap": str(cfg.repeated_cap),
        "repeated_test_size": repr(cfg.repeated_test_size),
        "nested_outer": str(cfg.nested_outer),
        "nested_repeats": str(cfg.nested_repeats),
        "inner_folds": str(cfg.inner_folds),
    }
    cp["run"] = {
        "models": ",".join(cfg.models),
        "seed": str(cfg.seed),
        "grid": cfg.grid,
        "jobs": str(cfg.jobs),
        "out_dir": cfg.out_dir,
    }
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def load_config(text, base=None):
    """Parse an INI document over the given base config."""
    cfg = base or RunConfig()
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    try:
        if cp.has_section("data"):
            cfg = replace(cfg, data=cp["data"].get("path", cfg.data),
                          target=cp["data"].get("target", cfg.target))
        if cp.has_section("strategies"):
            s = cp["strategies"]
            cfg = replace(
                cfg,
                test_sizes=tuple(float(t) for t in s.get(
                    "test_sizes", ",".join(map(repr, cfg.test_sizes))).split(",")),
                k_range=tuple(int(k) for k in s.get(
                    "k_range", ",".join(map(str, cfg.k_range))).split(",")),
                kfold_repeats=s.getint("kfold_repeats", cfg.kfold_repeats),
                holdout_repeats=s.getint("holdout_repeats", cfg.holdout_repeats),
                repeated_nominal=s.getint("repeated_nominal", cfg.repeated_nominal),
                repeated_cap=s.getint("repeated_cap", cfg.repeated_cap),
                repeated_test_size=s.getfloat("repeated_test_size",
                                              cfg.repeated_test_size),
                nested_outer=s.getint("nested_outer", cfg.nested_outer),
                nested_repeats=s.getint("nested_repeats", cfg.nested_repeats),
                inner_folds=s.getint("inner_folds", cfg.inner_folds),
            )
        if cp.has_section("run"):
            r = cp["run"]
            cfg = replace(
                cfg,
                models=tuple(r.get("models", ",".join(cfg.models)).split(",")),
                seed=r.getint("seed", cfg.seed),
                grid=r.get("grid", cfg.grid),
                jobs=r.getint("jobs", cfg.jobs),
                out_dir=r.get("out_dir", cfg.out_dir),
            )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def config_digest(cfg):
    return hashlib.sha256(dump_config(cfg).encode()).hexdigest()[:16]

