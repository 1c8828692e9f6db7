"""Command-line interface.

Subcommands: `run` (full factorial), `sweep` (one strategy family),
`report` (re-render from persisted artifacts).  Exit codes: 0 ok,
2 config error, 3 data error, 4 run failure.
"""

import dataclasses
import os
import sys

import click

from . import evaluator, report, tabular
from .classifiers import MODEL_NAMES
from .config import RunConfig, config_digest, dump_config, load_config
from .errors import (
    ConfigError,
    FileUnreadable,
    MissingArtifacts,
    MissingTargetColumn,
    NonBinaryTarget,
    SingleClassTarget,
    ValsweepError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUN = 4

OUT_DIR_ENV = "VALSWEEP_OUT"

_DATA_ERRORS = (FileUnreadable, MissingTargetColumn, NonBinaryTarget,
                SingleClassTarget)


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_float_list(text):
    return tuple(float(t) for t in text.split(",") if t.strip())


def _parse_k_range(text):
    """Accept "2..15" or an explicit comma list "2,5,10"."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(t) for t in text.split(",") if t.strip())


# flag name -> (RunConfig field, parser)
_OVERRIDES = (
    ("data", "data", str),
    ("target", "target", str),
    ("models", "models", lambda s: tuple(m.strip() for m in s.split(","))),
    ("test_sizes", "test_sizes", _parse_float_list),
    ("k", "k_range", _parse_k_range),
    ("kfold_repeats", "kfold_repeats", int),
    ("holdout_repeats", "holdout_repeats", int),
    ("repeated_nominal", "repeated_nominal", int),
    ("repeated_cap", "repeated_cap", int),
    ("repeated_test_size", "repeated_test_size", float),
    ("nested_outer", "nested_outer", int),
    ("nested_repeats", "nested_repeats", int),
    ("inner_folds", "inner_folds", int),
    ("seed", "seed", int),
    ("grid", "grid", str),
    ("jobs", "jobs", int),
    ("out", "out_dir", str),
)


def _config_options(fn):
    """Shared run/sweep flags; None means "not given" so the config file
    and built-in defaults stay authoritative."""
    opts = [
        click.option("--data", default=None, help="Input CSV path."),
        click.option("--target", default=None, help="Target column name."),
        click.option("--models", default=None,
                     help=f"Comma list from: {', '.join(MODEL_NAMES)}."),
        click.option("--test-sizes", "test_sizes", default=None,
                     help="Holdout test fractions, e.g. 0.1,0.2,0.3."),
        click.option("--k", default=None,
                     help="k-fold range, e.g. 2..15 or 2,5,10."),
        click.option("--kfold-repeats", "kfold_repeats", type=int, default=None),
        click.option("--holdout-repeats", "holdout_repeats", type=int,
                     default=None),
        click.option("--repeated-nominal", "repeated_nominal", type=int,
                     default=None),
        click.option("--repeated-cap", "repeated_cap", type=int, default=None),
        click.option("--repeated-test-size", "repeated_test_size", type=float,
                     default=None),
        click.option("--nested-outer", "nested_outer", type=int, default=None),
        click.option("--nested-repeats", "nested_repeats", type=int,
                     default=None),
        click.option("--inner-folds", "inner_folds", type=int, default=None),
        click.option("--seed", type=int, default=None),
        click.option("--grid", type=click.Choice(["full", "reduced"]),
                     default=None),
        click.option("--jobs", type=int, default=None,
                     help="Worker processes (output is identical for any N)."),
        click.option("--out", default=None,
                     help=f"Output directory (default ${OUT_DIR_ENV} or "
                          "valsweep-out)."),
        click.option("--config", "config_path", default=None,
                     help="Config file; flags override its values."),
        click.option("--dump-config", "dump_config_path", default=None,
                     help="Write the effective config to FILE and exit."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _build_config(kwargs):
    """defaults < $VALSWEEP_OUT < config file < flags."""
    cfg = RunConfig()
    env_out = os.environ.get(OUT_DIR_ENV)
    if env_out:
        cfg = dataclasses.replace(cfg, out_dir=env_out)
    path = kwargs.get("config_path")
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = load_config(fh.read(), base=cfg)
        except OSError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    updates = {}
    for flag, field, parse in _OVERRIDES:
        value = kwargs.get(flag)
        if value is not None:
            try:
                updates[field] = parse(value)
            except ValueError as exc:
                raise ConfigError(f"--{flag.replace('_', '-')}: {exc}") from exc
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
    return cfg.validate()


def _load_dataset(cfg):
    if not cfg.data:
        _fail(EXIT_CONFIG, "no input dataset: pass --data or set [data] path")
    if not cfg.target:
        _fail(EXIT_CONFIG, "no target column: pass --target or set [data] target")
    return tabular.load_csv(cfg.data, cfg.target)


def _factorial_config(cfg):
    return evaluator.FactorialConfig(
        models=cfg.models,
        test_sizes=cfg.test_sizes,
        holdout_repeats=cfg.holdout_repeats,
        k_range=cfg.k_range,
        kfold_repeats=cfg.kfold_repeats,
        nested_outer=cfg.nested_outer,
        nested_repeats=cfg.nested_repeats,
        repeated_test_size=cfg.repeated_test_size,
        repeated_nominal=cfg.repeated_nominal,
        repeated_cap=cfg.repeated_cap,
        engine=evaluator.EngineConfig(
            inner_folds=cfg.inner_folds, seed=cfg.seed, grid=cfg.grid,
            jobs=cfg.jobs,
        ),
    )


def _execute(cfg, families):
    """Shared body of `run` and `sweep`: evaluate, write, print, exit."""
    try:
        ds = _load_dataset(cfg)
    except _DATA_ERRORS as exc:
        _fail(EXIT_DATA, str(exc))
    try:
        rt, records = evaluator.full_factorial(
            ds, _factorial_config(cfg), families=families)
    except ValsweepError as exc:
        _fail(EXIT_RUN, str(exc))
    rt.metadata["config_digest"] = config_digest(cfg)
    report.write_reports(rt, records, cfg.out_dir)

    click.echo(render_run_output(rt))
    click.echo(f"\nreports written to {cfg.out_dir}/")
    hard_failures = [r for r in rt.rows
                     if not r.skipped and r.eval_count == 0]
    if hard_failures:
        for r in hard_failures:
            click.echo(f"error: {r.model} / {r.strategy}: "
                       "no evaluation succeeded", err=True)
        sys.exit(EXIT_RUN)
    sys.exit(EXIT_OK)


def render_run_output(rt):
    """Best-view markdown plus a skipped-strategy section when relevant."""
    out = report.render_best_view(rt, "markdown").decode().rstrip("\n")
    skipped = [r for r in rt.rows if r.skipped]
    if skipped:
        out += "\n\nskipped:\n"
        out += "\n".join(f"  {r.model} / {r.strategy}: {r.skip_reason}"
                         for r in skipped)
    return out


@click.group()
def main():
    """Compare data-partitioning strategies across reference classifiers."""


def _maybe_dump_config(cfg, dump_path):
    if dump_path:
        with open(dump_path, "w", encoding="utf-8") as fh:
            fh.write(dump_config(cfg))
        click.echo(f"config written to {dump_path}")
        sys.exit(EXIT_OK)


@main.command("run")
@_config_options
def cmd_run(dump_config_path, **kwargs):
    """Run every strategy for every model and write all reports."""
    try:
        cfg = _build_config(kwargs)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    _maybe_dump_config(cfg, dump_config_path)
    _execute(cfg, evaluator.STRATEGY_FAMILIES)


@main.command("sweep")
@click.argument("which",
                type=click.Choice(["holdout", "kfold", "nested", "repeated"]))
@click.option("--sizes", default=None,
              help="Holdout test fractions (alias of --test-sizes).")
@_config_options
def cmd_sweep(which, sizes, dump_config_path, **kwargs):
    """Run a single strategy family (holdout, kfold, nested, repeated)."""
    if sizes is not None:
        kwargs["test_sizes"] = sizes
    try:
        cfg = _build_config(kwargs)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    _maybe_dump_config(cfg, dump_config_path)
    _execute(cfg, (which,))


@main.command("report")
@click.option("--out", default=None,
              help=f"Artifact directory of a prior run (default ${OUT_DIR_ENV} "
                   "or valsweep-out).")
@click.option("--format", "format_", default="all",
              type=click.Choice(["all", "json", "markdown", "csv"]),
              help="json re-renders best.json only; markdown/csv print to "
                   "stdout; all rewrites every report file.")
def cmd_report(out, format_):
    """Re-render reports from a prior run's evals.log without re-running."""
    out_dir = out or os.environ.get(OUT_DIR_ENV) or "valsweep-out"
    try:
        rt, records = report.reconstruct_table(out_dir)
    except MissingArtifacts as exc:
        _fail(EXIT_DATA, str(exc))
    if format_ == "json":
        path = os.path.join(out_dir, "best.json")
        with open(path, "wb") as fh:
            fh.write(report.render_best_view(rt, "json"))
        click.echo(f"wrote {path}")
    elif format_ in ("markdown", "csv"):
        click.echo(report.render_summary(rt, format_).decode())
    else:
        report.write_reports(rt, records, out_dir)
        click.echo(render_run_output(rt))
        click.echo(f"\nreports rewritten in {out_dir}/")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
