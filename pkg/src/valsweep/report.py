"""Result tables: per-strategy rows, best-strategy view, and rendering.

Markdown shows "mean ± std" at 3 decimals in the summary and
"score (strategy)" cells in the best view.  CSV/JSON carry full
precision.  NaN renders as "NA" in csv/markdown and null in json.
"""

import csv
import io
import json
import math
import re
from dataclasses import asdict, dataclass, field

from .errors import MissingArtifacts, UnknownFormat
from .metrics import METRIC_NAMES

BEST_METRICS = ("accuracy", "roc_auc", "pr_auc", "f1", "mcc")
BEST_MARKDOWN_COLUMNS = ("roc_auc", "accuracy", "f1", "mcc")
_METRIC_LABELS = {
    "accuracy": "Accuracy", "roc_auc": "ROC-AUC", "pr_auc": "PR-AUC",
    "f1": "F1-Score", "mcc": "MCC", "brier": "Brier",
}


@dataclass(frozen=True)
class StrategyResult:
    model: str
    strategy: str
    mean: dict
    std: dict
    eval_count: int
    failure_count: int
    skipped: bool = False
    skip_reason: str = ""


@dataclass
class ReportTable:
    rows: list                       # StrategyResult, canonical order
    best_view: dict                  # model -> metric -> {strategy, score}
    metadata: dict = field(default_factory=dict)


def best_strategy_per_model(results):
    """Argmax of the mean score per metric over one model's strategies.

    NaN means are skipped; ties keep the earliest strategy in the given
    (canonical) order.  A metric with no non-NaN result is omitted.
    """
    best = {}
    for metric in BEST_METRICS:
        best_score = -math.inf
        best_strategy = None
        for r in results:
            score = r.mean.get(metric, float("nan"))
            if not math.isnan(score) and score > best_score:
                best_score = score
                best_strategy = r.strategy
        if best_strategy is not None:
            best[metric] = {"strategy": best_strategy, "score": best_score}
    return best


def build_best_view(rows):
    by_model = {}
    for r in rows:
        by_model.setdefault(r.model, []).append(r)
    return {model: best_strategy_per_model(rs) for model, rs in by_model.items()}


def strategy_display_name(strategy):
    """Map canonical ids to the tables' display names."""
    m = re.fullmatch(r"Kfold_(\d+)", strategy)
    if m:
        return f"k={m.group(1)}"
    m = re.fullmatch(r"Holdout_(\d+)%", strategy)
    if m:
        return f"Holdout {m.group(1)}%"
    if strategy.startswith("Nested_CV"):
        return "Nested CV"
    if strategy.startswith("Repeated_Holdout"):
        m = re.fullmatch(r"Repeated_Holdout_(\d+)_(\d+)_\d+x", strategy)
        if m:
            return f"Repeated Holdout {m.group(2)}/{m.group(1)}"
        return "Repeated Holdout"
    return strategy


def _fmt_cell(mean, std):
    if math.isnan(mean):
        return "NA"
    return f"{mean:.3f} ± {std:.3f}"


def _fmt_full(x):
    return "NA" if isinstance(x, float) and math.isnan(x) else repr(float(x))


def render_summary(rt, format):
    """Full per-(model, strategy) results matrix as document bytes."""
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["model", "strategy"]
        for m in METRIC_NAMES:
            header += [f"{m}_mean", f"{m}_std"]
        header += ["eval_count", "failure_count", "skipped", "skip_reason"]
        writer.writerow(header)
        for r in rt.rows:
            row = [r.model, r.strategy]
            for m in METRIC_NAMES:
                row += [_fmt_full(r.mean.get(m, float("nan"))),
                        _fmt_full(r.std.get(m, float("nan")))]
            row += [r.eval_count, r.failure_count,
                    int(r.skipped), r.skip_reason]
            writer.writerow(row)
        return buf.getvalue().encode()
    if format == "json":
        doc = {
            "metadata": rt.metadata,
            "rows": [asdict(r) for r in rt.rows],
        }
        return json.dumps(_json_clean(doc), indent=2).encode()
    if format == "markdown":
        lines = ["| Model | Strategy | " + " | ".join(
            _METRIC_LABELS[m] for m in METRIC_NAMES) + " |"]
        lines.append("|" + "---|" * (2 + len(METRIC_NAMES)))
        for r in rt.rows:
            cells = [r.model, strategy_display_name(r.strategy)]
            cells += [_fmt_cell(r.mean.get(m, float("nan")),
                                r.std.get(m, float("nan")))
                      for m in METRIC_NAMES]
            lines.append("| " + " | ".join(cells) + " |")
        return ("\n".join(lines) + "\n").encode()
    raise UnknownFormat(f"unknown format {format!r}")


def _json_clean(obj):
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_clean(v) for v in obj]
    return obj


def render_best_view(rt, format):
    """Best strategy per model per metric as document bytes.

    Markdown shows four metric columns; json and csv include all five
    best-view metrics.
    """
    if format == "json":
        return (json.dumps(_json_clean({"metadata": rt.metadata,
                                        "best_view": rt.best_view}),
                           indent=2).encode())
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["model", "metric", "strategy", "score"])
        for model, metrics in rt.best_view.items():
            for metric in BEST_METRICS:
                if metric in metrics:
                    writer.writerow([model, metric,
                                     metrics[metric]["strategy"],
                                     _fmt_full(metrics[metric]["score"])])
        return buf.getvalue().encode()
    if format == "markdown":
        header = "| Model | " + " | ".join(
            f"Best {_METRIC_LABELS[m]} (Strategy)" for m in BEST_MARKDOWN_COLUMNS
        ) + " |"
        lines = [header, "|" + "---|" * (1 + len(BEST_MARKDOWN_COLUMNS))]
        for model, metrics in rt.best_view.items():
            cells = [model]
            for metric in BEST_MARKDOWN_COLUMNS:
                if metric in metrics:
                    entry = metrics[metric]
                    cells.append(
                        f"{entry['score']:.3f} "
                        f"({strategy_display_name(entry['strategy'])})"
                    )
                else:
                    cells.append("NA")
            lines.append("| " + " | ".join(cells) + " |")
        return ("\n".join(lines) + "\n").encode()
    raise UnknownFormat(f"unknown format {format!r}")


def parse_summary_csv(data):
    """Inverse of render_summary(..., "csv"): full-precision round trip."""
    rows = []
    reader = csv.DictReader(io.StringIO(data.decode()))
    for rec in reader:
        mean = {}
        std = {}
        for m in METRIC_NAMES:
            mean[m] = float("nan") if rec[f"{m}_mean"] == "NA" else float(rec[f"{m}_mean"])
            std[m] = float("nan") if rec[f"{m}_std"] == "NA" else float(rec[f"{m}_std"])
        rows.append(StrategyResult(
            model=rec["model"], strategy=rec["strategy"], mean=mean, std=std,
            eval_count=int(rec["eval_count"]),
            failure_count=int(rec["failure_count"]),
            skipped=bool(int(rec["skipped"])), skip_reason=rec["skip_reason"],
        ))
    return rows


def write_reports(rt, records, out_dir):
    """Write summary.csv/json, best.md/json, and evals.log to a directory."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "summary.csv"), "wb") as fh:
        fh.write(render_summary(rt, "csv"))
    with open(os.path.join(out_dir, "summary.json"), "wb") as fh:
        fh.write(render_summary(rt, "json"))
    with open(os.path.join(out_dir, "best.md"), "wb") as fh:
        fh.write(render_best_view(rt, "markdown"))
    with open(os.path.join(out_dir, "best.json"), "wb") as fh:
        fh.write(render_best_view(rt, "json"))
    with open(os.path.join(out_dir, "evals.log"), "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(_json_clean(rec)) + "\n")


def read_records(log_path):
    """Parse evals.log (JSON lines); a corrupt line raises with its number."""
    records = []
    with open(log_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                rec["metrics"] = {
                    k: (float("nan") if v is None else float(v))
                    for k, v in rec["metrics"].items()
                }
            except (ValueError, KeyError, TypeError) as exc:
                raise MissingArtifacts(
                    f"{log_path}: corrupt record at line {lineno}: {exc}"
                ) from exc
            records.append(rec)
    return records


def reconstruct_table(out_dir):
    """Rebuild a ReportTable from persisted run artifacts.

    Row aggregates are recomputed from evals.log; row order, skipped
    entries, and metadata come from summary.json when present.
    """
    import os

    from .evaluator import aggregate

    log_path = os.path.join(out_dir, "evals.log")
    if not os.path.exists(log_path):
        raise MissingArtifacts(f"{log_path} not found")
    records = read_records(log_path)

    grouped = {}
    order = []
    for rec in records:
        key = (rec["model"], rec["strategy"])
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append(rec)

    metadata = {}
    skipped_rows = {}
    summary_path = os.path.join(out_dir, "summary.json")
    if os.path.exists(summary_path):
        with open(summary_path, encoding="utf-8") as fh:
            doc = json.load(fh)
        metadata = doc.get("metadata", {})
        order = []
        for row in doc.get("rows", []):
            key = (row["model"], row["strategy"])
            order.append(key)
            if row.get("skipped"):
                skipped_rows[key] = StrategyResult(
                    model=row["model"], strategy=row["strategy"],
                    mean={k: (float("nan") if v is None else v)
                          for k, v in row["mean"].items()},
                    std={k: (float("nan") if v is None else v)
                         for k, v in row["std"].items()},
                    eval_count=row["eval_count"],
                    failure_count=row["failure_count"],
                    skipped=True, skip_reason=row.get("skip_reason", ""),
                )

    rows = []
    for key in order:
        if key in skipped_rows:
            rows.append(skipped_rows[key])
        else:
            rows.append(aggregate(key[0], key[1], grouped.get(key, [])))
    return ReportTable(rows=rows, best_view=build_best_view(rows),
                       metadata=metadata), records
