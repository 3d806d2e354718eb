"""CSV exports and companion figures for analysis results.

Column orders are fixed and documented in the README; numeric columns keep
full precision, with an extra two-decimal presentation column for r and for
predictions. Output rows are canonically sorted so two runs over the same
data produce byte-identical files.
"""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import AnalysisResult
from .model import (
    DURATION_KINDS,
    IndicatorValue,
    KIND_ORDER,
    format_unit,
    likert_to_unit,
)
from .stats import AggregateRow, CorrelationRecord, InterestPrediction

INDICATORS_HEADER = ["user_id", "session_id", "page_id", "fragment_id", "kind", "value"]
CORRELATIONS_HEADER = ["user_id", "kind", "page_class", "r", "p", "n", "r_2dp"]
AGGREGATE_HEADER = [
    "kind",
    "page_class",
    "n_significant",
    "mean_r",
    "mean_r_2dp",
    "r_lt_0_2",
    "r_lt_0_4",
    "r_lt_0_6",
    "r_lt_0_8",
    "r_ge_0_8",
]
PREDICTIONS_HEADER = ["user_id", "content_id", "predicted", "predicted_2dp", "terms_used"]

REPORT_KINDS = ("indicators", "correlations", "aggregate", "predictions")


def _fmt_value(value: float, kind) -> str:
    if kind in DURATION_KINDS:
        return str(float(value))
    return str(int(value))


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_indicators_csv(values: list[IndicatorValue], path: str | Path) -> Path:
    rows = [
        [v.user_id, v.session_id, v.page_id, v.fragment_id, v.kind.value, _fmt_value(v.value, v.kind)]
        for v in sorted(
            values, key=lambda v: (v.user_id, v.session_id, v.page_id, v.fragment_id, KIND_ORDER[v.kind])
        )
    ]
    path = Path(path)
    _write_csv(path, INDICATORS_HEADER, rows)
    return path


def write_correlations_csv(records: list[CorrelationRecord], path: str | Path) -> Path:
    rows = [
        [r.user_id, r.kind.value, r.page_class.value, str(r.r), str(r.p), str(r.n), format_unit(r.r)]
        for r in sorted(records, key=lambda r: (r.user_id, KIND_ORDER[r.kind], r.page_class.value))
    ]
    path = Path(path)
    _write_csv(path, CORRELATIONS_HEADER, rows)
    return path


def write_aggregate_csv(rows_in: list[AggregateRow], path: str | Path) -> Path:
    rows = [
        [
            row.kind.value,
            row.page_class.value,
            str(row.n_significant),
            str(row.mean_r),
            format_unit(row.mean_r),
            *[str(b) for b in row.buckets],
        ]
        for row in sorted(rows_in, key=lambda r: (KIND_ORDER[r.kind], r.page_class.value))
    ]
    path = Path(path)
    _write_csv(path, AGGREGATE_HEADER, rows)
    return path


def write_predictions_csv(predictions: list[InterestPrediction], path: str | Path) -> Path:
    rows = [
        [p.user_id, p.content_id, str(p.predicted), format_unit(p.predicted), str(p.terms_used)]
        for p in sorted(predictions, key=lambda p: (p.user_id, p.content_id))
    ]
    path = Path(path)
    _write_csv(path, PREDICTIONS_HEADER, rows)
    return path


def export_report(kind: str, result: AnalysisResult, destination: str | Path) -> Path:
    if kind == "indicators":
        return write_indicators_csv(result.indicator_values, destination)
    if kind == "correlations":
        return write_correlations_csv(result.correlations, destination)
    if kind == "aggregate":
        return write_aggregate_csv(result.aggregate_rows, destination)
    if kind == "predictions":
        return write_predictions_csv(result.predictions, destination)
    raise ValueError(f"unknown report kind {kind!r}; expected one of {REPORT_KINDS}")


def write_all_reports(result: AnalysisResult, out_dir: str | Path) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return {kind: export_report(kind, result, out_dir / f"{kind}.csv") for kind in REPORT_KINDS}


# --- figures ----------------------------------------------------------------


def render_aggregate_figure(result: AnalysisResult, path: str | Path) -> Path:
    """Mean significant correlation per indicator and page class."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(9, max(3, 0.45 * max(1, len(result.aggregate_rows)))))
    rows = sorted(result.aggregate_rows, key=lambda r: (KIND_ORDER[r.kind], r.page_class.value))
    if rows:
        labels = [f"{r.kind.value} ({r.page_class.value})" for r in rows]
        means = [r.mean_r for r in rows]
        y = range(len(rows))
        ax.barh(y, means, color="#4878a8")
        ax.set_yticks(list(y), labels, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlabel("mean r over significant users")
        ax.set_xlim(-1, 1)
        ax.axvline(0, color="black", linewidth=0.8)
        for yi, row in zip(y, rows):
            ax.annotate(f" n={row.n_significant}", (row.mean_r, yi), fontsize=7, va="center")
    else:
        ax.text(0.5, 0.5, "no significant correlations", ha="center", va="center")
        ax.set_axis_off()
    ax.set_title("Significant indicator correlations")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_predictions_figure(result: AnalysisResult, path: str | Path) -> Path:
    """Predicted interest against the explicit rating, both on [0, 1]."""
    path = Path(path)
    explicit = {
        (r.user_id, r.content_id): likert_to_unit(r.likert)
        for r in result.ratings
        if r.noticed and r.likert is not None
    }
    xs, ys = [], []
    for pred in result.predictions:
        key = (pred.user_id, pred.content_id)
        if key in explicit:
            xs.append(explicit[key])
            ys.append(pred.predicted)
    fig, ax = plt.subplots(figsize=(5, 5))
    if xs:
        ax.scatter(xs, ys, alpha=0.6, color="#a85448")
        ax.plot([0, 1], [0, 1], linestyle="--", color="gray", linewidth=0.8)
        ax.set_xlabel("explicit interest (unit scale)")
        ax.set_ylabel("predicted interest")
        ax.set_xlim(-0.05, 1.05)
        ax.set_ylim(-0.05, 1.05)
    else:
        ax.text(0.5, 0.5, "no rated predictions", ha="center", va="center")
        ax.set_axis_off()
    ax.set_title("Predicted vs explicit interest")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_figures(result: AnalysisResult, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        render_aggregate_figure(result, out_dir / "aggregate_correlations.png"),
        render_predictions_figure(result, out_dir / "predictions_vs_explicit.png"),
    ]
