"""Render JSON reports into matplotlib figures and CSV tables.

Every CLI command that produces a JSON report can have it turned into
figures (PNG) and delimited tables (CSV) next to each other in an output
directory, either at command time or later via `debacer report`. The
pairwise-comparison data stays machine-readable (ranks, p matrices,
cliques); figures here are summaries, not a critical-difference diagram.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DataError

FIGSIZE = (7.0, 4.0)
DPI = 120


def _save(fig, out_dir: Path, name: str) -> Path:
    path = out_dir / f"{name}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def _write_csv(out_dir: Path, name: str, header: list[str], rows: list[list]) -> Path:
    path = out_dir / f"{name}.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def render_cv_report(report: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    folds = report["folds"]
    metrics = ("f1", "cross_entropy", "brier_positive")
    written = []

    fig, axes = plt.subplots(1, len(metrics), figsize=(10.5, 3.4))
    for ax, metric in zip(axes, metrics):
        values = [f[metric] for f in folds]
        ax.bar(range(len(values)), values, color="#4878a8")
        mean = report["aggregates"][metric]["mean"]
        ax.axhline(mean, color="#c44e52", lw=1.2, ls="--", label=f"mean {mean:.3f}")
        ax.set_title(metric)
        ax.set_xlabel("fold")
        ax.legend(fontsize=8)
    written.append(_save(fig, out_dir, "cv_fold_metrics"))

    header = ["fold", "f1", "precision", "recall", "cross_entropy", "brier_positive", "fit_time"]
    rows = [
        [i] + [f[name] for name in header[1:]]
        for i, f in enumerate(folds)
    ]
    written.append(_write_csv(out_dir, "cv_fold_metrics", header, rows))
    return written


def render_comparison_report(report: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = report["pipelines"]
    ranks = report["average_ranks"]
    adjusted = np.asarray(report["adjusted_p"])
    written = []

    fig, ax = plt.subplots(figsize=FIGSIZE)
    order = np.argsort(ranks)
    ax.barh([names[i] for i in order], [ranks[i] for i in order], color="#4878a8")
    ax.set_xlabel("average rank across folds (lower is better)")
    ax.invert_yaxis()
    written.append(_save(fig, out_dir, "comparison_ranks"))

    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    im = ax.imshow(adjusted, vmin=0.0, vmax=1.0, cmap="viridis")
    ax.set_xticks(range(len(names)), names, rotation=30, ha="right", fontsize=8)
    ax.set_yticks(range(len(names)), names, fontsize=8)
    for i in range(len(names)):
        for j in range(len(names)):
            ax.text(j, i, f"{adjusted[i, j]:.2f}", ha="center", va="center",
                    color="white", fontsize=7)
    fig.colorbar(im, label="Holm-adjusted p")
    written.append(_save(fig, out_dir, "comparison_adjusted_p"))

    written.append(
        _write_csv(
            out_dir,
            "comparison_ranks",
            ["pipeline", "average_rank"],
            [[n, r] for n, r in zip(names, ranks)],
        )
    )
    pair_rows = []
    raw = np.asarray(report["raw_p"])
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            pair_rows.append([names[i], names[j], raw[i, j], adjusted[i, j]])
    written.append(
        _write_csv(out_dir, "comparison_pairs",
                   ["pipeline_a", "pipeline_b", "raw_p", "adjusted_p"], pair_rows)
    )
    return written


def render_partition_report(report: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    partitions = report["partitions"]
    lengths = [
        end - start + 1
        for p in partitions
        for start, end in p["blocks"]
    ]
    written = []

    fig, ax = plt.subplots(figsize=FIGSIZE)
    if lengths:
        ax.hist(lengths, bins=range(1, max(lengths) + 2), color="#4878a8",
                edgecolor="white")
    ax.set_xlabel("block length (speeches)")
    ax.set_ylabel("blocks")
    ax.set_title(f"{sum(len(p['blocks']) for p in partitions)} blocks "
                 f"across {len(partitions)} agenda items")
    written.append(_save(fig, out_dir, "partition_block_lengths"))

    rows = [
        [p["minute_id"], p["agenda_item"], start, end, end - start + 1]
        for p in partitions
        for start, end in p["blocks"]
    ]
    written.append(
        _write_csv(out_dir, "partition_blocks",
                   ["minute_id", "agenda_item", "start", "end", "length"], rows)
    )
    return written


def render_label_balance(labels: dict, out_dir: str | Path) -> list[Path]:
    """Class balance figure + per-debater table from {key: (debater, y)}."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_debater: dict[str, list[int]] = {}
    for debater, y in labels.values():
        by_debater.setdefault(debater, []).append(y)
    written = []

    fig, ax = plt.subplots(figsize=FIGSIZE)
    names = sorted(by_debater)
    neg = [sum(1 for y in by_debater[n] if y == 0) for n in names]
    pos = [sum(1 for y in by_debater[n] if y == 1) for n in names]
    xs = np.arange(len(names))
    ax.bar(xs, neg, label="0 (continuation)", color="#4878a8")
    ax.bar(xs, pos, bottom=neg, label="1 (interruption)", color="#c44e52")
    ax.set_xticks(xs, names, rotation=45, ha="right", fontsize=7)
    ax.legend()
    ax.set_ylabel("moderator speeches")
    written.append(_save(fig, out_dir, "label_balance"))

    written.append(
        _write_csv(out_dir, "label_balance",
                   ["debater", "n0", "n1", "total"],
                   [[n, a, b, a + b] for n, a, b in zip(names, neg, pos)])
    )
    return written


RENDERERS = {
    "cv": render_cv_report,
    "comparison": render_comparison_report,
    "partition": render_partition_report,
}


def render_report_file(path: str | Path, out_dir: str | Path) -> list[Path]:
    """Dispatch on the report's `kind` field."""
    report = json.loads(Path(path).read_text(encoding="utf-8"))
    kind = report.get("kind")
    renderer = RENDERERS.get(kind)
    if renderer is None:
        raise DataError(f"cannot render report kind {kind!r} from {path}")
    return renderer(report, out_dir)
