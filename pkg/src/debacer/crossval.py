"""Cross-validation runner.

Each fold fits the full pipeline - preprocessing, feature extractor,
classifier - on the K-1 training folds only, so no test-fold text can
leak into vocabularies, SVD bases or embeddings, then evaluates on the
held-out fold. Aggregates report mean and sample (N-1) standard
deviation per metric.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import TrainingError
from .metrics import brier_positive, confusion, cross_entropy, f1_score, precision, recall
from .pipeline import PipelineSpec, fit_pipeline
from .stratify import FoldAssignment

METRIC_NAMES = ("f1", "precision", "recall", "cross_entropy", "brier_positive", "fit_time")


@dataclass(frozen=True)
class MetricReport:
    f1: float
    precision: float
    recall: float
    cross_entropy: float
    brier_positive: float
    fit_time: float

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    @staticmethod
    def from_dict(d: dict) -> "MetricReport":
        return MetricReport(**{name: float(d[name]) for name in METRIC_NAMES})


@dataclass
class CvResult:
    spec: PipelineSpec
    assignment: FoldAssignment
    folds: list[MetricReport] = field(default_factory=list)
    # per-fold fitted pipelines, kept only when run_cv(keep_pipelines=True);
    # never serialized - for leakage probes and debugging
    pipelines: list = field(default_factory=list, repr=False, compare=False)

    def metric_values(self, name: str) -> np.ndarray:
        return np.array([getattr(f, name) for f in self.folds])

    def mean(self, name: str) -> float:
        return float(self.metric_values(name).mean())

    def std(self, name: str) -> float:
        values = self.metric_values(name)
        return float(values.std(ddof=1)) if values.size > 1 else 0.0

    @property
    def aggregates(self) -> dict[str, tuple[float, float]]:
        return {name: (self.mean(name), self.std(name)) for name in METRIC_NAMES}

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "config_fingerprint": self.spec.fingerprint,
            "assignment": self.assignment.to_dict(),
            "folds": [f.to_dict() for f in self.folds],
            "aggregates": {
                name: {"mean": mean, "std": std}
                for name, (mean, std) in self.aggregates.items()
            },
        }

    @staticmethod
    def from_dict(d: dict) -> "CvResult":
        return CvResult(
            spec=PipelineSpec.from_dict(d["spec"]),
            assignment=FoldAssignment.from_dict(d["assignment"]),
            folds=[MetricReport.from_dict(f) for f in d["folds"]],
        )


def evaluate_fold(pipeline, texts, y_true) -> tuple[np.ndarray, np.ndarray]:
    probs = np.array([pipeline.predict_proba(t) for t in texts])
    preds = (probs >= pipeline.threshold).astype(np.int64)
    return probs, preds


def run_cv(
    spec: PipelineSpec,
    texts: list[str],
    labels: list[int],
    folds: FoldAssignment,
    keep_pipelines: bool = False,
) -> CvResult:
    """Fit and score the pipeline on every train/test split of `folds`."""
    if folds.n != len(texts) or len(texts) != len(labels):
        raise TrainingError("fold assignment does not cover the examples")
    y = np.asarray(labels, dtype=np.int64)
    result = CvResult(spec=spec, assignment=folds)
    for fold in range(folds.k):
        train_idx = folds.train_indices(fold)
        test_idx = folds.test_indices(fold)
        started = time.perf_counter()
        try:
            pipeline = fit_pipeline(
                spec, [texts[i] for i in train_idx], y[train_idx].tolist()
            )
        except Exception as exc:
            raise TrainingError(f"fold {fold}: {exc}") from exc
        fit_time = time.perf_counter() - started
        if keep_pipelines:
            result.pipelines.append(pipeline)
        probs, preds = evaluate_fold(pipeline, [texts[i] for i in test_idx], y[test_idx])
        counts = confusion(y[test_idx], preds)
        result.folds.append(
            MetricReport(
                f1=f1_score(counts),
                precision=precision(counts),
                recall=recall(counts),
                cross_entropy=cross_entropy(y[test_idx], probs),
                brier_positive=brier_positive(y[test_idx], probs),
                fit_time=fit_time,
            )
        )
    return result
