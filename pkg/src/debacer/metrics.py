"""Imbalance-aware binary classification metrics.

All 0/0 ratios resolve to 0 by convention - with ~7% positives the
all-negative predictor is a live degenerate case and must score 0, not
NaN. Cross-entropy uses the natural log with probabilities clamped to
[eps, 1-eps].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NoPositives

CLAMP_EPS = 1e-15


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion(y_true, y_pred) -> ConfusionCounts:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch("y_true and y_pred differ in length")
    return ConfusionCounts(
        tp=int(np.sum((y_true == 1) & (y_pred == 1))),
        fp=int(np.sum((y_true == 0) & (y_pred == 1))),
        fn=int(np.sum((y_true == 1) & (y_pred == 0))),
        tn=int(np.sum((y_true == 0) & (y_pred == 0))),
    )


def precision(counts: ConfusionCounts) -> float:
    denom = counts.tp + counts.fp
    return counts.tp / denom if denom else 0.0


def recall(counts: ConfusionCounts) -> float:
    denom = counts.tp + counts.fn
    return counts.tp / denom if denom else 0.0


def f1_score(counts: ConfusionCounts) -> float:
    p = precision(counts)
    r = recall(counts)
    return 2.0 * p * r / (p + r) if (p + r) else 0.0


def cross_entropy(y, p) -> float:
    """-(1/N) sum (1-y) log(1-p) + y log(p), natural log, p clamped."""
    y = np.asarray(y, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if y.shape != p.shape:
        raise LengthMismatch("y and p differ in length")
    p = np.clip(p, CLAMP_EPS, 1.0 - CLAMP_EPS)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def brier_positive(y, p) -> float:
    """Mean squared error over the positive examples only."""
    y = np.asarray(y, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if y.shape != p.shape:
        raise LengthMismatch("y and p differ in length")
    mask = y == 1
    if not mask.any():
        raise NoPositives("brier_positive needs at least one positive example")
    return float(np.mean((1.0 - p[mask]) ** 2))
