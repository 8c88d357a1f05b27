"""Post-hoc statistical comparison of pipelines across folds.

Wilcoxon signed-rank (exact null by sign-pattern enumeration up to n=12,
normal approximation with tie correction and continuity correction
beyond), Holm step-down adjustment, and the pairwise comparison report:
average ranks, raw/adjusted p matrices, and maximal cliques of
statistically indistinguishable pipelines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .crossval import CvResult
from .errors import LengthMismatch, MismatchedFolds

EXACT_LIMIT = 12


def _ranks_with_ties(values: np.ndarray) -> np.ndarray:
    """Average ranks, 1-based."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def wilcoxon_signed_rank(a, b) -> float:
    """Two-sided p-value for paired samples; zero differences dropped,
    all-zero returns 1.0 by convention."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch("paired samples differ in length")
    diff = a - b
    diff = diff[diff != 0.0]
    n = diff.size
    if n == 0:
        return 1.0
    ranks = _ranks_with_ties(np.abs(diff))
    w_pos = float(ranks[diff > 0].sum())

    if n <= EXACT_LIMIT:
        # exact null: enumerate all 2^n sign assignments of the ranks
        totals = np.zeros(1)
        for r in ranks:
            totals = np.concatenate([totals, totals + r])
        le = float(np.mean(totals <= w_pos + 1e-12))
        ge = float(np.mean(totals >= w_pos - 1e-12))
        return min(1.0, 2.0 * min(le, ge))

    mean = n * (n + 1) / 4.0
    tie_sizes = np.unique(ranks, return_counts=True)[1]
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_sizes**3 - tie_sizes)) / 48.0
    if var <= 0:
        return 1.0
    # continuity correction toward the mean
    z = (w_pos - mean - 0.5 * np.sign(w_pos - mean)) / math.sqrt(var)
    return min(1.0, 2.0 * (1.0 - 0.5 * (1.0 + math.erf(abs(z) / math.sqrt(2.0)))))


def holm_adjust(p_values) -> list[float]:
    """Step-down Holm: adjusted p_(i) = max_{j<=i} min(1, (m-j+1) p_(j))."""
    p = np.asarray(p_values, dtype=np.float64)
    m = p.size
    if m == 0:
        return []
    order = np.argsort(p, kind="stable")
    adjusted = np.empty(m)
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, min(1.0, (m - rank) * p[idx]))
        adjusted[idx] = running
    return adjusted.tolist()


@dataclass
class PairwiseComparison:
    names: list[str]
    average_ranks: list[float]
    raw_p: np.ndarray
    adjusted_p: np.ndarray
    cliques: list[list[str]]
    alpha: float = 0.05
    per_fold_f1: list[list[float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "pipelines": self.names,
            "average_ranks": self.average_ranks,
            "raw_p": self.raw_p.tolist(),
            "adjusted_p": self.adjusted_p.tolist(),
            "cliques": self.cliques,
            "per_fold_f1": self.per_fold_f1,
        }


def _maximal_cliques(n: int, compatible: np.ndarray) -> list[list[int]]:
    """All maximal vertex sets with no significant internal pair; the
    pipeline count is small, so brute-force subsets."""
    cliques: list[set[int]] = []
    for size in range(n, 0, -1):
        for subset in combinations(range(n), size):
            if any(set(subset) <= c for c in cliques):
                continue
            if all(compatible[i, j] for i, j in combinations(subset, 2)):
                cliques.append(set(subset))
    cliques.sort(key=lambda c: sorted(c))
    return [sorted(c) for c in cliques]


def compare_pipelines(
    results: list[CvResult],
    names: list[str] | None = None,
    alpha: float = 0.05,
) -> PairwiseComparison:
    """Rank pipelines by per-fold F1 and test all pairs, Holm-adjusted."""
    if not results:
        raise MismatchedFolds("nothing to compare")
    assignment = results[0].assignment
    for r in results[1:]:
        if r.assignment != assignment:
            raise MismatchedFolds("all CvResults must share one fold assignment")
    if names is None:
        names = [f"{r.spec.features}+{r.spec.classifier}" for r in results]
    n = len(results)
    f1 = np.array([r.metric_values("f1") for r in results])  # n x K

    # rank 1 = best F1 within each fold, ties averaged
    ranks = np.array([_ranks_with_ties(-f1[:, fold]) for fold in range(f1.shape[1])])
    average_ranks = ranks.mean(axis=0).tolist()

    pairs = list(combinations(range(n), 2))
    raw = [wilcoxon_signed_rank(f1[i], f1[j]) for i, j in pairs]
    adjusted = holm_adjust(raw)

    raw_m = np.ones((n, n))
    adj_m = np.ones((n, n))
    compatible = np.ones((n, n), dtype=bool)
    for (i, j), p_raw, p_adj in zip(pairs, raw, adjusted):
        raw_m[i, j] = raw_m[j, i] = p_raw
        adj_m[i, j] = adj_m[j, i] = p_adj
        compatible[i, j] = compatible[j, i] = p_adj >= alpha

    cliques_idx = _maximal_cliques(n, compatible)
    return PairwiseComparison(
        names=list(names),
        average_ranks=average_ranks,
        raw_p=raw_m,
        adjusted_p=adj_m,
        cliques=[[names[i] for i in c] for c in cliques_idx],
        alpha=alpha,
        per_fold_f1=f1.tolist(),
    )
