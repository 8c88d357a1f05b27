"""Multi-label stratified K-fold by iterative stratification.

Each example carries two labels: its debater and its binary target. The
assignment loop repeatedly takes the label with the fewest remaining
examples and hands each of its examples to the fold with the greatest
remaining demand for that label; ties fall through to the fold with the
most remaining overall capacity, then to a seeded random draw. The
result partitions the index set and keeps per-fold label counts within
one example of proportional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import TooFewExamples
from .randomness import stream


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: tuple[int, ...]
    k: int
    seed: int

    def __post_init__(self):
        present = set(self.fold_of)
        if not present.issubset(range(self.k)):
            raise ValueError("fold ids out of range")

    @property
    def n(self) -> int:
        return len(self.fold_of)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.fold_of) == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.fold_of) != fold)

    def to_dict(self) -> dict:
        return {"fold_of": list(self.fold_of), "k": self.k, "seed": self.seed}

    @staticmethod
    def from_dict(d: dict) -> "FoldAssignment":
        return FoldAssignment(fold_of=tuple(d["fold_of"]), k=int(d["k"]), seed=int(d["seed"]))


def stratified_multilabel_kfold(
    labels: Sequence[tuple[str, int]], k: int = 5, seed: int = 0
) -> FoldAssignment:
    """Assign (debater, target) labelled examples to k folds."""
    n = len(labels)
    if k < 2:
        raise TooFewExamples("k must be >= 2")
    if n < k:
        raise TooFewExamples(f"{n} examples cannot fill {k} folds")

    labelsets = [
        (f"debater:{debater}", f"target:{int(target)}") for debater, target in labels
    ]
    # remaining demand per label per fold (floats: count/k each)
    all_labels = sorted({lab for pair in labelsets for lab in pair})
    label_count = {lab: 0 for lab in all_labels}
    for pair in labelsets:
        for lab in pair:
            label_count[lab] += 1
    demand = {lab: np.full(k, label_count[lab] / k) for lab in all_labels}
    capacity = np.full(k, n / k)

    remaining: dict[str, set[int]] = {lab: set() for lab in all_labels}
    for i, pair in enumerate(labelsets):
        for lab in pair:
            remaining[lab].add(i)

    rng = stream(seed, 71)
    fold_of = np.full(n, -1, dtype=np.int64)
    unassigned = n

    while unassigned > 0:
        # rarest label still waiting for examples; deterministic tie-break
        lab = min(
            (lab for lab in all_labels if remaining[lab]),
            key=lambda lab: (len(remaining[lab]), lab),
        )
        examples = sorted(remaining[lab])
        order = rng.permutation(len(examples))
        for j in order:
            i = examples[j]
            if fold_of[i] != -1:
                continue
            d = demand[lab]
            best = np.flatnonzero(d == d.max())
            if best.size > 1:
                caps = capacity[best]
                best = best[np.flatnonzero(caps == caps.max())]
            if best.size > 1:
                fold = int(best[rng.integers(0, best.size)])
            else:
                fold = int(best[0])
            fold_of[i] = fold
            capacity[fold] -= 1.0
            unassigned -= 1
            for other in labelsets[i]:
                demand[other][fold] -= 1.0
                remaining[other].discard(i)

    return FoldAssignment(fold_of=tuple(int(f) for f in fold_of), k=k, seed=seed)
