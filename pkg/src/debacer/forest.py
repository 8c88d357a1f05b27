"""Random forest of CART-style decision trees for binary targets.

Each tree trains on its own bootstrap sample, drawn from a per-tree
substream of the forest seed, so trees are independent and the whole
ensemble is reproducible bit-for-bit. `balanced_subsample` recomputes
class weights from each tree's bootstrap class frequencies. Splits
minimize weighted child impurity (gini or entropy); ties go to the
lowest feature index, then the lowest threshold. Nodes split while they
are impure and hold at least two samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .randomness import stream

_LEAF = -1


def gini_impurity(counts) -> float:
    """1 - sum p^2 over class weight fractions."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


def entropy_impurity(counts) -> float:
    """Shannon entropy in bits."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts / total
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


@dataclass(eq=False)
class DecisionTree:
    """Flat-array tree: feature[i] == -1 marks a leaf; children go left
    when x[feature] <= threshold."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    positive_fraction: np.ndarray  # weighted positive share at each node

    def predict_proba_one(self, x: np.ndarray) -> float:
        node = 0
        while self.feature[node] != _LEAF:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return float(self.positive_fraction[node])

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "positive_fraction": self.positive_fraction.tolist(),
        }

    @staticmethod
    def from_dict(d: dict) -> "DecisionTree":
        return DecisionTree(
            feature=np.asarray(d["feature"], dtype=np.int64),
            threshold=np.asarray(d["threshold"], dtype=np.float64),
            left=np.asarray(d["left"], dtype=np.int64),
            right=np.asarray(d["right"], dtype=np.int64),
            positive_fraction=np.asarray(d["positive_fraction"], dtype=np.float64),
        )


@dataclass(eq=False)
class Forest:
    trees: list[DecisionTree]
    n_estimators: int
    criterion: str
    class_weight: str | None
    max_features: int
    seed: int

    def predict_proba_one(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(np.mean([t.predict_proba_one(x) for t in self.trees]))

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return np.array([self.predict_proba_one(row) for row in X])

    def to_dict(self) -> dict:
        return {
            "trees": [t.to_dict() for t in self.trees],
            "n_estimators": self.n_estimators,
            "criterion": self.criterion,
            "class_weight": self.class_weight,
            "max_features": self.max_features,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(d: dict) -> "Forest":
        return Forest(
            trees=[DecisionTree.from_dict(t) for t in d["trees"]],
            n_estimators=int(d["n_estimators"]),
            criterion=d["criterion"],
            class_weight=d.get("class_weight"),
            max_features=int(d["max_features"]),
            seed=int(d["seed"]),
        )


def _impurity_scan(col, y, sw, criterion):
    """Best (score, threshold) splitting sorted column values, or None.

    Vectorized CART sweep: cumulative weighted class counts give the
    impurity of every candidate split in one pass. Candidates are
    midpoints between distinct consecutive values; np.argmin takes the
    first (lowest-threshold) minimum on ties.
    """
    order = np.argsort(col, kind="stable")
    cs = col[order]
    ys = y[order]
    ws = sw[order]

    w_pos = np.cumsum(ws * ys)
    w_all = np.cumsum(ws)
    total_pos = w_pos[-1]
    total = w_all[-1]

    # split after position i (left = 0..i); valid where value changes
    valid = np.flatnonzero(cs[:-1] < cs[1:])
    if valid.size == 0:
        return None

    lw = w_all[valid]
    lp = w_pos[valid]
    rw = total - lw
    rp = total_pos - lp

    with np.errstate(divide="ignore", invalid="ignore"):
        lp_frac = np.where(lw > 0, lp / lw, 0.0)
        rp_frac = np.where(rw > 0, rp / rw, 0.0)
        if criterion == "gini":
            li = 1.0 - lp_frac**2 - (1.0 - lp_frac) ** 2
            ri = 1.0 - rp_frac**2 - (1.0 - rp_frac) ** 2
        else:  # entropy
            def ent(p):
                out = np.zeros_like(p)
                for q in (p, 1.0 - p):
                    mask = q > 0
                    out[mask] -= q[mask] * np.log2(q[mask])
                return out

            li = ent(lp_frac)
            ri = ent(rp_frac)
    score = (lw * li + rw * ri) / total
    best = int(np.argmin(score))
    threshold = 0.5 * (cs[valid[best]] + cs[valid[best] + 1])
    return float(score[best]), threshold


def _build_tree(X, y, sw, criterion, max_features, rng):
    n_features = X.shape[1]
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    pos_frac: list[float] = []

    def new_node():
        feature.append(_LEAF)
        threshold.append(0.0)
        left.append(_LEAF)
        right.append(_LEAF)
        pos_frac.append(0.0)
        return len(feature) - 1

    def grow(idx: np.ndarray) -> int:
        node = new_node()
        w_pos = float(sw[idx][y[idx] == 1].sum())
        w_all = float(sw[idx].sum())
        pos_frac[node] = w_pos / w_all if w_all > 0 else 0.0
        labels = y[idx]
        if idx.size < 2 or labels.min() == labels.max():
            return node

        candidates = np.sort(rng.choice(n_features, size=min(max_features, n_features),
                                        replace=False))
        best = None  # (score, feature, threshold)
        for f in candidates:
            scan = _impurity_scan(X[idx, f], labels.astype(np.float64), sw[idx], criterion)
            if scan is None:
                continue
            score, thr = scan
            if best is None or score < best[0] - 1e-15:
                best = (score, int(f), thr)
        if best is None:
            return node

        _, f, thr = best
        go_left = X[idx, f] <= thr
        feature[node] = f
        threshold[node] = thr
        left[node] = grow(idx[go_left])
        right[node] = grow(idx[~go_left])
        return node

    grow(np.arange(X.shape[0]))
    return DecisionTree(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        positive_fraction=np.asarray(pos_frac, dtype=np.float64),
    )


def train_random_forest(
    X,
    y,
    n_estimators: int = 300,
    criterion: str = "gini",
    class_weight: str | None = None,
    max_features: int | None = None,
    seed: int = 0,
) -> Forest:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch("X rows != len(y)")
    if criterion not in ("gini", "entropy"):
        raise ValueError(f"unknown criterion {criterion!r}")
    if class_weight not in (None, "balanced_subsample"):
        raise ValueError(f"unknown class_weight {class_weight!r}")
    n, d = X.shape
    if max_features is None:
        max_features = int(np.ceil(np.sqrt(d)))
    max_features = max(1, min(max_features, d))

    trees = []
    for tree_idx in range(n_estimators):
        rng = stream(seed, 61, tree_idx)
        boot = rng.integers(0, n, size=n)
        yb = y[boot]
        if class_weight == "balanced_subsample":
            counts = np.bincount(yb, minlength=2).astype(np.float64)
            weights = np.where(
                yb == 1,
                n / (2.0 * counts[1]) if counts[1] > 0 else 0.0,
                n / (2.0 * counts[0]) if counts[0] > 0 else 0.0,
            )
        else:
            weights = np.ones(n)
        trees.append(_build_tree(X[boot], yb, weights, criterion, max_features, rng))
    return Forest(
        trees=trees,
        n_estimators=n_estimators,
        criterion=criterion,
        class_weight=class_weight,
        max_features=max_features,
        seed=seed,
    )
