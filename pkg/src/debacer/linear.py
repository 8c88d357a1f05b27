"""Logistic regression trained by first-order convex optimization.

L2: full-batch gradient descent with backtracking (Armijo) line search.
L1: proximal gradient with soft-thresholding, also line-searched. Both
stop when the gradient norm (L2) or the proximal-step residual (L1)
drops below tol; hitting max_iter first returns the best iterate with
converged=False rather than raising.

Objective, with per-sample weights w_i summing to S:

    J = (1/S) sum_i w_i * logloss_i  +  R(w) / (C * S)

R is 0.5*||w||^2 or ||w||_1; the bias is never penalized. Larger C means
weaker regularization. `balanced` class weighting uses N / (2 * N_c).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch

_ARMIJO = 1e-4
_BACKTRACK = 0.5


@dataclass(eq=False)
class LinearModel:
    weights: np.ndarray
    bias: float
    penalty: str = "l2"
    C: float = 1.0
    class_weight: str | None = None
    converged: bool = True
    n_iter: int = 0
    objective_curve: tuple[float, ...] = field(default=(), repr=False)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "penalty": self.penalty,
            "C": self.C,
            "class_weight": self.class_weight,
            "converged": self.converged,
            "n_iter": self.n_iter,
        }

    @staticmethod
    def from_dict(d: dict) -> "LinearModel":
        return LinearModel(
            weights=np.asarray(d["weights"], dtype=np.float64),
            bias=float(d["bias"]),
            penalty=d["penalty"],
            C=float(d["C"]),
            class_weight=d.get("class_weight"),
            converged=bool(d.get("converged", True)),
            n_iter=int(d.get("n_iter", 0)),
        )


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def decision_function(model: LinearModel, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.dim:
        raise DimensionMismatch(f"x has dim {x.shape[-1]}, model has {model.dim}")
    return float(x @ model.weights + model.bias)


def predict_proba_linear(model: LinearModel, x) -> float:
    """sigmoid(w.x + b); monotone in the margin."""
    return float(sigmoid(decision_function(model, x)))


def sample_weights(y: np.ndarray, class_weight: str | None) -> np.ndarray:
    y = np.asarray(y)
    if class_weight is None:
        return np.ones(y.shape[0])
    if class_weight == "balanced":
        n = y.shape[0]
        n_pos = int(y.sum())
        n_neg = n - n_pos
        if n_pos == 0 or n_neg == 0:
            return np.ones(n)
        w = np.where(y == 1, n / (2.0 * n_pos), n / (2.0 * n_neg))
        return w
    raise ValueError(f"unknown class_weight {class_weight!r}")


def logloss_value_grad(X, y, sw, w, b):
    """Weighted mean log loss and its gradient (the smooth part of J)."""
    S = sw.sum()
    z = X @ w + b
    p = sigmoid(z)
    eps = 1e-300
    loss = -np.sum(sw * (y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))) / S
    resid = sw * (p - y) / S
    return loss, X.T @ resid, float(resid.sum())


def logreg_objective_grad(X, y, w, b, penalty="l2", C=1.0, class_weight=None):
    """Full objective and analytic gradient. For L1 the reported gradient
    covers only the smooth part; the penalty is handled by the prox."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    sw = sample_weights(y, class_weight)
    S = sw.sum()
    loss, gw, gb = logloss_value_grad(X, y, sw, w, b)
    if penalty == "l2":
        lam = 1.0 / (C * S)
        return loss + 0.5 * lam * float(w @ w), gw + lam * w, gb
    if penalty == "l1":
        lam = 1.0 / (C * S)
        return loss + lam * float(np.abs(w).sum()), gw, gb
    raise ValueError(f"unknown penalty {penalty!r}")


def _soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def train_logreg(
    X,
    y,
    penalty: str = "l2",
    C: float = 1.0,
    class_weight: str | None = None,
    tol: float = 1e-6,
    max_iter: int = 2000,
    seed: int = 0,
) -> LinearModel:
    """Fit from the zero vector. `seed` is accepted for interface symmetry;
    the optimizer itself is deterministic."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch("X rows != len(y)")
    if penalty not in ("l1", "l2"):
        raise ValueError(f"unknown penalty {penalty!r}")
    sw = sample_weights(y, class_weight)
    S = sw.sum()
    lam = 1.0 / (C * S)
    d = X.shape[1]
    w = np.zeros(d)
    b = 0.0
    curve: list[float] = []
    converged = False
    it = 0
    step = 1.0

    if penalty == "l2":
        def objective(w_, b_):
            loss, _, _ = logloss_value_grad(X, y, sw, w_, b_)
            return loss + 0.5 * lam * float(w_ @ w_)

        j = objective(w, b)
        for it in range(1, max_iter + 1):
            loss, gw, gb = logloss_value_grad(X, y, sw, w, b)
            gw = gw + lam * w
            gnorm2 = float(gw @ gw + gb * gb)
            curve.append(j)
            if np.sqrt(gnorm2) < tol:
                converged = True
                break
            step = min(step * 2.0, 1e8)
            while True:
                w_new = w - step * gw
                b_new = b - step * gb
                j_new = objective(w_new, b_new)
                if j_new <= j - _ARMIJO * step * gnorm2 or step < 1e-18:
                    break
                step *= _BACKTRACK
            w, b, j = w_new, b_new, j_new
    else:
        def objective(w_, b_):
            loss, _, _ = logloss_value_grad(X, y, sw, w_, b_)
            return loss + lam * float(np.abs(w_).sum())

        j = objective(w, b)
        for it in range(1, max_iter + 1):
            loss, gw, gb = logloss_value_grad(X, y, sw, w, b)
            curve.append(j)
            step = min(step * 2.0, 1e8)
            while True:
                w_new = _soft_threshold(w - step * gw, step * lam)
                b_new = b - step * gb
                dw = w_new - w
                db = b_new - b
                quad = loss + float(gw @ dw) + gb * db + (float(dw @ dw) + db * db) / (
                    2.0 * step
                )
                loss_new, _, _ = logloss_value_grad(X, y, sw, w_new, b_new)
                if loss_new <= quad + 1e-12 or step < 1e-18:
                    break
                step *= _BACKTRACK
            resid = np.sqrt((float(dw @ dw) + db * db)) / step
            w, b = w_new, b_new
            j = objective(w, b)
            if resid < tol:
                converged = True
                break

    return LinearModel(
        weights=w,
        bias=float(b),
        penalty=penalty,
        C=C,
        class_weight=class_weight,
        converged=converged,
        n_iter=it,
        objective_curve=tuple(curve),
    )
