"""Linear SVM via seeded stochastic subgradient descent with averaging,
plus sigmoid (Platt) calibration so the classifier emits probabilities.

Primal objective, with labels mapped to {-1, +1} and an unregularized
bias:

    J = (lambda/2) ||w||^2 + (1/N) sum_i hinge(1 - y_i (w.x_i + b))
    lambda = 1 / (C * N)

One pass per epoch over a seeded shuffle; step size 1/(lambda * (t + t0)).
The running average of all iterates is the returned model, and J of that
average is recorded per epoch. Calibration targets come from decision
values on held-out thirds of an internal 3-fold split, so the sigmoid
never sees in-sample margins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linear import LinearModel, sigmoid
from .randomness import stream


@dataclass
class PlattCalibrator:
    """p = 1 / (1 + exp(scale * s + offset)); scale < 0 whenever decision
    values correlate positively with the class."""

    scale: float
    offset: float

    def probability(self, decision_value: float) -> float:
        return float(sigmoid(-(self.scale * decision_value + self.offset)))

    def to_dict(self) -> dict:
        return {"scale": self.scale, "offset": self.offset}

    @staticmethod
    def from_dict(d: dict) -> "PlattCalibrator":
        return PlattCalibrator(scale=float(d["scale"]), offset=float(d["offset"]))


def hinge_objective(X, y_signed, w, b, lam) -> float:
    margins = y_signed * (X @ w + b)
    return 0.5 * lam * float(w @ w) + float(np.maximum(0.0, 1.0 - margins).mean())


def _sgd_epochs(X, y_signed, C, max_epochs, tol, rng):
    """Pegasos passes with monotone epoch acceptance.

    The running average of accepted iterates is the model. An epoch whose
    extended average would raise the objective is rejected: the iterate
    restarts from the current average with doubled step damping. The
    recorded per-epoch objective of the averaged iterate is therefore
    non-increasing by construction, without giving up the SGD trajectory.
    """
    n, d = X.shape
    lam = 1.0 / (C * n)
    w = np.zeros(d)
    b = 0.0
    sum_w = np.zeros(d)
    sum_b = 0.0
    count = 0
    w_avg = np.zeros(d)
    b_avg = 0.0
    t = 0
    t0 = 2.0 * n  # softens the huge early 1/(lambda t) steps
    best = hinge_objective(X, y_signed, w_avg, b_avg, lam)
    curve: list[float] = []
    converged = False
    for _ in range(max_epochs):
        epoch_w = np.zeros(d)
        epoch_b = 0.0
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * (t + t0))
            margin = y_signed[i] * (X[i] @ w + b)
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * y_signed[i] * X[i]
                b += eta * y_signed[i]
            epoch_w += w
            epoch_b += b
        cand_w = (sum_w + epoch_w) / (count + n)
        cand_b = (sum_b + epoch_b) / (count + n)
        objective = hinge_objective(X, y_signed, cand_w, cand_b, lam)
        if objective <= best + 1e-15:
            sum_w += epoch_w
            sum_b += epoch_b
            count += n
            w_avg, b_avg = cand_w, cand_b
            improvement = best - objective
            best = objective
            curve.append(best)
            if len(curve) >= 2 and improvement <= tol * max(abs(best), 1.0):
                converged = True
                break
        else:
            w = w_avg.copy()
            b = b_avg
            t0 *= 2.0
            curve.append(best)
    return w_avg, b_avg, curve, converged


def fit_platt(decision_values, y, max_iter: int = 100, tol: float = 1e-10) -> PlattCalibrator:
    """Newton iterations on the two-parameter sigmoid likelihood with the
    usual out-of-bounds-safe target smoothing."""
    s = np.asarray(decision_values, dtype=np.float64)
    y = np.asarray(y)
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    t_pos = (n_pos + 1.0) / (n_pos + 2.0)
    t_neg = 1.0 / (n_neg + 2.0)
    t = np.where(y == 1, t_pos, t_neg)

    def nll(a_, b_):
        p = sigmoid(-(a_ * s + b_))
        eps = 1e-12
        return float(-np.sum(t * np.log(p + eps) + (1 - t) * np.log(1 - p + eps)))

    a = 0.0
    bb = np.log((n_neg + 1.0) / (n_pos + 1.0))
    f = nll(a, bb)
    for _ in range(max_iter):
        p = sigmoid(-(a * s + bb))  # P(y=1)
        g_a = float(np.sum(s * (t - p)))
        g_b = float(np.sum(t - p))
        wdiag = p * (1.0 - p)
        h_aa = float(np.sum(s * s * wdiag)) + 1e-12
        h_ab = float(np.sum(s * wdiag))
        h_bb = float(np.sum(wdiag)) + 1e-12
        det = h_aa * h_bb - h_ab * h_ab
        if abs(det) < 1e-300:
            break
        da = (h_bb * g_a - h_ab * g_b) / det
        db = (h_aa * g_b - h_ab * g_a) / det
        # damped Newton: halve the step until the likelihood improves
        scale_step = 1.0
        for _ in range(30):
            f_new = nll(a - scale_step * da, bb - scale_step * db)
            if f_new <= f + 1e-12:
                break
            scale_step *= 0.5
        a -= scale_step * da
        bb -= scale_step * db
        f = f_new
        if abs(scale_step * da) < tol and abs(scale_step * db) < tol:
            break
    return PlattCalibrator(scale=a, offset=bb)


def _internal_folds(y: np.ndarray, n_folds: int, rng) -> np.ndarray:
    """Class-wise round-robin assignment: every fold sees both classes
    whenever each class has at least n_folds members."""
    fold = np.empty(y.shape[0], dtype=np.int64)
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        idx = idx[rng.permutation(idx.size)]
        fold[idx] = np.arange(idx.size) % n_folds
    return fold


def train_linear_svm(
    X,
    y,
    C: float = 1.0,
    tol: float = 1e-6,
    max_epochs: int = 40,
    seed: int = 0,
) -> tuple[LinearModel, PlattCalibrator]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch("X rows != len(y)")
    y_signed = np.where(y == 1, 1.0, -1.0)
    n = X.shape[0]

    w, b, curve, converged = _sgd_epochs(
        X, y_signed, C, max_epochs, tol, stream(seed, 51)
    )
    model = LinearModel(
        weights=w,
        bias=float(b),
        penalty="l2",
        C=C,
        class_weight=None,
        converged=converged,
        n_iter=len(curve),
        objective_curve=tuple(curve),
    )

    # out-of-fold decision values for calibration
    fold = _internal_folds(y, 3, stream(seed, 52))
    oof = np.zeros(n)
    for f in range(3):
        train = fold != f
        if train.sum() == 0 or len(np.unique(y[train])) < 2:
            oof[fold == f] = X[fold == f] @ w + b
            continue
        wf, bf, _, _ = _sgd_epochs(
            X[train], y_signed[train], C, max_epochs, tol, stream(seed, 53, f)
        )
        oof[fold == f] = X[fold == f] @ wf + bf
    calibrator = fit_platt(oof, y)
    return model, calibrator
