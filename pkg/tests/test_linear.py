import numpy as np
import pytest

from debacer.errors import DimensionMismatch
from debacer.linear import (
    LinearModel,
    logreg_objective_grad,
    predict_proba_linear,
    sample_weights,
    sigmoid,
    train_logreg,
)


def test_zero_model_predicts_half():
    model = LinearModel(weights=np.zeros(3), bias=0.0)
    for x in (np.zeros(3), np.ones(3), np.array([5.0, -2.0, 0.1])):
        assert predict_proba_linear(model, x) == 0.5


def test_separable_1d():
    X = np.array([[-1.0], [1.0]])
    y = np.array([0, 1])
    model = train_logreg(X, y, penalty="l2", C=1e4)
    assert model.weights[0] > 0
    preds = [predict_proba_linear(model, x) >= 0.5 for x in X]
    assert preds == [False, True]


def finite_difference_grad(X, y, w, b, penalty, C, class_weight, eps=1e-6):
    def f(w_, b_):
        return logreg_objective_grad(X, y, w_, b_, penalty, C, class_weight)[0]

    gw = np.empty_like(w)
    for i in range(w.size):
        wp, wm = w.copy(), w.copy()
        wp[i] += eps
        wm[i] -= eps
        gw[i] = (f(wp, b) - f(wm, b)) / (2 * eps)
    gb = (f(w, b + eps) - f(w, b - eps)) / (2 * eps)
    return gw, gb


@pytest.mark.parametrize("class_weight", [None, "balanced"])
def test_gradient_matches_finite_differences(class_weight):
    rng = np.random.default_rng(12)
    for _ in range(20):
        n, d = rng.integers(5, 30), rng.integers(1, 8)
        X = rng.standard_normal((n, d))
        y = (rng.random(n) < 0.5).astype(int)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        w = rng.standard_normal(d)
        b = float(rng.standard_normal())
        C = float(np.exp(rng.uniform(-2, 4)))
        _, gw, gb = logreg_objective_grad(X, y, w, b, "l2", C, class_weight)
        num_w, num_b = finite_difference_grad(X, y, w, b, "l2", C, class_weight)
        denom = np.maximum(np.abs(num_w), 1e-8)
        assert np.max(np.abs(gw - num_w) / denom) < 1e-4
        assert abs(gb - num_b) / max(abs(num_b), 1e-8) < 1e-4


def test_predict_proba_formula_oracle():
    rng = np.random.default_rng(3)
    model = LinearModel(weights=rng.standard_normal(6), bias=0.7)
    for _ in range(50):
        x = rng.standard_normal(6)
        direct = 1.0 / (1.0 + np.exp(-(model.weights @ x + model.bias)))
        assert abs(predict_proba_linear(model, x) - direct) < 1e-12


def test_extreme_margins():
    model = LinearModel(weights=np.array([1.0]), bias=0.0)
    assert predict_proba_linear(model, np.array([1e3])) > 1 - 1e-12
    assert predict_proba_linear(model, np.array([-1e3])) < 1e-12


def test_dimension_mismatch():
    model = LinearModel(weights=np.zeros(3), bias=0.0)
    with pytest.raises(DimensionMismatch):
        predict_proba_linear(model, np.zeros(4))


def test_l1_gives_exact_zeros():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((60, 10))
    y = (X[:, 0] + 0.1 * rng.standard_normal(60) > 0).astype(int)
    model = train_logreg(X, y, penalty="l1", C=0.05)
    assert np.sum(model.weights == 0.0) >= 1


def test_l2_no_exact_zeros_generically():
    rng = np.random.default_rng(6)
    X = rng.standard_normal((60, 10))
    y = (X[:, 0] > 0).astype(int)
    model = train_logreg(X, y, penalty="l2", C=1.0)
    assert np.sum(model.weights == 0.0) == 0


def test_balanced_beats_unweighted_recall():
    # 93/7 overlapping gaussians: the unweighted fit under-recalls class 1
    rng = np.random.default_rng(7)
    n_neg, n_pos = 930, 70
    X = np.vstack([
        rng.standard_normal((n_neg, 2)) + [0.0, 0.0],
        rng.standard_normal((n_pos, 2)) + [1.2, 1.2],
    ])
    y = np.array([0] * n_neg + [1] * n_pos)
    plain = train_logreg(X, y, penalty="l2", C=1.0)
    balanced = train_logreg(X, y, penalty="l2", C=1.0, class_weight="balanced")

    def recall_of(model):
        preds = np.array([predict_proba_linear(model, x) >= 0.5 for x in X])
        return preds[y == 1].mean()

    assert recall_of(balanced) > recall_of(plain)


def test_balanced_sample_weights():
    y = np.array([0, 0, 0, 1])
    w = sample_weights(y, "balanced")
    assert np.allclose(w, [4 / 6, 4 / 6, 4 / 6, 4 / 2])
    assert np.allclose(sample_weights(y, None), 1.0)


def test_not_converged_flag():
    X = np.array([[-1.0], [1.0]])
    y = np.array([0, 1])
    model = train_logreg(X, y, penalty="l2", C=1e6, max_iter=1)
    assert not model.converged
    assert model.n_iter == 1
    done = train_logreg(X, y, penalty="l2", C=1.0, max_iter=5000)
    assert done.converged


def test_objective_curve_decreases():
    rng = np.random.default_rng(9)
    X = rng.standard_normal((40, 4))
    y = (X @ np.array([1.0, -1, 0.5, 0]) > 0).astype(int)
    model = train_logreg(X, y, penalty="l2", C=10.0)
    curve = model.objective_curve
    assert all(a >= b - 1e-12 for a, b in zip(curve, curve[1:]))


def test_sigmoid_stability():
    assert sigmoid(np.array([800.0]))[0] == 1.0
    assert sigmoid(np.array([-800.0]))[0] == 0.0
    assert abs(sigmoid(np.array([0.0]))[0] - 0.5) < 1e-15
