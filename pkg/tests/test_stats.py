import itertools
import math

import numpy as np
import pytest

from debacer.crossval import CvResult, MetricReport
from debacer.errors import MismatchedFolds
from debacer.pipeline import PipelineSpec
from debacer.stats import (
    compare_pipelines,
    holm_adjust,
    wilcoxon_signed_rank,
)
from debacer.stratify import FoldAssignment


def exact_wilcoxon_oracle(a, b):
    """Independent enumeration over all sign patterns of the differences."""
    diff = [x - y for x, y in zip(a, b) if x != y]
    n = len(diff)
    if n == 0:
        return 1.0
    absd = sorted(range(n), key=lambda i: abs(diff[i]))
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and abs(diff[absd[j + 1]]) == abs(diff[absd[i]]):
            j += 1
        for t in range(i, j + 1):
            ranks[absd[t]] = (i + j) / 2 + 1
        i = j + 1
    w_pos = sum(r for r, d in zip(ranks, diff) if d > 0)
    totals = [sum(signs) for signs in itertools.product(*[(0.0, r) for r in ranks])]
    le = sum(1 for t in totals if t <= w_pos + 1e-12) / len(totals)
    ge = sum(1 for t in totals if t >= w_pos - 1e-12) / len(totals)
    return min(1.0, 2 * min(le, ge))


def test_identical_samples():
    assert wilcoxon_signed_rank([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 1.0


def test_n5_all_positive():
    a = [1.0, 2.0, 3.0, 4.0, 5.0]
    b = [0.5, 1.0, 2.0, 3.0, 4.0]
    p = wilcoxon_signed_rank(a, b)
    assert abs(p - 0.0625) < 1e-12
    assert abs(p - exact_wilcoxon_oracle(a, b)) < 1e-12


def test_symmetric_differences_at_null_median():
    # +d, -d pairs: W+ equals the null mean n(n+1)/4
    a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    b = [0.0, 3.0, 1.0, 6.0, 2.0, 9.0]  # diffs +1,-1,+2,-2,+3,-3
    diffs = [x - y for x, y in zip(a, b)]
    assert sorted(abs(d) for d in diffs) == [1, 1, 2, 2, 3, 3]
    p = wilcoxon_signed_rank(a, b)
    assert p > 0.9  # dead-center statistic: nothing to reject


def test_matches_enumeration_oracle_random():
    rng = np.random.default_rng(3)
    for _ in range(25):
        n = int(rng.integers(5, 11))
        a = rng.standard_normal(n).tolist()
        b = rng.standard_normal(n).tolist()
        assert abs(wilcoxon_signed_rank(a, b) - exact_wilcoxon_oracle(a, b)) < 1e-12


def test_normal_approximation_reasonable():
    rng = np.random.default_rng(4)
    a = rng.standard_normal(40)
    b = a + 0.8 + 0.1 * rng.standard_normal(40)  # b >> a
    p = wilcoxon_signed_rank(a, b)
    assert p < 1e-4
    null = wilcoxon_signed_rank(a, a + rng.standard_normal(40))
    assert null > 0.05


def test_holm_single():
    assert holm_adjust([0.03]) == [0.03]


def test_holm_two_values():
    assert holm_adjust([0.01, 0.04]) == [0.02, 0.04]


def test_holm_all_ones():
    assert holm_adjust([1.0, 1.0, 1.0]) == [1.0, 1.0, 1.0]


def test_holm_properties():
    rng = np.random.default_rng(5)
    for _ in range(50):
        ps = rng.random(int(rng.integers(1, 9)))
        adj = holm_adjust(ps)
        assert all(a >= p - 1e-15 for a, p in zip(adj, ps))  # adjusted >= raw
        order = np.argsort(ps, kind="stable")
        ordered = [adj[i] for i in order]
        assert all(x <= y + 1e-15 for x, y in zip(ordered, ordered[1:]))
        assert all(0 <= a <= 1 for a in adj)


def _cv_result(f1_values, assignment, features="bow"):
    spec = PipelineSpec(features=features, classifier="logreg")
    folds = [
        MetricReport(f1=v, precision=v, recall=v, cross_entropy=0.1,
                     brier_positive=0.1, fit_time=0.0)
        for v in f1_values
    ]
    return CvResult(spec=spec, assignment=assignment, folds=folds)


def _assignment(k):
    return FoldAssignment(fold_of=tuple(range(k)), k=k, seed=0)


def test_identical_results_one_clique():
    assignment = _assignment(10)
    values = [0.9] * 10
    comp = compare_pipelines(
        [_cv_result(values, assignment, "bow"), _cv_result(values, assignment, "bong")],
        names=["a", "b"],
    )
    assert comp.average_ranks[0] == comp.average_ranks[1]
    assert comp.raw_p[0, 1] == 1.0
    assert comp.cliques == [["a", "b"]]


def test_dominating_pipeline_separates():
    assignment = _assignment(10)
    strong = [0.95, 0.96, 0.97, 0.95, 0.98, 0.96, 0.97, 0.95, 0.96, 0.98]
    weak = [0.5] * 10
    comp = compare_pipelines(
        [_cv_result(strong, assignment), _cv_result(weak, assignment)],
        names=["strong", "weak"],
    )
    assert comp.adjusted_p[0, 1] < 0.05
    assert sorted(map(tuple, comp.cliques)) == [("strong",), ("weak",)]
    assert comp.average_ranks[0] < comp.average_ranks[1]


def test_interleaved_wins_single_clique():
    assignment = _assignment(10)
    rng = np.random.default_rng(6)
    base = 0.9 + 0.05 * rng.random(10)
    results = []
    names = []
    for i in range(5):
        jitter = rng.permutation(10) / 500.0  # tiny, interleaved advantages
        results.append(_cv_result((base + jitter).tolist(), assignment))
        names.append(f"p{i}")
    comp = compare_pipelines(results, names=names)
    assert [sorted(c) for c in comp.cliques] == [sorted(names)]


def test_mismatched_folds():
    r1 = _cv_result([0.9] * 4, _assignment(4))
    r2 = _cv_result([0.9] * 5, _assignment(5))
    with pytest.raises(MismatchedFolds):
        compare_pipelines([r1, r2])


def test_rank_ties_averaged():
    assignment = _assignment(4)
    comp = compare_pipelines(
        [_cv_result([0.9, 0.8, 0.9, 0.8], assignment),
         _cv_result([0.8, 0.9, 0.8, 0.9], assignment)],
        names=["a", "b"],
    )
    assert comp.average_ranks == [1.5, 1.5]
