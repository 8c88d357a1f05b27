import numpy as np
import pytest

from debacer.errors import TooFewExamples
from debacer.stratify import FoldAssignment, stratified_multilabel_kfold

# Per-moderator class counts of the annotated legislature dataset used as
# the canonical imbalanced fixture: (debater, negatives, positives)
TABLE_SHAPE = [
    ("pureza", 165, 10),
    ("rodrigues", 147, 14),
    ("estrela", 99, 5),
    ("filipe", 69, 7),
    ("negrao", 69, 5),
]


def table_shaped_labels():
    labels = []
    for debater, n0, n1 in TABLE_SHAPE:
        labels += [(debater, 0)] * n0 + [(debater, 1)] * n1
    return labels


def test_two_folds_two_classes():
    labels = [("d", 0), ("d", 0), ("d", 1), ("d", 1)]
    assignment = stratified_multilabel_kfold(labels, k=2, seed=0)
    for fold in range(2):
        test = assignment.test_indices(fold)
        classes = [labels[i][1] for i in test]
        assert sorted(classes) == [0, 1]


def test_partition_disjoint_covering():
    labels = table_shaped_labels()
    assignment = stratified_multilabel_kfold(labels, k=5, seed=1)
    seen = np.concatenate([assignment.test_indices(f) for f in range(5)])
    assert sorted(seen.tolist()) == list(range(len(labels)))
    for f in range(5):
        test = set(assignment.test_indices(f).tolist())
        train = set(assignment.train_indices(f).tolist())
        assert not test & train
        assert test | train == set(range(len(labels)))


def test_table_shape_positive_counts():
    labels = table_shaped_labels()
    assert sum(t for _, t in labels) == 41 and len(labels) == 590
    for seed in (0, 1, 2):
        assignment = stratified_multilabel_kfold(labels, k=5, seed=seed)
        per_fold = [
            sum(labels[i][1] for i in assignment.test_indices(f)) for f in range(5)
        ]
        assert sorted(per_fold) == [8, 8, 8, 8, 9], per_fold


def test_table_shape_debater_deviation():
    labels = table_shaped_labels()
    assignment = stratified_multilabel_kfold(labels, k=5, seed=2)
    for debater, n0, n1 in TABLE_SHAPE:
        total = n0 + n1
        ideal = total / 5
        for f in range(5):
            got = sum(1 for i in assignment.test_indices(f) if labels[i][0] == debater)
            assert abs(got - ideal) <= 1.0, (debater, f, got, ideal)


def test_deterministic_per_seed():
    labels = table_shaped_labels()
    a1 = stratified_multilabel_kfold(labels, k=5, seed=7)
    a2 = stratified_multilabel_kfold(labels, k=5, seed=7)
    assert a1 == a2
    a3 = stratified_multilabel_kfold(labels, k=5, seed=8)
    assert a1 != a3


def test_too_few_examples():
    with pytest.raises(TooFewExamples):
        stratified_multilabel_kfold([("d", 0)], k=2)
    with pytest.raises(TooFewExamples):
        stratified_multilabel_kfold([("d", 0)] * 10, k=1)


def test_assignment_round_trip():
    labels = [("a", 0), ("a", 1), ("b", 0), ("b", 1)]
    assignment = stratified_multilabel_kfold(labels, k=2, seed=0)
    assert FoldAssignment.from_dict(assignment.to_dict()) == assignment
