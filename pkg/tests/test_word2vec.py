import itertools

import numpy as np
import pytest

from debacer.corpus import select_agenda
from debacer.errors import EmptyCorpus
from debacer.synth import POLITICAL_STATEMENTS, SynthConfig, generate_synthetic
from debacer.textprep import tokenize
from debacer.word2vec import train_word2vec


@pytest.fixture(scope="module")
def two_topic_docs():
    corpus, _ = generate_synthetic(SynthConfig(n_topics=2, n_minutes=6, seed=11))
    return [
        tokenize(s.text)
        for item in select_agenda(corpus, POLITICAL_STATEMENTS)
        for s in item.speeches
    ]


@pytest.fixture(scope="module")
def table(two_topic_docs):
    return train_word2vec(two_topic_docs, dim=100, epochs=5, seed=3)


def test_vector_shapes_and_norms(table):
    assert all(v.shape == (100,) for v in table.vectors.values())
    norms = [np.linalg.norm(v) for v in table.vectors.values()]
    assert all(np.isfinite(n) and n > 0 for n in norms)


def _cos(u, v):
    return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))


def test_topic_separation(table):
    t0 = [w for w in table.vectors if w.endswith("t0")][:25]
    t1 = [w for w in table.vectors if w.endswith("t1")][:25]
    assert len(t0) > 5 and len(t1) > 5
    intra = np.mean(
        [_cos(table.vectors[a], table.vectors[b]) for a, b in itertools.combinations(t0, 2)]
        + [_cos(table.vectors[a], table.vectors[b]) for a, b in itertools.combinations(t1, 2)]
    )
    cross = np.mean([_cos(table.vectors[a], table.vectors[b]) for a in t0 for b in t1])
    assert intra > cross


def test_loss_decreases(table):
    curve = table.hyperparams["loss_curve"]
    assert len(curve) == 5
    assert all(a > b for a, b in zip(curve, curve[1:]))


def test_deterministic(two_topic_docs, table):
    again = train_word2vec(two_topic_docs, dim=100, epochs=5, seed=3)
    assert set(again.vectors) == set(table.vectors)
    assert all(np.array_equal(again.vectors[w], table.vectors[w]) for w in table.vectors)


def test_seed_changes_vectors(two_topic_docs, table):
    other = train_word2vec(two_topic_docs, dim=100, epochs=1, seed=4)
    some = next(iter(table.vectors))
    assert not np.array_equal(other.vectors[some], table.vectors[some])


def test_min_count_filters(two_topic_docs):
    small = train_word2vec(two_topic_docs, dim=16, epochs=1, min_count=5, seed=0)
    big = train_word2vec(two_topic_docs, dim=16, epochs=1, min_count=1, seed=0)
    assert len(small.vectors) < len(big.vectors)


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        train_word2vec([], dim=8)
    with pytest.raises(EmptyCorpus):
        train_word2vec([["solo"]], dim=8, min_count=2)
