import numpy as np
import pytest

from debacer.errors import ConfigError
from debacer.pipeline import (
    PipelineSpec,
    fit_pipeline,
    load_pipeline,
    save_pipeline,
)


@pytest.fixture(scope="module")
def trained(moderator_dataset_small):
    texts, labels, _ = moderator_dataset_small
    spec = PipelineSpec(features="bong", classifier="logreg", min_df=2,
                        svd_k=60, penalty="l2", C=10.0, seed=1)
    return fit_pipeline(spec, texts, labels), texts, labels


def test_trigger_vs_continuation_probabilities(trained):
    pipeline, texts, labels = trained
    trigger = "passamos ao ponto seguinte da ordem do dia"
    continuation = "tem a palavra o senhor deputado"
    assert pipeline.predict_proba(trigger) > 0.5
    assert pipeline.predict_proba(continuation) < 0.5
    assert pipeline.classify(trigger) == 1
    assert pipeline.classify(continuation) == 0


def test_empty_text_probability_defined(trained):
    pipeline, _, _ = trained
    p = pipeline.predict_proba("")
    assert 0.0 <= p <= 1.0


def test_prediction_deterministic(trained):
    pipeline, texts, _ = trained
    probs1 = [pipeline.predict_proba(t) for t in texts[:20]]
    probs2 = [pipeline.predict_proba(t) for t in texts[:20]]
    assert probs1 == probs2


def test_classify_matches_threshold_rule(trained):
    pipeline, texts, _ = trained
    for t in texts[:50]:
        assert pipeline.classify(t) == (1 if pipeline.predict_proba(t) >= 0.5 else 0)


def test_probabilities_in_range(trained):
    pipeline, texts, _ = trained
    assert all(0.0 <= pipeline.predict_proba(t) <= 1.0 for t in texts[:100])


@pytest.mark.parametrize("features,classifier", [
    ("bow", "logreg"), ("bong", "svm"), ("bow", "forest"), ("word2vec", "logreg"),
])
def test_save_load_round_trip(tmp_path, moderator_dataset_small, features, classifier):
    texts, labels, _ = moderator_dataset_small
    spec = PipelineSpec(
        features=features, classifier=classifier, min_df=1,
        n_estimators=10, epochs=1, max_epochs=10, C=5.0, seed=2,
    )
    pipeline = fit_pipeline(spec, texts, labels)
    path = tmp_path / "model.json"
    save_pipeline(pipeline, path)
    again = load_pipeline(path)
    assert again.spec == pipeline.spec
    assert again.fingerprint == pipeline.fingerprint
    for t in texts[:25]:
        assert abs(again.predict_proba(t) - pipeline.predict_proba(t)) < 1e-12


def test_fingerprint_sensitive_to_spec_and_data(moderator_dataset_small):
    texts, labels, _ = moderator_dataset_small
    a = fit_pipeline(PipelineSpec(features="bow", classifier="logreg", min_df=1, seed=0),
                     texts, labels)
    b = fit_pipeline(PipelineSpec(features="bow", classifier="logreg", min_df=1, seed=1),
                     texts, labels)
    assert a.fingerprint != b.fingerprint
    c = fit_pipeline(PipelineSpec(features="bow", classifier="logreg", min_df=1, seed=0),
                     texts[:-1], labels[:-1])
    assert a.fingerprint != c.fingerprint


def test_spec_validation():
    with pytest.raises(ConfigError):
        PipelineSpec(features="tfidf").validate()
    with pytest.raises(ConfigError):
        PipelineSpec(classifier="mlp").validate()
    with pytest.raises(ConfigError):
        PipelineSpec(features="word2vec", svd_k=10).validate()
    with pytest.raises(ConfigError):
        PipelineSpec(threshold=1.5).validate()


def test_l1_sparsity_on_synthetic_corpus(moderator_dataset_small):
    texts, labels, _ = moderator_dataset_small
    spec = PipelineSpec(features="bow", classifier="logreg", min_df=1,
                        penalty="l1", C=0.05, seed=0)
    pipeline = fit_pipeline(spec, texts, labels)
    assert int(np.sum(pipeline.model.weights == 0.0)) >= 1


def test_svm_pipeline_calibrated(moderator_dataset_small):
    texts, labels, _ = moderator_dataset_small
    spec = PipelineSpec(features="bow", classifier="svm", min_df=1, C=100.0, seed=3)
    pipeline = fit_pipeline(spec, texts, labels)
    assert pipeline.calibrator is not None
    probs = [pipeline.predict_proba(t) for t in texts]
    assert all(0.0 <= p <= 1.0 for p in probs)
    preds = [int(p >= 0.5) for p in probs]
    agree = np.mean([p == y for p, y in zip(preds, labels)])
    assert agree > 0.9
