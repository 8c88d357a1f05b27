"""The trainable classification pipeline: preprocessing + fitted feature
extractor + classifier + optional calibrator + decision threshold.

A PipelineSpec fully determines a training run, seeds included, and
hashes to a config fingerprint. TrainedPipeline is the frozen result;
prediction is pure. Models serialize to a versioned JSON envelope with
parameter arrays and training metadata.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import textprep
from .errors import ConfigError, DataError
from .features import (
    EmbeddingTable,
    Vocabulary,
    docs_matrix,
    embed_sentence,
    fit_bong,
    fit_bow,
    transform_counts,
)
from .forest import Forest, train_random_forest
from .linear import LinearModel, decision_function, predict_proba_linear, train_logreg
from .svd import SvdProjection, fit_truncated_svd, project_svd
from .svm import PlattCalibrator, train_linear_svm
from .word2vec import train_word2vec

FORMAT_NAME = "debacer-pipeline"
FORMAT_VERSION = 1

FEATURES = ("bow", "bong", "word2vec")
CLASSIFIERS = ("logreg", "svm", "forest")


def fingerprint_of(obj) -> str:
    payload = json.dumps(obj, sort_keys=True, ensure_ascii=False, default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class PreprocessConfig:
    """Tokenizer settings plus which stopword/lemma resources to use."""

    min_token_len: int = 2
    lowercase: bool = True
    use_default_stopwords: bool = True
    use_default_lemmas: bool = True

    def build(self):
        cfg = textprep.TokenizerConfig(lowercase=self.lowercase,
                                       min_token_len=self.min_token_len)
        stop = textprep.default_stopwords() if self.use_default_stopwords else frozenset()
        lemmas = textprep.default_lemma_table() if self.use_default_lemmas else textprep.EMPTY_LEMMAS
        return cfg, stop, lemmas


@dataclass(frozen=True)
class PipelineSpec:
    features: str = "bong"
    classifier: str = "logreg"
    # sparse features
    n_max: int = 3
    min_df: int = 2
    svd_k: int | None = None
    # embeddings
    embed_dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    min_count: int = 2
    # linear models
    penalty: str = "l2"
    C: float = 1.0
    class_weight: str | None = None
    tol: float = 1e-6
    max_iter: int = 2000
    max_epochs: int = 40
    # forest
    n_estimators: int = 300
    criterion: str = "gini"
    max_features: int | None = None
    # decision
    threshold: float = 0.5
    seed: int = 0
    prep: PreprocessConfig = field(default_factory=PreprocessConfig)

    def validate(self) -> None:
        if self.features not in FEATURES:
            raise ConfigError(f"unknown features {self.features!r}")
        if self.classifier not in CLASSIFIERS:
            raise ConfigError(f"unknown classifier {self.classifier!r}")
        if self.features == "word2vec" and self.svd_k is not None:
            raise ConfigError("svd_k only applies to sparse features")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError("threshold must lie in [0,1]")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["prep"] = asdict(self.prep)
        return d

    @staticmethod
    def from_dict(d: dict) -> "PipelineSpec":
        d = dict(d)
        prep = d.pop("prep", {})
        if isinstance(prep, dict):
            prep = PreprocessConfig(**prep)
        spec = PipelineSpec(prep=prep, **d)
        spec.validate()
        return spec

    @property
    def fingerprint(self) -> str:
        return fingerprint_of(self.to_dict())

    def with_params(self, **params) -> "PipelineSpec":
        return replace(self, **params)


@dataclass(eq=False)
class TrainedPipeline:
    spec: PipelineSpec
    vocab: Vocabulary | None
    svd: SvdProjection | None
    embeddings: EmbeddingTable | None
    model: LinearModel | Forest
    calibrator: PlattCalibrator | None
    data_fingerprint: str

    def __post_init__(self):
        self._tok_cfg, self._stopwords, self._lemmas = self.spec.prep.build()

    @property
    def threshold(self) -> float:
        return self.spec.threshold

    @property
    def fingerprint(self) -> str:
        return fingerprint_of(
            {"spec": self.spec.to_dict(), "data": self.data_fingerprint}
        )

    def tokens_of(self, text: str) -> list[str]:
        return textprep.preprocess(text, self._tok_cfg, self._stopwords, self._lemmas)

    def featurize(self, text: str) -> np.ndarray:
        tokens = self.tokens_of(text)
        if self.spec.features == "word2vec":
            return embed_sentence(tokens, self.embeddings)
        vec = transform_counts(tokens, self.vocab)
        if self.svd is not None:
            return project_svd(vec, self.svd)
        return vec.to_dense()

    def predict_proba(self, text: str) -> float:
        x = self.featurize(text)
        return self.predict_proba_vector(x)

    def predict_proba_vector(self, x: np.ndarray) -> float:
        if isinstance(self.model, Forest):
            return self.model.predict_proba_one(x)
        if self.calibrator is not None:
            return self.calibrator.probability(decision_function(self.model, x))
        return predict_proba_linear(self.model, x)

    def classify(self, text: str) -> int:
        # ties at the threshold classify as 1: favors the minority class
        return 1 if self.predict_proba(text) >= self.threshold else 0


def _build_features(spec: PipelineSpec, token_docs: Sequence[Sequence[str]]):
    vocab = svd = table = None
    if spec.features == "word2vec":
        table = train_word2vec(
            token_docs,
            dim=spec.embed_dim,
            window=spec.window,
            negatives=spec.negatives,
            epochs=spec.epochs,
            min_count=spec.min_count,
            seed=spec.seed,
        )
        X = np.array([embed_sentence(t, table) for t in token_docs])
        return vocab, svd, table, X
    if spec.features == "bow":
        vocab = fit_bow(token_docs, min_df=spec.min_df)
    else:
        vocab = fit_bong(token_docs, n_max=spec.n_max, min_df=spec.min_df)
    matrix = docs_matrix(token_docs, vocab)
    if spec.svd_k is not None:
        k = min(spec.svd_k, min(matrix.shape))
        svd = fit_truncated_svd(matrix, k=k, seed=spec.seed)
        X = np.asarray(matrix @ svd.components.T)
    else:
        X = matrix.toarray()
    return vocab, svd, table, X


def _train_classifier(spec: PipelineSpec, X: np.ndarray, y: np.ndarray):
    if spec.classifier == "logreg":
        model = train_logreg(
            X,
            y,
            penalty=spec.penalty,
            C=spec.C,
            class_weight=spec.class_weight,
            tol=spec.tol,
            max_iter=spec.max_iter,
            seed=spec.seed,
        )
        return model, None
    if spec.classifier == "svm":
        return train_linear_svm(
            X, y, C=spec.C, tol=spec.tol, max_epochs=spec.max_epochs, seed=spec.seed
        )
    model = train_random_forest(
        X,
        y,
        n_estimators=spec.n_estimators,
        criterion=spec.criterion,
        class_weight=spec.class_weight if spec.class_weight == "balanced_subsample" else None,
        max_features=spec.max_features,
        seed=spec.seed,
    )
    return model, None


def data_fingerprint(texts: Sequence[str], labels: Sequence[int]) -> str:
    digest = hashlib.sha256()
    for text, label in zip(texts, labels):
        digest.update(text.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(str(int(label)).encode())
        digest.update(b"\x01")
    return digest.hexdigest()[:16]


def fit_pipeline(spec: PipelineSpec, texts: Sequence[str], labels: Sequence[int]) -> TrainedPipeline:
    spec.validate()
    if len(texts) != len(labels):
        raise DataError("texts and labels differ in length")
    if len(texts) == 0:
        raise DataError("no training examples")
    tok_cfg, stop, lemmas = spec.prep.build()
    token_docs = [textprep.preprocess(t, tok_cfg, stop, lemmas) for t in texts]
    y = np.asarray(labels, dtype=np.int64)
    vocab, svd, table, X = _build_features(spec, token_docs)
    model, calibrator = _train_classifier(spec, X, y)
    return TrainedPipeline(
        spec=spec,
        vocab=vocab,
        svd=svd,
        embeddings=table,
        model=model,
        calibrator=calibrator,
        data_fingerprint=data_fingerprint(texts, labels),
    )


def save_pipeline(pipeline: TrainedPipeline, path: str | Path) -> None:
    if isinstance(pipeline.model, Forest):
        model_kind, model_dict = "forest", pipeline.model.to_dict()
    else:
        model_kind, model_dict = "linear", pipeline.model.to_dict()
    envelope = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "spec": pipeline.spec.to_dict(),
        "vocabulary": pipeline.vocab.to_dict() if pipeline.vocab else None,
        "svd": pipeline.svd.to_dict() if pipeline.svd else None,
        "embeddings": pipeline.embeddings.to_dict() if pipeline.embeddings else None,
        "classifier_kind": model_kind,
        "classifier": model_dict,
        "calibrator": pipeline.calibrator.to_dict() if pipeline.calibrator else None,
        "threshold": pipeline.threshold,
        "metadata": {
            "seed": pipeline.spec.seed,
            "data_fingerprint": pipeline.data_fingerprint,
            "config_fingerprint": pipeline.spec.fingerprint,
        },
    }
    Path(path).write_text(json.dumps(envelope, ensure_ascii=False), encoding="utf-8")


def load_pipeline(path: str | Path) -> TrainedPipeline:
    envelope = json.loads(Path(path).read_text(encoding="utf-8"))
    if envelope.get("format") != FORMAT_NAME:
        raise DataError(f"not a pipeline file: {path}")
    if envelope.get("version") != FORMAT_VERSION:
        raise DataError(f"unsupported pipeline version {envelope.get('version')}")
    spec = PipelineSpec.from_dict(envelope["spec"])
    model: LinearModel | Forest
    if envelope["classifier_kind"] == "forest":
        model = Forest.from_dict(envelope["classifier"])
    else:
        model = LinearModel.from_dict(envelope["classifier"])
    return TrainedPipeline(
        spec=spec,
        vocab=Vocabulary.from_dict(envelope["vocabulary"]) if envelope["vocabulary"] else None,
        svd=SvdProjection.from_dict(envelope["svd"]) if envelope["svd"] else None,
        embeddings=EmbeddingTable.from_dict(envelope["embeddings"]) if envelope["embeddings"] else None,
        model=model,
        calibrator=PlattCalibrator.from_dict(envelope["calibrator"]) if envelope["calibrator"] else None,
        data_fingerprint=envelope["metadata"]["data_fingerprint"],
    )
