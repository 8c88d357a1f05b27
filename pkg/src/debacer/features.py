"""Fitted text-to-vector transforms: word and n-gram count vocabularies,
sparse count vectors, and averaged-embedding sentences.

Counts are raw - no TF-IDF or other weighting. The discriminative signal
in moderated debates is the presence of specific trigger expressions, so
frequency reweighting buys nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, EmptyCorpus

# n-gram parts are joined with a space: the tokenizer only emits
# letters/digits/hyphens, so a space can never occur inside a token
NGRAM_SEP = " "


def iter_ngrams(tokens: Sequence[str], n_max: int) -> Iterable[str]:
    """All contiguous n-grams with 1 <= n <= n_max, joined with NGRAM_SEP."""
    for n in range(1, n_max + 1):
        for i in range(len(tokens) - n + 1):
            yield NGRAM_SEP.join(tokens[i : i + n])


@dataclass(frozen=True)
class Vocabulary:
    """Frozen n-gram -> dense column index map with document frequencies."""

    index: dict[str, int]
    doc_freq: tuple[int, ...]
    n_max: int
    min_df: int

    @property
    def size(self) -> int:
        return len(self.index)

    def to_dict(self) -> dict:
        entries = sorted(self.index.items(), key=lambda kv: kv[1])
        return {
            "entries": [e for e, _ in entries],
            "doc_freq": list(self.doc_freq),
            "n_max": self.n_max,
            "min_df": self.min_df,
        }

    @staticmethod
    def from_dict(d: dict) -> "Vocabulary":
        return Vocabulary(
            index={e: i for i, e in enumerate(d["entries"])},
            doc_freq=tuple(d["doc_freq"]),
            n_max=int(d["n_max"]),
            min_df=int(d["min_df"]),
        )


@dataclass(eq=False)
class SparseVector:
    """Sorted (index, value) pairs over a fixed dimension; values > 0."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.indices.shape != self.values.shape:
            raise DimensionMismatch("indices/values length mismatch")
        if self.indices.size:
            if np.any(np.diff(self.indices) <= 0):
                raise DimensionMismatch("indices must be strictly ascending")
            if self.indices[-1] >= self.dim or self.indices[0] < 0:
                raise DimensionMismatch("index out of range")
            if np.any(self.values <= 0):
                raise DimensionMismatch("values must be positive")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseVector)
            and self.dim == other.dim
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out


def _fit_vocab(token_docs: Sequence[Sequence[str]], n_max: int, min_df: int) -> Vocabulary:
    if not token_docs:
        raise EmptyCorpus("need at least one document")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: dict[str, int] = {}
    for tokens in token_docs:
        for gram in set(iter_ngrams(tokens, n_max)):
            df[gram] = df.get(gram, 0) + 1
    kept = sorted(g for g, count in df.items() if count >= min_df)
    return Vocabulary(
        index={g: i for i, g in enumerate(kept)},
        doc_freq=tuple(df[g] for g in kept),
        n_max=n_max,
        min_df=min_df,
    )


def fit_bow(token_docs: Sequence[Sequence[str]], min_df: int = 1) -> Vocabulary:
    """Unigram vocabulary in lexicographic order."""
    return _fit_vocab(token_docs, n_max=1, min_df=min_df)


def fit_bong(token_docs: Sequence[Sequence[str]], n_max: int = 3, min_df: int = 1) -> Vocabulary:
    """Vocabulary over all contiguous n-grams, 1 <= n <= n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return _fit_vocab(token_docs, n_max=n_max, min_df=min_df)


def transform_counts(tokens: Sequence[str], vocab: Vocabulary) -> SparseVector:
    """Raw in-vocabulary n-gram counts; out-of-vocabulary grams ignored."""
    counts: dict[int, float] = {}
    for gram in iter_ngrams(tokens, vocab.n_max):
        col = vocab.index.get(gram)
        if col is not None:
            counts[col] = counts.get(col, 0.0) + 1.0
    if not counts:
        return SparseVector(np.empty(0, dtype=np.int64), np.empty(0), vocab.size)
    cols = np.array(sorted(counts), dtype=np.int64)
    return SparseVector(cols, np.array([counts[c] for c in cols]), vocab.size)


def docs_matrix(token_docs: Sequence[Sequence[str]], vocab: Vocabulary) -> sp.csr_matrix:
    """Stack count vectors into a docs x V CSR matrix."""
    indptr = [0]
    indices: list[np.ndarray] = []
    values: list[np.ndarray] = []
    for tokens in token_docs:
        vec = transform_counts(tokens, vocab)
        indices.append(vec.indices)
        values.append(vec.values)
        indptr.append(indptr[-1] + vec.indices.size)
    data = np.concatenate(values) if values else np.empty(0)
    cols = np.concatenate(indices) if indices else np.empty(0, dtype=np.int64)
    return sp.csr_matrix((data, cols, np.array(indptr)), shape=(len(token_docs), vocab.size))


# ---------------------------------------------------------------------------
# embedding sentences


@dataclass(eq=False)
class EmbeddingTable:
    """token -> dense vector map with the training hyperparameters that
    produced it (including the per-epoch loss curve)."""

    vectors: dict[str, np.ndarray]
    dim: int
    hyperparams: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "tokens": list(self.vectors),
            "rows": [self.vectors[t].tolist() for t in self.vectors],
            "hyperparams": self.hyperparams,
        }

    @staticmethod
    def from_dict(d: dict) -> "EmbeddingTable":
        vectors = {
            t: np.asarray(row, dtype=np.float64)
            for t, row in zip(d["tokens"], d["rows"])
        }
        return EmbeddingTable(vectors=vectors, dim=int(d["dim"]),
                              hyperparams=dict(d.get("hyperparams", {})))


def embed_sentence(tokens: Sequence[str], table: EmbeddingTable) -> np.ndarray:
    """Arithmetic mean of in-table token vectors; all-OOV or empty input
    embeds to the zero vector."""
    rows = [table.vectors[t] for t in tokens if t in table.vectors]
    if not rows:
        return np.zeros(table.dim)
    return np.mean(rows, axis=0)
