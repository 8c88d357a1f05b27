"""Deterministic text preprocessing: tokenize, drop stopwords, lemmatize.

The lemmatizer is a lexicon plus ordered suffix rules loaded from data
files, not a statistical tagger - deterministic and language-swappable.
A Portuguese starter table ships with the package; point the loaders at
other files to switch language.
"""

from __future__ import annotations

import importlib.resources
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "TokenizerConfig",
    "LemmaTable",
    "tokenize",
    "remove_stopwords",
    "lemmatize",
    "preprocess",
    "load_stopwords",
    "load_lemma_table",
    "default_stopwords",
    "default_lemma_table",
]

# maximal runs of Unicode letters/digits, single hyphens allowed inside
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    min_token_len: int = 2

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")


DEFAULT_TOKENIZER = TokenizerConfig()


def tokenize(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    """NFC-normalize, split into letter/digit runs (hyphens inside words
    preserved), lowercase, drop tokens shorter than min_token_len."""
    text = unicodedata.normalize("NFC", text)
    if config.lowercase:
        text = text.lower()
    return [t for t in _TOKEN_RE.findall(text) if len(t) >= config.min_token_len]


def remove_stopwords(tokens: Sequence[str], stopwords: frozenset[str] | set[str]) -> list[str]:
    return [t for t in tokens if t not in stopwords]


@dataclass(frozen=True)
class LemmaTable:
    """Surface-form lookup backed by ordered suffix rules.

    Resolution order: exact table hit; otherwise the longest matching
    suffix rule rewrites the token and the result gets one more table
    lookup; otherwise identity. A rule never empties a token.
    """

    table: dict[str, str]
    suffix_rules: tuple[tuple[str, str], ...]

    def lemma(self, token: str) -> str:
        hit = self.table.get(token)
        if hit is not None:
            return hit
        best: tuple[str, str] | None = None
        for suffix, repl in self.suffix_rules:
            if token.endswith(suffix) and len(suffix) < len(token):
                if best is None or len(suffix) > len(best[0]):
                    best = (suffix, repl)
        if best is None:
            return token
        rewritten = token[: len(token) - len(best[0])] + best[1]
        if not rewritten:
            return token
        return self.table.get(rewritten, rewritten)


EMPTY_LEMMAS = LemmaTable(table={}, suffix_rules=())


def lemmatize(tokens: Sequence[str], lemma_table: LemmaTable) -> list[str]:
    return [lemma_table.lemma(t) for t in tokens]


def preprocess(
    text: str,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
    stopwords: frozenset[str] | set[str] = frozenset(),
    lemma_table: LemmaTable = EMPTY_LEMMAS,
) -> list[str]:
    """tokenize -> remove_stopwords -> lemmatize."""
    return lemmatize(remove_stopwords(tokenize(text, config), stopwords), lemma_table)


# ---------------------------------------------------------------------------
# data-file loaders


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line, UTF-8; blank lines and #-comments skipped."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word.lower())
    return frozenset(words)


def _read_tsv(lines: Iterable[str]) -> list[tuple[str, str]]:
    rows = []
    for line in lines:
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        left, _, right = line.partition("\t")
        rows.append((left, right))
    return rows


def load_lemma_table(lemma_path: str | Path, rules_path: str | Path | None = None) -> LemmaTable:
    """Lemma TSV `surface<TAB>lemma`; rules TSV `suffix<TAB>replacement`,
    kept in file order."""
    with open(lemma_path, encoding="utf-8") as fh:
        table = dict(_read_tsv(fh))
    rules: tuple[tuple[str, str], ...] = ()
    if rules_path is not None:
        with open(rules_path, encoding="utf-8") as fh:
            rules = tuple(_read_tsv(fh))
    return LemmaTable(table=table, suffix_rules=rules)


def _data_file(name: str):
    return importlib.resources.files("debacer").joinpath("data", name)


def default_stopwords() -> frozenset[str]:
    words = set()
    for line in _data_file("stopwords_pt.txt").read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


def default_lemma_table() -> LemmaTable:
    table = dict(_read_tsv(_data_file("lemmas_pt.tsv").read_text(encoding="utf-8").splitlines()))
    rules = tuple(_read_tsv(_data_file("suffix_rules_pt.tsv").read_text(encoding="utf-8").splitlines()))
    return LemmaTable(table=table, suffix_rules=rules)
