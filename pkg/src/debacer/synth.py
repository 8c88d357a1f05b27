"""Deterministic synthetic moderated-debate generator.

Builds a corpus with the statistical shape of a real parliamentary
annotation exercise: each agenda item is a concatenation of speech blocks
with geometric lengths, the chair opens the item and grants the floor
before every debater speech (continuation phrases, label 0), and between
blocks utters a phrase from the trigger lexicon (label 1). Debater
speeches draw words from a per-block topic pool, so interruption phrases
are the load-bearing signal while topical content shifts at boundaries.

Class imbalance emerges naturally: one trigger per interior block
boundary against a floor grant per debater speech. With the defaults
(blocks 3..6 per item, mean block length 10) roughly 7% of moderator
speeches are interruptions, matching the shape of a real annotated
legislature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

from .corpus import AgendaKey, Corpus, Speech, SpeechBlock, SpeechKey, build_corpus
from .errors import InvalidConfig
from .randomness import stream

POLITICAL_STATEMENTS = "political statements"

DEFAULT_TRIGGERS = (
    "passamos ao ponto seguinte da ordem do dia",
    "vamos mudar de assunto srs deputados",
    "segue-se uma nova declaracao politica no plenario",
    "encerrado este tema passamos a proxima declaracao",
    "declaro aberto um novo periodo de declaracoes politicas",
)

DEFAULT_CONTINUATIONS = (
    "tem a palavra o senhor deputado",
    "para responder tem a palavra o senhor deputado",
    "faca favor de continuar senhor deputado",
    "para um pedido de esclarecimento tem a palavra",
    "agradeco ao senhor deputado a sua intervencao",
    "queira concluir senhor deputado",
)

# topic-neutral filler words sprinkled into debater speech
FILLERS = (
    "governo",
    "pais",
    "medida",
    "proposta",
    "lei",
    "orcamento",
    "importante",
    "questao",
    "resposta",
    "situacao",
)

PARTIES = ("PA", "PB", "PC", "PD")

_SYLLABLES = (
    "ba", "ce", "di", "fo", "gu", "la", "me", "ni", "po", "ra",
    "se", "ti", "vo", "zu", "ca", "del", "mor", "fin", "tor", "bel",
)


@dataclass(frozen=True)
class SynthConfig:
    n_minutes: int = 10
    n_debaters: int = 20
    moderator_id: str = "presidente"
    mean_block_length: float = 10.0
    trigger_lexicon: tuple[str, ...] = DEFAULT_TRIGGERS
    continuation_lexicon: tuple[str, ...] = DEFAULT_CONTINUATIONS
    noise_prob: float = 0.1
    topic_vocab_size: int = 180
    seed: int = 0
    # how many topic pools the content vocabulary is split into, and the
    # inclusive range of blocks per agenda item
    n_topics: int = 6
    blocks_range: tuple[int, int] = (3, 6)

    def validate(self) -> None:
        if self.n_minutes < 1 or self.n_debaters < 1:
            raise InvalidConfig("n_minutes and n_debaters must be positive")
        if self.mean_block_length <= 0:
            raise InvalidConfig("mean_block_length must be positive")
        if not 0.0 <= self.noise_prob < 0.5:
            raise InvalidConfig("noise_prob must lie in [0, 0.5)")
        if set(self.trigger_lexicon) & set(self.continuation_lexicon):
            raise InvalidConfig("trigger and continuation lexicons must be disjoint")
        if not self.trigger_lexicon or not self.continuation_lexicon:
            raise InvalidConfig("lexicons must be non-empty")
        if self.n_topics < 1 or self.topic_vocab_size < self.n_topics:
            raise InvalidConfig("topic_vocab_size must cover n_topics")
        lo, hi = self.blocks_range
        if not 1 <= lo <= hi:
            raise InvalidConfig("blocks_range must satisfy 1 <= lo <= hi")


@dataclass
class SynthGroundTruth:
    """What the generator knows: the true interruption label of every
    moderator speech in the target agenda items, and the true blocks."""

    labels: dict[SpeechKey, int] = field(default_factory=dict)
    boundaries: dict[AgendaKey, list[SpeechBlock]] = field(default_factory=dict)


def topic_vocabulary(config: SynthConfig) -> list[list[str]]:
    """Deterministic pseudo-word pools, one per topic, disjoint by
    construction (each word carries its topic tag)."""
    rng = stream(config.seed, 1)
    per_topic = max(config.topic_vocab_size // config.n_topics, 1)
    pools: list[list[str]] = []
    for topic in range(config.n_topics):
        words = []
        for _ in range(per_topic):
            stem = "".join(
                _SYLLABLES[i] for i in rng.integers(0, len(_SYLLABLES), size=3)
            )
            words.append(f"{stem}t{topic}")
        pools.append(words)
    return pools


def _pick(rng: np.random.Generator, seq):
    return seq[int(rng.integers(0, len(seq)))]


class _MinuteBuilder:
    def __init__(self, config: SynthConfig, minute_id: str, minute_date: date,
                 pools: list[list[str]], truth: SynthGroundTruth):
        self.config = config
        self.minute_id = minute_id
        self.date = minute_date
        self.pools = pools
        self.all_content = [w for pool in pools for w in pool]
        self.content_set = set(self.all_content)
        self.truth = truth
        self.speeches: list[Speech] = []
        self.order = 0

    def noisy(self, words: list[str], rng) -> list[str]:
        # swap content words with probability noise_prob; phrase words,
        # filler words and debater ids are left intact
        prob = self.config.noise_prob
        return [
            _pick(rng, self.all_content)
            if w in self.content_set and rng.random() < prob
            else w
            for w in words
        ]

    def emit(self, debater: str, party: str | None, words: list[str],
             agenda: str, label: int | None) -> None:
        self.speeches.append(
            Speech(
                minute_id=self.minute_id,
                date=self.date,
                order=self.order,
                debater=debater,
                party=party,
                text=" ".join(words),
                agenda_item=agenda,
                is_moderator=debater == self.config.moderator_id,
            )
        )
        if label is not None:
            self.truth.labels[(self.minute_id, self.order)] = label
        self.order += 1

    def political_statements(self, rng: np.random.Generator) -> None:
        cfg = self.config
        debaters = [f"dep{i:02d}" for i in range(cfg.n_debaters)]
        lo, hi = cfg.blocks_range
        n_blocks = int(rng.integers(lo, hi + 1))
        item_start = self.order
        block_starts: list[int] = []
        topic = int(rng.integers(0, cfg.n_topics))

        for b in range(n_blocks):
            block_starts.append(self.order - item_start)
            if b == 0:
                # the item opens with an ordinary floor grant, never a trigger
                self.emit(cfg.moderator_id, None,
                          _pick(rng, cfg.continuation_lexicon).split(),
                          POLITICAL_STATEMENTS, 0)
            else:
                if cfg.n_topics > 1:
                    shifted = int(rng.integers(0, cfg.n_topics - 1))
                    topic = shifted if shifted < topic else shifted + 1
                pool = self.pools[topic]
                extra = [_pick(rng, pool) for _ in range(int(rng.integers(0, 3)))]
                words = self.noisy(_pick(rng, cfg.trigger_lexicon).split() + extra, rng)
                self.emit(cfg.moderator_id, None, words, POLITICAL_STATEMENTS, 1)
            pool = self.pools[topic]
            for _ in range(int(rng.geometric(1.0 / cfg.mean_block_length))):
                debater = _pick(rng, debaters)
                party = PARTIES[debaters.index(debater) % len(PARTIES)]
                grant = _pick(rng, cfg.continuation_lexicon).split() + [debater]
                self.emit(cfg.moderator_id, None, grant, POLITICAL_STATEMENTS, 0)
                n_words = int(rng.integers(8, 15))
                words = [
                    _pick(rng, pool) if rng.random() < 0.7 else _pick(rng, FILLERS)
                    for _ in range(n_words)
                ]
                self.emit(debater, party, self.noisy(words, rng),
                          POLITICAL_STATEMENTS, None)

        item_len = self.order - item_start
        blocks = [
            SpeechBlock(
                start,
                (block_starts[i + 1] - 1) if i + 1 < len(block_starts) else item_len - 1,
            )
            for i, start in enumerate(block_starts)
        ]
        self.truth.boundaries[(self.minute_id, POLITICAL_STATEMENTS)] = blocks

    def announcements(self, rng: np.random.Generator) -> None:
        # a short second agenda item so label selection has something to skip
        cfg = self.config
        debaters = [f"dep{i:02d}" for i in range(cfg.n_debaters)]
        for j in range(3):
            if j == 0:
                self.emit(cfg.moderator_id, None,
                          ["anuncio", "da", "votacao", "administrativa"],
                          "announcements", None)
            else:
                debater = _pick(rng, debaters)
                party = PARTIES[debaters.index(debater) % len(PARTIES)]
                self.emit(debater, party,
                          ["registo", "da", "posicao", "numero",
                           str(int(rng.integers(1, 99)))],
                          "announcements", None)


def generate_synthetic(config: SynthConfig) -> tuple[Corpus, SynthGroundTruth]:
    """Generate a corpus plus its ground truth. Deterministic per seed."""
    config.validate()
    pools = topic_vocabulary(config)
    truth = SynthGroundTruth()
    speeches: list[Speech] = []
    for m in range(config.n_minutes):
        rng = stream(config.seed, 2, m)
        builder = _MinuteBuilder(
            config, f"m{m:03d}", date(2020, 9, 16) + timedelta(days=7 * m), pools, truth
        )
        builder.political_statements(rng)
        builder.announcements(rng)
        speeches.extend(builder.speeches)
    return build_corpus(speeches), truth
