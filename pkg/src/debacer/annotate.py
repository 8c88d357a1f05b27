"""Semi-automatic annotation bootstrap.

The loop: sample a seed set of moderator speeches, label them by hand,
train a bootstrap classifier (random forest on bag-of-words, mirroring
how the original dataset was built), machine-label the rest, then review
suggestions ordered most-uncertain-first until the labels are trusted.

Label sources form a strict precedence - reviewed > human > model - and
a lower source can never overwrite a higher one. Every accepted write
appends to an audit log.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus, Speech, SpeechKey, select_agenda
from .errors import (
    DataError,
    DowngradeForbidden,
    InsufficientLabels,
    NotEnoughSpeeches,
    NotModeratorSpeech,
)
from .pipeline import PipelineSpec, TrainedPipeline, fit_pipeline
from .randomness import stream

SOURCE_RANK = {"model": 0, "human": 1, "reviewed": 2}

BOOTSTRAP_SPEC = PipelineSpec(
    features="bow",
    classifier="forest",
    min_df=1,
    n_estimators=150,
    criterion="gini",
    class_weight="balanced_subsample",
)


@dataclass(frozen=True)
class LabelEntry:
    label: int
    source: str


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    minute_id: str
    order: int
    label: int
    source: str


@dataclass(frozen=True)
class Suggestion:
    key: SpeechKey
    text: str
    probability: float
    uncertainty: float
    previous_text: str | None
    next_text: str | None
    current: LabelEntry | None

    def to_dict(self) -> dict:
        return {
            "minute_id": self.key[0],
            "order": self.key[1],
            "text": self.text,
            "probability": self.probability,
            "uncertainty": self.uncertainty,
            "previous_text": self.previous_text,
            "next_text": self.next_text,
            "current_label": self.current.label if self.current else None,
            "current_source": self.current.source if self.current else None,
        }


@dataclass
class AnnotationState:
    labels: dict[SpeechKey, LabelEntry] = field(default_factory=dict)
    queue: list[Suggestion] = field(default_factory=list)
    model_fingerprint: str | None = None
    audit_log: list[AuditEvent] = field(default_factory=list)

    def counts_by_source(self) -> dict[str, int]:
        out = {"model": 0, "human": 0, "reviewed": 0}
        for entry in self.labels.values():
            out[entry.source] += 1
        return out


def moderator_speeches(corpus: Corpus, agenda_label: str) -> list[Speech]:
    return [
        s
        for item in select_agenda(corpus, agenda_label)
        for s in item.speeches
        if s.is_moderator
    ]


def sample_seed_set(
    corpus: Corpus, agenda_label: str, n: int = 70, seed: int = 0
) -> list[SpeechKey]:
    """Uniform seeded sample of moderator speech keys, no replacement."""
    speeches = moderator_speeches(corpus, agenda_label)
    if len(speeches) < n:
        raise NotEnoughSpeeches(f"{len(speeches)} moderator speeches < requested {n}")
    rng = stream(seed, 91)
    picked = rng.choice(len(speeches), size=n, replace=False)
    return [speeches[i].key for i in sorted(picked)]


def bootstrap_train(
    state: AnnotationState,
    corpus: Corpus,
    agenda_label: str,
    spec: PipelineSpec = BOOTSTRAP_SPEC,
) -> TrainedPipeline:
    """Train on human/reviewed labels only; model labels never feed back
    into training."""
    trusted = {
        key: entry
        for key, entry in state.labels.items()
        if entry.source in ("human", "reviewed")
    }
    for cls in (0, 1):
        if sum(1 for e in trusted.values() if e.label == cls) < 2:
            raise InsufficientLabels(cls)
    by_key = {s.key: s for s in moderator_speeches(corpus, agenda_label)}
    texts, labels = [], []
    for key, entry in sorted(trusted.items()):
        speech = by_key.get(key)
        if speech is None:
            raise DataError(f"label key {key} is not a moderator speech in {agenda_label!r}")
        texts.append(speech.text)
        labels.append(entry.label)
    pipeline = fit_pipeline(spec, texts, labels)
    state.model_fingerprint = pipeline.fingerprint
    return pipeline


def suggest(
    state: AnnotationState,
    corpus: Corpus,
    pipeline: TrainedPipeline,
    agenda_label: str,
    limit: int | None = None,
) -> list[Suggestion]:
    """Score every not-yet-confirmed moderator speech and queue them by
    ascending |p - 0.5| (most uncertain first), with the surrounding
    speeches attached as context. Also stores the model's own label for
    unlabeled speeches so the review loop can audit them."""
    suggestions = []
    for item in select_agenda(corpus, agenda_label):
        for idx, speech in enumerate(item.speeches):
            if not speech.is_moderator:
                continue
            entry = state.labels.get(speech.key)
            if entry is not None and entry.source in ("human", "reviewed"):
                continue
            prob = pipeline.predict_proba(speech.text)
            suggestions.append(
                Suggestion(
                    key=speech.key,
                    text=speech.text,
                    probability=prob,
                    uncertainty=abs(prob - 0.5),
                    previous_text=item.speeches[idx - 1].text if idx > 0 else None,
                    next_text=item.speeches[idx + 1].text if idx + 1 < len(item.speeches) else None,
                    current=entry,
                )
            )
    suggestions.sort(key=lambda s: (s.uncertainty, s.key))
    if limit is not None:
        suggestions = suggestions[:limit]
    state.queue = suggestions
    return suggestions


def machine_label(state: AnnotationState, corpus: Corpus,
                  pipeline: TrainedPipeline, agenda_label: str) -> int:
    """Attach model-source labels to every unconfirmed moderator speech;
    returns how many were written."""
    written = 0
    for speech in moderator_speeches(corpus, agenda_label):
        entry = state.labels.get(speech.key)
        if entry is not None and entry.source in ("human", "reviewed"):
            continue
        label = pipeline.classify(speech.text)
        apply_label(state, corpus, speech.key, label, "model")
        written += 1
    return written


def apply_label(
    state: AnnotationState,
    corpus: Corpus,
    key: SpeechKey,
    label: int,
    source: str,
) -> AnnotationState:
    """Store a label; precedence reviewed > human > model is enforced and
    an audit event appended per accepted write."""
    if source not in SOURCE_RANK:
        raise DataError(f"unknown label source {source!r}")
    if label not in (0, 1):
        raise DataError(f"label must be 0 or 1, got {label!r}")
    try:
        speech = corpus.speech(key)
    except KeyError:
        raise NotModeratorSpeech(f"no speech with key {key}")
    if not speech.is_moderator:
        raise NotModeratorSpeech(f"{key} is not a moderator speech")
    existing = state.labels.get(key)
    if existing is not None and SOURCE_RANK[source] < SOURCE_RANK[existing.source]:
        raise DowngradeForbidden(
            f"{existing.source} label on {key} cannot be overwritten by {source}"
        )
    state.labels[key] = LabelEntry(label=label, source=source)
    state.audit_log.append(
        AuditEvent(
            seq=len(state.audit_log),
            minute_id=key[0],
            order=key[1],
            label=label,
            source=source,
        )
    )
    state.queue = [s for s in state.queue if s.key != key]
    return state


def export_labels_csv(state: AnnotationState) -> str:
    """Labels CSV extended with the source column; round-trips losslessly."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["minute_id", "order", "label", "source"])
    for (minute_id, order), entry in sorted(state.labels.items()):
        writer.writerow([minute_id, order, entry.label, entry.source])
    return buf.getvalue()


def import_labels_csv(text: str) -> AnnotationState:
    state = AnnotationState()
    reader = csv.DictReader(io.StringIO(text))
    for row in reader:
        source = row.get("source") or "human"
        if source not in SOURCE_RANK:
            raise DataError(f"unknown label source {source!r}")
        state.labels[(row["minute_id"], int(row["order"]))] = LabelEntry(
            label=int(row["label"]), source=source
        )
    return state


def save_annotation_csv(state: AnnotationState, path: str | Path) -> None:
    Path(path).write_text(export_labels_csv(state), encoding="utf-8")


def load_annotation_csv(path: str | Path) -> AnnotationState:
    return import_labels_csv(Path(path).read_text(encoding="utf-8"))
