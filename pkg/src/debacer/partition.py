"""Partition agenda items into subject-coherent speech blocks.

One pass over each agenda item: a new block begins exactly before each
speech that (a) comes from the moderator and (b) the classifier marks as
a subject interruption; that speech opens the new block. Everything else
joins the current block. The trailing block is flushed at the end. An
interruption at index 0 would create an empty leading block; it is
suppressed, so blocks are never empty and always cover the item.

Every moderator decision is recorded with its probability so a human
reviewing the partition can see why a boundary was (or wasn't) drawn.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import AgendaItem, Corpus, Speech, SpeechBlock, save_blocks, select_agenda
from .pipeline import TrainedPipeline


@dataclass(frozen=True)
class ModeratorDecision:
    index: int  # position within the agenda item
    order: int  # speaking order (corpus key part)
    probability: float
    is_interruption: bool


@dataclass
class PartitionResult:
    minute_id: str
    agenda_label: str
    blocks: list[SpeechBlock]
    classifier_fingerprint: str
    decisions: list[ModeratorDecision] = field(default_factory=list)

    @property
    def key(self):
        return (self.minute_id, self.agenda_label)

    def to_dict(self) -> dict:
        return {
            "minute_id": self.minute_id,
            "agenda_item": self.agenda_label,
            "blocks": [[b.start, b.end] for b in self.blocks],
            "classifier_fingerprint": self.classifier_fingerprint,
            "decisions": [
                {
                    "index": d.index,
                    "order": d.order,
                    "probability": d.probability,
                    "is_interruption": d.is_interruption,
                }
                for d in self.decisions
            ],
        }


def is_moderator(speech: Speech) -> bool:
    """The database carries the marker; this just reads it."""
    return speech.is_moderator


def is_subject_interruption(pipeline: TrainedPipeline, text: str) -> bool:
    return pipeline.predict_proba(text) >= pipeline.threshold


def partition_agenda(item: AgendaItem, pipeline: TrainedPipeline) -> PartitionResult:
    blocks: list[SpeechBlock] = []
    decisions: list[ModeratorDecision] = []
    start = 0
    for idx, speech in enumerate(item.speeches):
        if is_moderator(speech):
            prob = pipeline.predict_proba(speech.text)
            interrupts = prob >= pipeline.threshold
            decisions.append(
                ModeratorDecision(
                    index=idx, order=speech.order,
                    probability=prob, is_interruption=interrupts,
                )
            )
            if interrupts and idx > 0:
                blocks.append(SpeechBlock(start, idx - 1))
                start = idx
    if item.speeches:
        blocks.append(SpeechBlock(start, len(item.speeches) - 1))
    return PartitionResult(
        minute_id=item.minute_id,
        agenda_label=item.label,
        blocks=blocks,
        classifier_fingerprint=pipeline.fingerprint,
        decisions=decisions,
    )


def partition_corpus(
    corpus: Corpus, pipeline: TrainedPipeline, agenda_label: str
) -> tuple[Corpus, list[tuple[str, str]]]:
    """Partition every matching agenda item; per-item failures are
    collected as (minute_id, message) and the rest still processed."""
    failures: list[tuple[str, str]] = []
    for item in select_agenda(corpus, agenda_label):
        try:
            result = partition_agenda(item, pipeline)
            if result.blocks:
                save_blocks(corpus, item.key, result)
        except Exception as exc:
            failures.append((item.minute_id, str(exc)))
    return corpus, failures


def partition_report_lines(corpus: Corpus, result: PartitionResult, excerpt_words: int = 12) -> list[str]:
    """One line per block: range, opening speaker, first-sentence excerpt."""
    item = corpus.agenda_item(result.key)
    lines = []
    for block in result.blocks:
        opener = item.speeches[block.start]
        words = opener.text.split()
        excerpt = " ".join(words[:excerpt_words]) + (" ..." if len(words) > excerpt_words else "")
        lines.append(
            f"[{block.start:>4}..{block.end:>4}] ({len(block):>3} speeches) "
            f"{opener.debater}: {excerpt}"
        )
    return lines
