"""Transcript data model and structured-file ingestion.

A corpus is a sequence of minutes; each minute is a sequence of agenda
items; each agenda item is a sequence of speeches ordered by speaking
order. Two side stores ride along: binary interruption labels keyed by
(minute_id, order), and partition results keyed by (minute_id, agenda
label).

File formats:
  transcripts: JSONL (one object per line) or CSV, both with the exact
    keys minute_id, date, order, debater, party, text, agenda_item,
    is_moderator
  labels: CSV with header minute_id,order,label (label in {0,1})
  blocks: JSONL {"minute_id":..., "agenda_item":..., "blocks":[[s,e],...]}

The corpus is immutable for readers once loaded; label/block mutations
must go through a single writer.
"""

from __future__ import annotations

import csv
import datetime
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import DataError, DuplicateOrder, EmptyText, InvalidPartition, MissingField

if TYPE_CHECKING:
    from .partition import PartitionResult

SpeechKey = tuple[str, int]
AgendaKey = tuple[str, str]

SCHEMA_FIELDS = (
    "minute_id",
    "date",
    "order",
    "debater",
    "party",
    "text",
    "agenda_item",
    "is_moderator",
)


@dataclass(frozen=True)
class Speech:
    """One uttered speech: a debater, their word sequence, and the marker
    telling whether the debater is the current chairperson."""

    minute_id: str
    date: datetime.date
    order: int
    debater: str
    party: str | None
    text: str
    agenda_item: str
    is_moderator: bool

    @property
    def key(self) -> SpeechKey:
        return (self.minute_id, self.order)


@dataclass(frozen=True)
class SpeechBlock:
    """Contiguous run of speech indices (inclusive) sharing one subject."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start <= self.end):
            raise InvalidPartition(f"bad block [{self.start}, {self.end}]")

    def __len__(self) -> int:
        return self.end - self.start + 1


@dataclass
class AgendaItem:
    minute_id: str
    label: str
    speeches: list[Speech]

    @property
    def key(self) -> AgendaKey:
        return (self.minute_id, self.label)


@dataclass
class Minute:
    minute_id: str
    date: datetime.date
    agenda_items: list[AgendaItem]


@dataclass
class Corpus:
    minutes: list[Minute]
    label_store: dict[SpeechKey, int] = field(default_factory=dict)
    block_store: dict[AgendaKey, "PartitionResult"] = field(default_factory=dict)

    def iter_speeches(self) -> Iterable[Speech]:
        for minute in self.minutes:
            for item in minute.agenda_items:
                yield from item.speeches

    def iter_agenda_items(self) -> Iterable[AgendaItem]:
        for minute in self.minutes:
            yield from minute.agenda_items

    def speech(self, key: SpeechKey) -> Speech:
        for minute in self.minutes:
            if minute.minute_id != key[0]:
                continue
            for item in minute.agenda_items:
                for speech in item.speeches:
                    if speech.order == key[1]:
                        return speech
        raise KeyError(key)

    def agenda_item(self, key: AgendaKey) -> AgendaItem:
        for minute in self.minutes:
            if minute.minute_id != key[0]:
                continue
            for item in minute.agenda_items:
                if item.label == key[1]:
                    return item
        raise KeyError(key)


def _parse_record(record_no: int, raw: dict) -> Speech:
    for fieldname in SCHEMA_FIELDS:
        if fieldname not in raw or raw[fieldname] is None:
            if fieldname == "party":  # optional field, absent is fine
                continue
            raise MissingField(record_no, fieldname)
    text = str(raw["text"])
    if not text.strip():
        raise EmptyText(record_no)
    try:
        date = datetime.date.fromisoformat(str(raw["date"]))
    except ValueError as exc:
        raise DataError(f"record {record_no}: bad ISO-8601 date {raw['date']!r}") from exc
    try:
        order = int(raw["order"])
    except (TypeError, ValueError) as exc:
        raise DataError(f"record {record_no}: bad order {raw['order']!r}") from exc
    if order < 0:
        raise DataError(f"record {record_no}: negative order {order}")
    is_mod = raw["is_moderator"]
    if isinstance(is_mod, str):
        if is_mod.strip().lower() in ("true", "1", "yes"):
            is_mod = True
        elif is_mod.strip().lower() in ("false", "0", "no"):
            is_mod = False
        else:
            raise DataError(f"record {record_no}: bad is_moderator {is_mod!r}")
    party = raw.get("party")
    if party is not None:
        party = str(party) or None
    return Speech(
        minute_id=str(raw["minute_id"]),
        date=date,
        order=order,
        debater=str(raw["debater"]),
        party=party,
        text=text,
        agenda_item=str(raw["agenda_item"]),
        is_moderator=bool(is_mod),
    )


def _iter_records(path: Path, fmt: str) -> Iterable[dict]:
    if fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)
    elif fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                if row.get("party") == "":
                    row["party"] = None
                yield row
    else:
        raise DataError(f"unknown corpus format {fmt!r}")


def load_corpus(path: str | Path, format: str = "jsonl") -> Corpus:
    """Read a transcript file and group it minute -> agenda item -> speech.

    Rejects nothing silently: schema violations, duplicated speaking
    orders and empty texts all raise.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    speeches: list[Speech] = []
    seen_orders: set[SpeechKey] = set()
    for record_no, raw in enumerate(_iter_records(path, format), start=1):
        speech = _parse_record(record_no, raw)
        if speech.key in seen_orders:
            raise DuplicateOrder(speech.minute_id, speech.order)
        seen_orders.add(speech.key)
        speeches.append(speech)
    return build_corpus(speeches)


def build_corpus(speeches: Sequence[Speech]) -> Corpus:
    """Group parsed speeches, preserving first-appearance order of minutes
    and agenda items, sorting speeches by speaking order."""
    minutes: dict[str, Minute] = {}
    items: dict[AgendaKey, AgendaItem] = {}
    for speech in speeches:
        minute = minutes.get(speech.minute_id)
        if minute is None:
            minute = Minute(speech.minute_id, speech.date, [])
            minutes[speech.minute_id] = minute
        key = (speech.minute_id, speech.agenda_item)
        item = items.get(key)
        if item is None:
            item = AgendaItem(speech.minute_id, speech.agenda_item, [])
            items[key] = item
            minute.agenda_items.append(item)
        item.speeches.append(speech)
    for item in items.values():
        item.speeches.sort(key=lambda s: s.order)
    return Corpus(minutes=list(minutes.values()))


def save_corpus(corpus: Corpus, path: str | Path, format: str = "jsonl") -> None:
    path = Path(path)
    rows = [
        {
            "minute_id": s.minute_id,
            "date": s.date.isoformat(),
            "order": s.order,
            "debater": s.debater,
            "party": s.party,
            "text": s.text,
            "agenda_item": s.agenda_item,
            "is_moderator": s.is_moderator,
        }
        for s in corpus.iter_speeches()
    ]
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    elif format == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=SCHEMA_FIELDS)
            writer.writeheader()
            for row in rows:
                if row["party"] is None:
                    row["party"] = ""
                writer.writerow(row)
    else:
        raise DataError(f"unknown corpus format {format!r}")


def select_agenda(corpus: Corpus, label: str) -> list[AgendaItem]:
    """All agenda items with the given label, in minute order."""
    return [item for item in corpus.iter_agenda_items() if item.label == label]


def validate_blocks(blocks: Sequence[SpeechBlock], n_speeches: int) -> None:
    """Check the partition invariants: blocks pairwise disjoint, their
    concatenation covers 0..n-1 in order, and no block is empty."""
    if n_speeches == 0:
        if blocks:
            raise InvalidPartition("blocks present for an empty agenda item")
        return
    if not blocks:
        raise InvalidPartition("no blocks for a non-empty agenda item")
    expected_start = 0
    for block in blocks:
        if block.start != expected_start:
            kind = "gap" if block.start > expected_start else "overlap"
            raise InvalidPartition(
                f"{kind} at index {expected_start}: next block starts at {block.start}"
            )
        expected_start = block.end + 1
    if expected_start != n_speeches:
        raise InvalidPartition(
            f"blocks cover 0..{expected_start - 1} but the item has {n_speeches} speeches"
        )


def save_blocks(corpus: Corpus, agenda_key: AgendaKey, partition: "PartitionResult") -> Corpus:
    """Store a validated partition for one agenda item. Idempotent."""
    item = corpus.agenda_item(agenda_key)
    validate_blocks(partition.blocks, len(item.speeches))
    corpus.block_store[agenda_key] = partition
    return corpus


# ---------------------------------------------------------------------------
# label / block side stores


def load_labels(path: str | Path, corpus: Corpus | None = None) -> dict[SpeechKey, int]:
    """Read the labels CSV (minute_id,order,label). When a corpus is given,
    every key must resolve to an existing speech."""
    labels: dict[SpeechKey, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row_no, row in enumerate(reader, start=1):
            try:
                key = (row["minute_id"], int(row["order"]))
                value = int(row["label"])
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"labels row {row_no}: bad record {row!r}") from exc
            if value not in (0, 1):
                raise DataError(f"labels row {row_no}: label must be 0 or 1, got {value}")
            labels[key] = value
    if corpus is not None:
        known = {s.key for s in corpus.iter_speeches()}
        unknown = sorted(set(labels) - known)
        if unknown:
            raise DataError(f"labels reference unknown speeches: {unknown[:5]}")
        corpus.label_store.update(labels)
    return labels


def save_labels(labels: dict[SpeechKey, int], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["minute_id", "order", "label"])
        for (minute_id, order), value in sorted(labels.items()):
            writer.writerow([minute_id, order, value])


def save_blocks_file(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (minute_id, agenda_label), partition in sorted(corpus.block_store.items()):
            fh.write(
                json.dumps(
                    {
                        "minute_id": minute_id,
                        "agenda_item": agenda_label,
                        "blocks": [[b.start, b.end] for b in partition.blocks],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_blocks_file(path: str | Path) -> dict[AgendaKey, list[SpeechBlock]]:
    blocks: dict[AgendaKey, list[SpeechBlock]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                key = (row["minute_id"], row["agenda_item"])
                blocks[key] = [SpeechBlock(int(s), int(e)) for s, e in row["blocks"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"blocks line {line_no}: bad record") from exc
    return blocks
