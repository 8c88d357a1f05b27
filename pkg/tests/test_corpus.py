import datetime
import json

import pytest

from debacer.corpus import (
    Speech,
    SpeechBlock,
    build_corpus,
    load_corpus,
    load_labels,
    save_blocks,
    save_corpus,
    save_labels,
    select_agenda,
    validate_blocks,
)
from debacer.errors import (
    DataError,
    DuplicateOrder,
    EmptyText,
    InvalidPartition,
    MissingField,
)
from debacer.partition import PartitionResult
from debacer.synth import POLITICAL_STATEMENTS, SynthConfig, generate_synthetic

RECORD_DATE = datetime.date(2021, 1, 5)

RECORD = {
    "minute_id": "m1",
    "date": "2021-01-05",
    "order": 0,
    "debater": "presidente",
    "party": None,
    "text": "tem a palavra",
    "agenda_item": "political statements",
    "is_moderator": True,
}


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")


def test_load_groups_one_minute_one_item(tmp_path):
    records = [
        dict(RECORD, order=2, text="terceira"),
        dict(RECORD, order=0, text="primeira"),
        dict(RECORD, order=1, text="segunda", debater="dep01", is_moderator=False),
    ]
    path = tmp_path / "c.jsonl"
    write_jsonl(path, records)
    corpus = load_corpus(path)
    assert len(corpus.minutes) == 1
    assert len(corpus.minutes[0].agenda_items) == 1
    speeches = corpus.minutes[0].agenda_items[0].speeches
    assert [s.order for s in speeches] == [0, 1, 2]
    assert speeches[0].text == "primeira"


def test_missing_field(tmp_path):
    bad = {k: v for k, v in RECORD.items() if k != "debater"}
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [bad])
    with pytest.raises(MissingField) as err:
        load_corpus(path)
    assert err.value.field == "debater"


def test_duplicate_order(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [RECORD, dict(RECORD, text="outra")])
    with pytest.raises(DuplicateOrder):
        load_corpus(path)


def test_empty_text(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [dict(RECORD, text="   ")])
    with pytest.raises(EmptyText):
        load_corpus(path)


def test_strict_iso_date(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [dict(RECORD, date="05/01/2021")])
    with pytest.raises(DataError):
        load_corpus(path)


def test_missing_file():
    with pytest.raises(DataError):
        load_corpus("/nonexistent/corpus.jsonl")


def test_csv_round_trip(tmp_path, synth_small):
    corpus, _ = synth_small
    path = tmp_path / "c.csv"
    save_corpus(corpus, path, format="csv")
    again = load_corpus(path, format="csv")
    assert again == corpus


def test_jsonl_round_trip(tmp_path, synth_small):
    corpus, _ = synth_small
    path = tmp_path / "c.jsonl"
    save_corpus(corpus, path)
    assert load_corpus(path) == corpus


def test_select_agenda():
    records = []
    for i, label in enumerate(["political statements", "votes", "political statements"]):
        records.append(Speech(f"m{i}", RECORD_DATE, 0, "d", None, "x y", label, False))
    corpus = build_corpus(records)
    picked = select_agenda(corpus, "political statements")
    assert [item.label for item in picked] == ["political statements"] * 2
    assert [item.minute_id for item in picked] == ["m0", "m2"]
    assert select_agenda(corpus, "missing") == []


def test_select_agenda_synthetic_count():
    corpus, _ = generate_synthetic(SynthConfig(n_minutes=10, seed=3))
    items = select_agenda(corpus, POLITICAL_STATEMENTS)
    assert len(items) == 10
    assert [i.minute_id for i in items] == sorted(i.minute_id for i in items)


def _partition_for(item, blocks):
    return PartitionResult(
        minute_id=item.minute_id,
        agenda_label=item.label,
        blocks=blocks,
        classifier_fingerprint="test",
    )


def test_save_blocks_valid(synth_small):
    corpus, _ = synth_small
    item = select_agenda(corpus, POLITICAL_STATEMENTS)[0]
    m = len(item.speeches)
    blocks = [SpeechBlock(0, 2), SpeechBlock(3, m - 1)]
    save_blocks(corpus, item.key, _partition_for(item, blocks))
    assert corpus.block_store[item.key].blocks == blocks
    # writing twice: idempotent, single entry
    save_blocks(corpus, item.key, _partition_for(item, blocks))
    assert len([k for k in corpus.block_store if k == item.key]) == 1


def test_save_blocks_overlap(synth_small):
    corpus, _ = synth_small
    item = select_agenda(corpus, POLITICAL_STATEMENTS)[0]
    m = len(item.speeches)
    overlapping = [SpeechBlock(0, 3), SpeechBlock(3, m - 1)]
    with pytest.raises(InvalidPartition):
        save_blocks(corpus, item.key, _partition_for(item, overlapping))


def test_validate_blocks_gap():
    with pytest.raises(InvalidPartition):
        validate_blocks([SpeechBlock(0, 1), SpeechBlock(3, 5)], 6)
    validate_blocks([SpeechBlock(0, 1), SpeechBlock(2, 5)], 6)
    with pytest.raises(InvalidPartition):
        validate_blocks([SpeechBlock(0, 5)], 4)


def test_labels_round_trip(tmp_path, synth_small):
    corpus, truth = synth_small
    path = tmp_path / "labels.csv"
    save_labels(truth.labels, path)
    loaded = load_labels(path, corpus)
    assert loaded == truth.labels
    assert corpus.label_store == truth.labels


def test_labels_unknown_key(tmp_path, synth_small):
    corpus, _ = synth_small
    path = tmp_path / "labels.csv"
    save_labels({("missing-minute", 3): 1}, path)
    with pytest.raises(DataError):
        load_labels(path, corpus)
