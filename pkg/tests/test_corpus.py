import json

import pytest

from evigate.corpus import Corpus, UnitKind, load_corpus, read_records, segment_sentences, sentence_spans
from evigate.errors import DuplicateDocument, EmptyRecord

from conftest import CORPUS_DIR, FIXTURES, GLOSSARY


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Rights exist. Laws bind.", ["Rights exist.", "Laws bind."]),
        ("", []),
        ("   \n ", []),
        ("The U.S. Constitution protects rights.", ["The U.S. Constitution protects rights."]),
        ("Is it law? Yes! It is.", ["Is it law?", "Yes!", "It is."]),
        ("Dr. Smith spoke. E.g. this continues.", ["Dr. Smith spoke.", "E.g. this continues."]),
        ("Ends with no stop", ["Ends with no stop"]),
        ('He said "Stop." Then left.', ['He said "Stop."', "Then left."]),
        ("Version 2.5 is out. Next.", ["Version 2.5 is out.", "Next."]),
        ("It was in the U.S.", ["It was in the U.S."]),
        ("lowercase after. stays together", ["lowercase after. stays together"]),
    ],
)
def test_segment_sentences(text, expected):
    assert segment_sentences(text) == expected


def test_segmenter_matches_hand_segmented_fixture():
    corpus = load_corpus(CORPUS_DIR)
    hand = [line.split("\t") for line in (FIXTURES / "sentences.tsv").read_text(encoding="utf-8").splitlines()]
    got = [(u.doc_id, str(u.ordinal), u.text) for u in corpus]
    assert got == [tuple(h) for h in hand]


def test_spans_reconstruct_input():
    text = "  First one.  Second one!\n\nThird?  trailing bit  "
    spans = sentence_spans(text)
    rebuilt = text[: spans[0][0]]
    for i, (s, e) in enumerate(spans):
        rebuilt += text[s:e]
        rebuilt += text[e: spans[i + 1][0]] if i + 1 < len(spans) else text[e:]
    assert rebuilt == text
    assert [text[s:e] for s, e in spans] == ["First one.", "Second one!", "Third?  trailing bit"]


def test_ingest_document():
    c = Corpus()
    units = c.ingest_document("d1", "A is B. C is D.")
    assert [(u.ordinal, u.text, u.kind) for u in units] == [(0, "A is B.", UnitKind.SENTENCE), (1, "C is D.", UnitKind.SENTENCE)]
    assert c.ingest_document("d2", "   ") == []
    with pytest.raises(DuplicateDocument):
        c.ingest_document("d1", "Again.")
    assert c.doc_index == {"d1": (0, 1), "d2": ()}


def test_ingest_records():
    c = Corpus()
    units = c.ingest_records("t1", ["row A", "row B"])
    assert [u.kind for u in units] == [UnitKind.RECORD, UnitKind.RECORD]
    assert [u.unit_id for u in units] == [0, 1]
    assert Corpus().ingest_records("t1", []) == []
    with pytest.raises(EmptyRecord) as err:
        c.ingest_records("t2", ["ok", ""])
    assert err.value.index == 1
    # a failed ingest must not leave a half-registered document behind
    assert "t2" not in c.doc_index


def test_unit_ids_are_global_ingestion_order():
    c = Corpus()
    c.ingest_document("a", "One. Two.")
    c.ingest_records("b", ["three"])
    c.ingest_document("c", "Four.")
    assert [(u.unit_id, u.doc_id, u.ordinal) for u in c] == [(0, "a", 0), (1, "a", 1), (2, "b", 0), (3, "c", 0)]


def test_round_trip_provenance(fixture_corpus):
    for unit in fixture_corpus:
        if unit.kind is UnitKind.SENTENCE:
            assert fixture_corpus.source(unit.doc_id)[unit.start:unit.end] == unit.text
        assert unit.text.strip() == unit.text and unit.text


def test_nfc_normalization():
    decomposed = "Café law applies. Next."
    c = Corpus()
    units = c.ingest_document("d", decomposed)
    assert units[0].text == "Café law applies."


def test_reingest_is_identical():
    a = load_corpus(CORPUS_DIR, [GLOSSARY])
    b = load_corpus(CORPUS_DIR, [GLOSSARY])
    assert [u.to_dict() for u in a] == [u.to_dict() for u in b]


def test_read_records_custom_field(tmp_path):
    p = tmp_path / "rows.jsonl"
    p.write_text(json.dumps({"body": "x"}) + "\n\n" + json.dumps({"body": "y"}) + "\n", encoding="utf-8")
    assert read_records(p, "body") == ["x", "y"]
