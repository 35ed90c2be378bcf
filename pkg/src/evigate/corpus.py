"""Evidence units and the corpus that holds them.

A document is split into sentences by a fixed rule-based segmenter; a
structured record becomes exactly one unit. Unit text is never rewritten
after ingestion: the only transformations are NFC normalization of the
whole source and trimming of surrounding whitespace.
"""

from __future__ import annotations

import enum
import json
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import DuplicateDocument, EmptyRecord, EvigateError
from .resources import bundled_list

_TERMINATOR = re.compile(r"[.!?]+[\"'”’)\]]*")
_NEXT_SENTENCE = re.compile(r"\s+[\"'“‘(\[]*(\w)")
_OPENERS = "\"'“‘(["
_CLOSERS = "\"'”’)]"


class UnitKind(str, enum.Enum):
    SENTENCE = "sentence"
    RECORD = "record"


@dataclass(frozen=True)
class EvidenceUnit:
    unit_id: int
    text: str
    doc_id: str
    ordinal: int
    kind: UnitKind
    # character offsets into the normalized source; None for records
    start: int | None = None
    end: int | None = None

    @property
    def citation(self) -> str:
        return f"[{self.doc_id}:{self.ordinal}]"

    def to_dict(self) -> dict:
        return {
            "unit_id": self.unit_id,
            "doc_id": self.doc_id,
            "ordinal": self.ordinal,
            "kind": self.kind.value,
            "text": self.text,
            "start": self.start,
            "end": self.end,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvidenceUnit":
        return cls(
            unit_id=int(d["unit_id"]),
            text=d["text"],
            doc_id=d["doc_id"],
            ordinal=int(d["ordinal"]),
            kind=UnitKind(d["kind"]),
            start=d.get("start"),
            end=d.get("end"),
        )


def normalize_text(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _is_abbreviation(text: str, term_start: int, term_end: int, abbreviations: frozenset[str]) -> bool:
    token = text[term_start:term_end].rstrip(_CLOSERS)
    if token != ".":
        return False
    word_start = term_start
    while word_start > 0 and not text[word_start - 1].isspace():
        word_start -= 1
    word = text[word_start:term_start + 1].lstrip(_OPENERS)
    return word in abbreviations


def sentence_spans(
    document_text: str, abbreviations: Iterable[str] | None = None
) -> list[tuple[int, int]]:
    """Return ``(start, end)`` offsets of each sentence, whitespace excluded.

    A sentence ends at a run of ``.``, ``!`` or ``?`` (optionally followed
    by closing quotes or brackets) when the next thing is whitespace and an
    uppercase letter, or the end of the text. A lone period that closes a
    listed abbreviation such as ``U.S.`` is not a boundary unless the text
    ends there.
    """
    abbrevs = frozenset(bundled_list("abbreviations.txt") if abbreviations is None else abbreviations)
    text = document_text
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _TERMINATOR.finditer(text):
        end = m.end()
        at_end = not text[end:].strip()
        if not at_end:
            nxt = _NEXT_SENTENCE.match(text, end)
            if nxt is None or not nxt.group(1).isupper():
                continue
            if _is_abbreviation(text, m.start(), end, abbrevs):
                continue
        _append_span(text, start, end, spans)
        start = end
        if at_end:
            break
    _append_span(text, start, len(text), spans)
    return spans


def _append_span(text: str, start: int, end: int, spans: list[tuple[int, int]]) -> None:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    if end > start:
        spans.append((start, end))


def segment_sentences(document_text: str, abbreviations: Iterable[str] | None = None) -> list[str]:
    return [document_text[s:e] for s, e in sentence_spans(document_text, abbreviations)]


class Corpus:
    """Ordered, append-only collection of evidence units.

    Unit ids come from a single counter starting at 0, so ingesting the same
    inputs in the same order always yields the same corpus.
    """

    def __init__(self, abbreviations: Iterable[str] | None = None):
        self._units: list[EvidenceUnit] = []
        self._doc_index: dict[str, list[int]] = {}
        self._sources: dict[str, str] = {}
        self._abbreviations = None if abbreviations is None else tuple(abbreviations)

    @property
    def units(self) -> tuple[EvidenceUnit, ...]:
        return tuple(self._units)

    @property
    def doc_index(self) -> dict[str, tuple[int, ...]]:
        return {doc: tuple(ids) for doc, ids in self._doc_index.items()}

    def source(self, doc_id: str) -> str | None:
        """Normalized source text of a plain-text document."""
        return self._sources.get(doc_id)

    def __len__(self) -> int:
        return len(self._units)

    def __iter__(self) -> Iterator[EvidenceUnit]:
        return iter(self._units)

    def __getitem__(self, unit_id: int) -> EvidenceUnit:
        return self._units[unit_id]

    def _claim(self, doc_id: str) -> None:
        if doc_id in self._doc_index:
            raise DuplicateDocument(doc_id)

    def _add(self, doc_id: str, text: str, kind: UnitKind, start=None, end=None) -> EvidenceUnit:
        ids = self._doc_index[doc_id]
        unit = EvidenceUnit(len(self._units), text, doc_id, len(ids), kind, start, end)
        self._units.append(unit)
        ids.append(unit.unit_id)
        return unit

    def ingest_document(self, doc_id: str, document_text: str) -> list[EvidenceUnit]:
        self._claim(doc_id)
        text = normalize_text(document_text)
        spans = sentence_spans(text, self._abbreviations)
        self._doc_index[doc_id] = []
        self._sources[doc_id] = text
        return [self._add(doc_id, text[s:e], UnitKind.SENTENCE, s, e) for s, e in spans]

    def ingest_records(self, doc_id: str, records: Sequence[str]) -> list[EvidenceUnit]:
        self._claim(doc_id)
        cleaned = []
        for i, rec in enumerate(records):
            rec = normalize_text(rec).strip()
            if not rec:
                raise EmptyRecord(doc_id, i)
            cleaned.append(rec)
        self._doc_index[doc_id] = []
        return [self._add(doc_id, rec, UnitKind.RECORD) for rec in cleaned]

    @classmethod
    def from_units(cls, units: Iterable[EvidenceUnit]) -> "Corpus":
        corpus = cls()
        for unit in units:
            if unit.unit_id != len(corpus._units):
                raise EvigateError(f"unit ids must be contiguous from 0, got {unit.unit_id}")
            corpus._doc_index.setdefault(unit.doc_id, []).append(unit.unit_id)
            corpus._units.append(unit)
        return corpus


def read_records(path: str | Path, text_field: str = "text") -> list[str]:
    """Read the designated text field from every line of a JSON-Lines file."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            obj = json.loads(line)
            if not isinstance(obj, dict) or text_field not in obj:
                raise EvigateError(f"{path}:{lineno}: missing field {text_field!r}")
            records.append(str(obj[text_field]))
    return records


def load_corpus(
    docs_dir: str | Path | None = None,
    record_files: Sequence[str | Path] = (),
    text_field: str = "text",
) -> Corpus:
    """Build a corpus from a directory of ``*.txt`` files and JSONL record files.

    Text files are ingested in sorted file-name order, then record files in
    the order given. Each file's stem is its doc id.
    """
    corpus = Corpus()
    if docs_dir is not None:
        for path in sorted(Path(docs_dir).glob("*.txt")):
            corpus.ingest_document(path.stem, path.read_text(encoding="utf-8"))
    for path in record_files:
        path = Path(path)
        corpus.ingest_records(path.stem, read_records(path, text_field))
    return corpus
