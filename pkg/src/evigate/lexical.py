"""Tokenization, query content terms, lexical relevance and phrase matching."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .resources import bundled_list, read_list

_TOKEN = re.compile(r"[^\W_]+")

MIN_TERM_LENGTH = 3
FUZZY_THRESHOLD = 0.85


def tokenize(text: str) -> list[str]:
    """Maximal runs of letters/digits, lowercased, in order."""
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class Lexicon:
    """The fixed word lists every lexical decision is made against."""

    stopwords: frozenset[str] = field(default_factory=lambda: frozenset(bundled_list("stopwords.txt")))
    scaffold: frozenset[str] = field(default_factory=lambda: frozenset(bundled_list("scaffold.txt")))
    phrases: tuple[str, ...] = field(default_factory=lambda: bundled_list("phrases.txt"))
    min_length: int = MIN_TERM_LENGTH

    def __post_init__(self):
        phrases = tuple(" ".join(tokenize(p)) for p in self.phrases)
        for raw, norm in zip(self.phrases, phrases):
            if len(norm.split()) < 2:
                raise ValueError(f"phrase must have at least two tokens: {raw!r}")
        object.__setattr__(self, "phrases", phrases)
        object.__setattr__(self, "stopwords", frozenset(w.lower() for w in self.stopwords))
        object.__setattr__(self, "scaffold", frozenset(w.lower() for w in self.scaffold))

    @classmethod
    def from_files(
        cls,
        stopwords: str | Path | None = None,
        scaffold: str | Path | None = None,
        phrases: str | Path | None = None,
        min_length: int = MIN_TERM_LENGTH,
    ) -> "Lexicon":
        kw: dict = {"min_length": min_length}
        if stopwords is not None:
            kw["stopwords"] = frozenset(read_list(stopwords))
        if scaffold is not None:
            kw["scaffold"] = frozenset(read_list(scaffold))
        if phrases is not None:
            kw["phrases"] = read_list(phrases)
        return cls(**kw)


DEFAULT_LEXICON = Lexicon()


@dataclass(frozen=True)
class ContentTermSet:
    # unique, in order of first appearance in the query
    terms: tuple[str, ...]
    source_query: str

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.terms


def content_terms(query: str, lexicon: Lexicon = DEFAULT_LEXICON) -> ContentTermSet:
    seen: dict[str, None] = {}
    for tok in tokenize(query):
        if len(tok) < lexicon.min_length or tok in lexicon.stopwords or tok in lexicon.scaffold:
            continue
        seen.setdefault(tok, None)
    return ContentTermSet(tuple(seen), query)


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_similarity(a: str, b: str) -> float:
    """1 - levenshtein / max length; two empty strings are identical."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def _covered(term: str, tokens: frozenset[str], fuzzy: bool, threshold: float) -> bool:
    if term in tokens:
        return True
    if not fuzzy:
        return False
    for tok in sorted(tokens):
        # cheap length bound: distance >= |len difference|
        if 1.0 - abs(len(tok) - len(term)) / max(len(tok), len(term)) < threshold:
            continue
        if edit_similarity(term, tok) >= threshold:
            return True
    return False


def _text(unit) -> str:
    return unit if isinstance(unit, str) else unit.text


def rel(
    unit,
    terms: ContentTermSet,
    fuzzy: bool = False,
    threshold: float = FUZZY_THRESHOLD,
) -> float:
    """Fraction of the query's content terms covered by the unit's tokens."""
    if not terms.terms:
        return 0.0
    tokens = frozenset(tokenize(_text(unit)))
    hit = sum(1 for t in terms.terms if _covered(t, tokens, fuzzy, threshold))
    return hit / len(terms.terms)


def _contains_sequence(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    first = needle[0]
    for i in range(len(haystack) - n + 1):
        if haystack[i] == first and list(haystack[i:i + n]) == list(needle):
            return True
    return False


def match_phrases(query: str, phrases: Iterable[str] = DEFAULT_LEXICON.phrases) -> list[str]:
    """Phrases whose token sequence occurs contiguously in the query, in list order."""
    q = tokenize(query)
    return [p for p in phrases if _contains_sequence(q, tokenize(p))]


def unit_contains_phrase(unit, phrase: str) -> bool:
    """Case-insensitive token-sequence containment; ``unit`` is a unit or its text."""
    return _contains_sequence(tokenize(_text(unit)), tokenize(phrase))
