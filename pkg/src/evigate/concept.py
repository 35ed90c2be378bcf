"""Corpus term statistics and conceptual importance (CI).

CI of a unit is the mean, over its distinct non-stopword terms, of
``ln(n_units / df(t)) / idf_max``. Using distinct terms makes the score
insensitive to repetition inside a unit; normalizing by the corpus-wide
maximum keeps it in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .lexical import DEFAULT_LEXICON, Lexicon, tokenize


def unit_terms(text: str, stopwords: frozenset[str]) -> frozenset[str]:
    return frozenset(t for t in tokenize(text) if t not in stopwords)


@dataclass(frozen=True)
class CorpusStats:
    n_units: int
    df: Mapping[str, int]
    idf_max: float
    stopwords: frozenset[str] = DEFAULT_LEXICON.stopwords

    def idf(self, term: str) -> float:
        """Raw idf; terms never seen in the corpus contribute 0."""
        d = self.df.get(term)
        if not d:
            return 0.0
        return math.log(self.n_units / d)

    def table(self) -> list[tuple[str, int, float]]:
        """(term, df, idf) rows sorted by term."""
        return [(t, self.df[t], self.idf(t)) for t in sorted(self.df)]


def build_stats(texts: Iterable, lexicon: Lexicon = DEFAULT_LEXICON) -> CorpusStats:
    """Document frequencies over units; accepts a Corpus or any iterable of units/texts."""
    df: dict[str, int] = {}
    n = 0
    for item in texts:
        n += 1
        text = item if isinstance(item, str) else item.text
        for term in unit_terms(text, lexicon.stopwords):
            df[term] = df.get(term, 0) + 1
    idf_max = max((math.log(n / d) for d in df.values()), default=0.0)
    return CorpusStats(n_units=n, df=dict(sorted(df.items())), idf_max=idf_max, stopwords=lexicon.stopwords)


def ci(unit, stats: CorpusStats) -> float:
    if stats.idf_max <= 0.0:
        return 0.0
    text = unit if isinstance(unit, str) else unit.text
    terms = sorted(unit_terms(text, stats.stopwords))
    if not terms:
        return 0.0
    value = math.fsum(stats.idf(t) / stats.idf_max for t in terms) / len(terms)
    return min(1.0, max(0.0, value))
