"""End-to-end query flow: analyze, retrieve, score, select, gate, answer.

The answer step runs only after the gate passes, and it sees nothing but
the selected units.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import httpx
import numpy as np

from .concept import CorpusStats, build_stats
from .config import PipelineConfig
from .corpus import Corpus
from .embed import sim
from .errors import EvigateError, GeneratorUnavailable, ProtocolError
from .gate import GateTrace, evaluate_gate
from .index import VectorIndex, build_index
from .lexical import ContentTermSet, Lexicon, content_terms, match_phrases
from .select import EvidenceSet, MueWeights, due_select, score_candidates
from .trace import dumps, sweep_json, sweep_tsv

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QueryAnalysis:
    raw: str
    terms: ContentTermSet
    matched_phrases: tuple[str, ...]
    query_vec: np.ndarray = field(compare=False)


def analyze_query(query: str, lexicon: Lexicon, embedder) -> QueryAnalysis:
    return QueryAnalysis(
        raw=query,
        terms=content_terms(query, lexicon),
        matched_phrases=tuple(match_phrases(query, lexicon.phrases)),
        query_vec=embedder.embed(query),
    )


@dataclass(frozen=True)
class QueryOutcome:
    question: str
    weights: tuple[float, float, float]
    trace: GateTrace
    evidence: EvidenceSet
    units: tuple  # EvidenceUnit for each selected candidate, same order
    answer: str | None = None

    def to_dict(self) -> dict[str, Any]:
        t = self.trace
        out: dict[str, Any] = {
            "question": self.question,
            "weights": list(self.weights),
            "n": t.n,
            "mean_rel": t.mean_rel,
            "mean_mue": t.mean_mue,
            "max_sim": t.max_sim,
            "max_rel": t.max_rel,
            "retrieval_pct": t.retrieval_pct,
            "anchor_ok": t.anchor_ok,
            "phrase_ok": t.phrase_ok,
            "gate": t.decision,
            "reasons": list(t.reasons),
            "evidence": [
                {
                    "doc": u.doc_id,
                    "ordinal": u.ordinal,
                    "text": u.text,
                    "sim": c.sim,
                    "rel": c.rel,
                    "ci": c.ci,
                    "mue": c.mue,
                }
                for c, u in zip(self.evidence.selected, self.units)
            ],
        }
        if t.passed and self.answer is not None:
            out["answer"] = self.answer
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"


class GeneratorClient:
    """Hands the admitted evidence to an external generator over HTTP.

    Request ``{"query", "evidence": [{"text", "provenance"}]}``, response
    ``{"answer"}``. The answer comes back verbatim.
    """

    def __init__(self, endpoint: str, timeout: float = 30.0, client: httpx.Client | None = None):
        self.endpoint = endpoint
        self.timeout = timeout
        self._client = client or httpx.Client(timeout=timeout)

    @staticmethod
    def payload(query: str, units: Sequence) -> dict[str, Any]:
        return {
            "query": query,
            "evidence": [
                {"text": u.text, "provenance": {"doc": u.doc_id, "ordinal": u.ordinal, "unit_id": u.unit_id}}
                for u in units
            ],
        }

    def generate(self, query: str, units: Sequence) -> str:
        try:
            resp = self._client.post(self.endpoint, json=self.payload(query, units), timeout=self.timeout)
            resp.raise_for_status()
            body = resp.json()
        except (httpx.TransportError, httpx.HTTPStatusError) as exc:
            raise GeneratorUnavailable(f"generator at {self.endpoint} unavailable: {exc}") from exc
        except ValueError as exc:
            raise ProtocolError(f"generator sent invalid JSON: {exc}") from exc
        if not isinstance(body, dict) or not isinstance(body.get("answer"), str):
            raise ProtocolError("generator response must be an object with a string 'answer'")
        return body["answer"]


def assemble_answer(units: Sequence, query: str | None = None, generator: GeneratorClient | None = None) -> str:
    """Cited verbatim evidence lines, or the generator's reply when one is given."""
    if generator is not None:
        return generator.generate(query or "", units)
    return "\n".join(f"{u.citation} {u.text}" for u in units)


def _select(analysis: QueryAnalysis, corpus: Corpus, stats: CorpusStats, index: VectorIndex,
            config: PipelineConfig) -> tuple[list, EvidenceSet]:
    candidates = index.top_candidates(analysis.query_vec, config.cand_k)
    scored = score_candidates(
        candidates, corpus, analysis.terms, stats, config.weights, config.fuzzy, config.fuzzy_threshold
    )

    def sim_between(a: int, b: int) -> float:
        return sim(index.vector(a), index.vector(b))

    return scored, due_select(scored, sim_between, config.due)


def run_query(
    query: str,
    corpus: Corpus,
    stats: CorpusStats,
    index: VectorIndex,
    config: PipelineConfig,
    embedder,
    generator: GeneratorClient | None = None,
    lexicon: Lexicon | None = None,
    answer: bool = True,
) -> QueryOutcome:
    lexicon = lexicon or config.lexicon()
    analysis = analyze_query(query, lexicon, embedder)
    _, evidence = _select(analysis, corpus, stats, index, config)
    trace = evaluate_gate(evidence, analysis.matched_phrases, config.gate, lambda uid: corpus[uid].text)
    units = tuple(corpus[c.unit_id] for c in evidence.selected)
    text = None
    if trace.passed and answer:
        text = assemble_answer(units, query, generator)
    log.debug("query %r -> %s %s", query, trace.decision, trace.reasons)
    return QueryOutcome(query, config.weights.as_tuple(), trace, evidence, units, text)


def sweep_row(outcome: QueryOutcome) -> dict[str, Any]:
    t = outcome.trace
    return {
        "question": outcome.question,
        "weights": list(outcome.weights),
        "retrieval_pct": t.retrieval_pct,
        "n": t.n,
        "mean_rel": t.mean_rel,
        "mean_mue": t.mean_mue,
        "max_sim": t.max_sim,
        "max_rel": t.max_rel,
        "anchor_ok": t.anchor_ok,
        "phrase_ok": t.phrase_ok,
        "gate": t.decision,
    }


class Engine:
    """A built corpus, its statistics and index, plus the run configuration.

    Read-only once constructed, so one engine can serve concurrent queries.
    """

    def __init__(self, corpus: Corpus, index: VectorIndex, config: PipelineConfig,
                 embedder=None, generator: GeneratorClient | None = None):
        self.corpus = corpus
        self.index = index
        self.config = config
        self.lexicon = config.lexicon()
        self.stats = build_stats(corpus, self.lexicon)
        self.embedder = embedder or config.provider.make()
        if generator is None and config.answer_mode == "generator":
            generator = GeneratorClient(config.generator_endpoint, config.generator_timeout)
        self.generator = generator

    @classmethod
    def build(cls, corpus: Corpus, config: PipelineConfig = PipelineConfig(), embedder=None, **kw) -> "Engine":
        embedder = embedder or config.provider.make()
        return cls(corpus, build_index(corpus, embedder), config, embedder, **kw)

    def query(self, q: str, config: PipelineConfig | None = None, answer: bool = True) -> QueryOutcome:
        return run_query(q, self.corpus, self.stats, self.index, config or self.config,
                         self.embedder, self.generator, self.lexicon, answer=answer)

    def explain(self, q: str) -> dict[str, Any]:
        """Every candidate's signals and the greedy selection steps."""
        analysis = analyze_query(q, self.lexicon, self.embedder)
        scored, evidence = _select(analysis, self.corpus, self.stats, self.index, self.config)
        trace = evaluate_gate(evidence, analysis.matched_phrases, self.config.gate,
                              lambda uid: self.corpus[uid].text)
        selected = set(evidence.unit_ids)
        return {
            "question": q,
            "terms": list(analysis.terms.terms),
            "matched_phrases": list(analysis.matched_phrases),
            "candidates": [
                {
                    "unit_id": c.unit_id,
                    "doc": self.corpus[c.unit_id].doc_id,
                    "ordinal": self.corpus[c.unit_id].ordinal,
                    "sim": c.sim,
                    "rel": c.rel,
                    "ci": c.ci,
                    "mue": c.mue,
                    "selected": c.unit_id in selected,
                    "text": self.corpus[c.unit_id].text,
                }
                for c in scored
            ],
            "steps": [
                {
                    "step": i + 1,
                    "unit_id": s.unit_id,
                    "adjusted": s.adjusted,
                    "max_sim_to_selected": s.max_sim_to_selected,
                    "suppressed": list(s.suppressed),
                }
                for i, s in enumerate(evidence.steps)
            ],
            "exhausted": evidence.exhausted,
            "gate": trace.decision,
            "reasons": list(trace.reasons),
        }

    def sweep(self, questions: Sequence[str], grid: Sequence[MueWeights]) -> list[dict[str, Any]]:
        rows = []
        for weights in grid:
            config = self.config.with_weights(weights)
            for q in questions:
                try:
                    rows.append(sweep_row(self.query(q, config, answer=False)))
                except EvigateError as exc:
                    rows.append({"question": q, "weights": list(weights.as_tuple()),
                                 "gate": "ERROR", "error": str(exc)})
        return rows


def sweep(questions, weight_grid, engine: Engine) -> list[dict[str, Any]]:
    return engine.sweep(questions, weight_grid)


__all__ = [
    "Engine", "GeneratorClient", "QueryAnalysis", "QueryOutcome", "analyze_query",
    "assemble_answer", "run_query", "sweep", "sweep_json", "sweep_tsv",
]
