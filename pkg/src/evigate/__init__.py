"""Gated evidence selection for retrieval-augmented question answering."""

from .concept import CorpusStats, build_stats, ci
from .config import PipelineConfig, load_config
from .corpus import Corpus, EvidenceUnit, UnitKind, load_corpus, segment_sentences
from .embed import EmbeddingProviderConfig, LocalHashEmbedder, RemoteEmbedder, sim
from .gate import GateConfig, GateTrace, evaluate_gate
from .index import VectorIndex, build_index, load_index, save_index
from .lexical import Lexicon, content_terms, match_phrases, rel, tokenize, unit_contains_phrase
from .pipeline import Engine, QueryOutcome, assemble_answer, run_query
from .select import DueParams, EvidenceSet, MueWeights, ScoredCandidate, due_select, score_candidates
from .store import load_bundle, save_bundle

__version__ = "0.1.0"
