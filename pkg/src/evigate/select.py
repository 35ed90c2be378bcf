"""Meaning-utility scoring and diversity-controlled greedy selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .concept import CorpusStats, ci
from .errors import ConfigError
from .lexical import rel


@dataclass(frozen=True)
class MueWeights:
    lam: float = 0.50  # conceptual importance
    mu: float = 0.30  # embedding similarity
    nu: float = 0.20  # lexical relevance

    def __post_init__(self):
        if min(self.lam, self.mu, self.nu) < 0:
            raise ConfigError("MUE weights must be non-negative")
        if not math.isclose(self.lam + self.mu + self.nu, 1.0, abs_tol=1e-9):
            raise ConfigError(f"MUE weights must sum to 1, got {self.lam + self.mu + self.nu}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lam, self.mu, self.nu)

    @classmethod
    def parse(cls, text: str) -> "MueWeights":
        """Parse ``"0.5,0.3,0.2"`` (optionally parenthesized)."""
        parts = text.strip().strip("()").split(",")
        if len(parts) != 3:
            raise ConfigError(f"expected three comma-separated weights, got {text!r}")
        return cls(*(float(p) for p in parts))


def mue(ci_value: float, sim_value: float, rel_value: float, weights: MueWeights) -> float:
    return weights.lam * ci_value + weights.mu * sim_value + weights.nu * rel_value


@dataclass(frozen=True)
class ScoredCandidate:
    unit_id: int
    sim: float
    rel: float
    ci: float
    mue: float


@dataclass(frozen=True)
class DueParams:
    top_k: int = 6
    gamma: float = 0.5
    delta_dup: float = 0.9

    def __post_init__(self):
        if self.top_k < 1:
            raise ConfigError("top_k must be at least 1")
        if self.gamma < 0:
            raise ConfigError("gamma must be non-negative")
        if not 0 < self.delta_dup <= 1:
            raise ConfigError("delta_dup must lie in (0, 1]")


@dataclass(frozen=True)
class SelectionStep:
    """One iteration of the greedy loop, kept for ``explain`` output."""

    unit_id: int
    adjusted: float
    max_sim_to_selected: float
    suppressed: tuple[int, ...] = ()


@dataclass(frozen=True)
class EvidenceSet:
    selected: tuple[ScoredCandidate, ...] = ()
    exhausted: bool = True
    steps: tuple[SelectionStep, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.selected)

    def __iter__(self):
        return iter(self.selected)

    @property
    def unit_ids(self) -> list[int]:
        return [c.unit_id for c in self.selected]


def score_candidates(
    candidates: Sequence[tuple[int, float]],
    corpus,
    terms,
    stats: CorpusStats,
    weights: MueWeights,
    fuzzy: bool = False,
    fuzzy_threshold: float = 0.85,
) -> list[ScoredCandidate]:
    """Score each ``(unit_id, sim)`` candidate independently, keeping input order."""
    out = []
    for unit_id, s in candidates:
        unit = corpus[unit_id]
        r = rel(unit, terms, fuzzy=fuzzy, threshold=fuzzy_threshold)
        c = ci(unit, stats)
        out.append(ScoredCandidate(unit_id, s, r, c, mue(c, s, r, weights)))
    return out


def due_select(
    scored: Sequence[ScoredCandidate],
    sim_between: Callable[[int, int], float],
    params: DueParams = DueParams(),
) -> EvidenceSet:
    """Greedy selection that suppresses near-duplicates and penalizes overlap.

    After each pick, remaining candidates whose similarity to any selected
    unit reaches ``delta_dup`` are dropped. The next pick maximizes
    ``mue - gamma * max_sim_to_selected``; ties go to the lower unit id.
    """
    pool = sorted(scored, key=lambda c: c.unit_id)
    selected: list[ScoredCandidate] = []
    steps: list[SelectionStep] = []
    # running max similarity of each pooled unit to the selected set
    closest = {c.unit_id: 0.0 for c in pool}

    while pool and len(selected) < params.top_k:
        best, best_score = None, -math.inf
        for c in pool:
            score = c.mue - params.gamma * closest[c.unit_id] if selected else c.mue
            if score > best_score:
                best, best_score = c, score
        selected.append(best)
        pool = [c for c in pool if c.unit_id != best.unit_id]
        survivors, dropped = [], []
        for c in pool:
            closest[c.unit_id] = max(closest[c.unit_id], sim_between(c.unit_id, best.unit_id))
            (dropped if closest[c.unit_id] >= params.delta_dup else survivors).append(c)
        pool = survivors
        steps.append(SelectionStep(best.unit_id, best_score, closest[best.unit_id], tuple(d.unit_id for d in dropped)))

    exhausted = len(selected) < params.top_k
    return EvidenceSet(tuple(selected), exhausted, tuple(steps))
