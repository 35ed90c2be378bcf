"""The evidence gate: a conjunction of fixed checks over the selected set."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConfigError
from .lexical import unit_contains_phrase

PASS = "PASS"
FAIL = "FAIL"
REASON_CODES = ("COUNT", "MEAN_REL", "MEAN_MUE", "ANCHOR", "PHRASE")


@dataclass(frozen=True)
class GateConfig:
    k_min: int = 1
    tau_rel: float = 0.30
    tau_sim: float = 0.35
    mean_rel_min: float = 0.60
    mean_mue_min: float = 0.65
    phrase_anchoring: bool = True

    def __post_init__(self):
        for name in ("tau_rel", "tau_sim", "mean_rel_min", "mean_mue_min"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.k_min < 0:
            raise ConfigError("k_min must be non-negative")


@dataclass(frozen=True)
class GateTrace:
    n: int
    max_sim: float
    max_rel: float
    mean_rel: float
    mean_mue: float
    anchor_ok: int
    phrase_ok: int
    decision: str
    reasons: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.decision == PASS

    @property
    def retrieval_pct(self) -> int:
        """Display-only: max similarity as a rounded percentage."""
        return int(math.floor(self.max_sim * 100 + 0.5))


def decide(
    n: int,
    mean_rel: float,
    mean_mue: float,
    anchor_ok: bool,
    phrase_ok: bool,
    config: GateConfig = GateConfig(),
) -> tuple[str, tuple[str, ...]]:
    """Decision and failed-check codes from already computed statistics."""
    checks = (
        n >= config.k_min,
        mean_rel >= config.mean_rel_min,
        mean_mue >= config.mean_mue_min,
        bool(anchor_ok),
        bool(phrase_ok),
    )
    reasons = tuple(code for code, ok in zip(REASON_CODES, checks) if not ok)
    return (FAIL if reasons else PASS), reasons


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else 0.0


def evaluate_gate(
    evidence,
    matched_phrases: Sequence[str],
    config: GateConfig = GateConfig(),
    unit_text=None,
) -> GateTrace:
    """Evaluate every check; never raises for weak evidence, only fails.

    ``unit_text`` maps a unit id to its text and is needed only when the
    query matched a high-risk phrase and phrase anchoring is on.
    """
    sel = list(evidence)
    sims = [c.sim for c in sel]
    rels = [c.rel for c in sel]
    anchor_ok = any(c.rel >= config.tau_rel and c.sim >= config.tau_sim for c in sel)
    if config.phrase_anchoring and matched_phrases:
        phrase_ok = any(
            unit_contains_phrase(unit_text(c.unit_id), p) for c in sel for p in matched_phrases
        )
    else:
        phrase_ok = True
    mean_rel = _mean(rels)
    mean_mue = _mean([c.mue for c in sel])
    decision, reasons = decide(len(sel), mean_rel, mean_mue, anchor_ok, phrase_ok, config)
    return GateTrace(
        n=len(sel),
        max_sim=max(sims, default=0.0),
        max_rel=max(rels, default=0.0),
        mean_rel=mean_rel,
        mean_mue=mean_mue,
        anchor_ok=int(anchor_ok),
        phrase_ok=int(phrase_ok),
        decision=decision,
        reasons=reasons,
    )
