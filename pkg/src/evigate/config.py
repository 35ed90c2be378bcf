"""Run configuration and its flat ``key = value`` file form.

Every tunable of a run lives in one flat namespace so that a config file
checked in next to the results fully determines them, and each CLI flag
overrides exactly one key.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from .embed import EmbeddingProviderConfig
from .errors import ConfigError
from .gate import GateConfig
from .lexical import FUZZY_THRESHOLD, MIN_TERM_LENGTH, Lexicon
from .select import DueParams, MueWeights

_SECTION = "evigate"


@dataclass(frozen=True)
class PipelineConfig:
    weights: MueWeights = field(default_factory=MueWeights)
    due: DueParams = field(default_factory=DueParams)
    gate: GateConfig = field(default_factory=GateConfig)
    cand_k: int = 30
    provider: EmbeddingProviderConfig = field(default_factory=EmbeddingProviderConfig)
    fuzzy: bool = True
    fuzzy_threshold: float = FUZZY_THRESHOLD
    min_term_length: int = MIN_TERM_LENGTH
    stopwords: str | None = None
    scaffold: str | None = None
    phrases: str | None = None
    answer_mode: str = "extractive"
    generator_endpoint: str | None = None
    generator_timeout: float = 30.0

    def __post_init__(self):
        if self.cand_k < self.due.top_k:
            raise ConfigError(f"cand_k ({self.cand_k}) must be >= top_k ({self.due.top_k})")
        if self.answer_mode not in ("extractive", "generator"):
            raise ConfigError(f"unknown answer_mode {self.answer_mode!r}")
        if self.answer_mode == "generator" and not self.generator_endpoint:
            raise ConfigError("generator answer_mode needs generator_endpoint")

    def lexicon(self) -> Lexicon:
        return Lexicon.from_files(self.stopwords, self.scaffold, self.phrases, self.min_term_length)

    def with_weights(self, weights: MueWeights) -> "PipelineConfig":
        return replace(self, weights=weights)

    def to_flat(self) -> dict[str, Any]:
        return {
            "lambda": self.weights.lam,
            "mu": self.weights.mu,
            "nu": self.weights.nu,
            "top_k": self.due.top_k,
            "gamma": self.due.gamma,
            "delta_dup": self.due.delta_dup,
            "cand_k": self.cand_k,
            "k_min": self.gate.k_min,
            "tau_rel": self.gate.tau_rel,
            "tau_sim": self.gate.tau_sim,
            "mean_rel_min": self.gate.mean_rel_min,
            "mean_mue_min": self.gate.mean_mue_min,
            "phrase_anchoring": self.gate.phrase_anchoring,
            "fuzzy": self.fuzzy,
            "fuzzy_threshold": self.fuzzy_threshold,
            "min_term_length": self.min_term_length,
            "embedding_mode": self.provider.mode,
            "dimension": self.provider.dimension,
            "endpoint": self.provider.endpoint,
            "timeout": self.provider.timeout,
            "stopwords": self.stopwords,
            "scaffold": self.scaffold,
            "phrases": self.phrases,
            "answer_mode": self.answer_mode,
            "generator_endpoint": self.generator_endpoint,
            "generator_timeout": self.generator_timeout,
        }

    @classmethod
    def from_flat(cls, values: Mapping[str, Any]) -> "PipelineConfig":
        flat = cls().to_flat()
        unknown = set(values) - set(flat)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key, raw in values.items():
            if raw is not None:
                flat[key] = _coerce(key, raw, flat[key])
        return cls(
            weights=MueWeights(flat["lambda"], flat["mu"], flat["nu"]),
            due=DueParams(flat["top_k"], flat["gamma"], flat["delta_dup"]),
            gate=GateConfig(
                flat["k_min"],
                flat["tau_rel"],
                flat["tau_sim"],
                flat["mean_rel_min"],
                flat["mean_mue_min"],
                flat["phrase_anchoring"],
            ),
            cand_k=flat["cand_k"],
            provider=EmbeddingProviderConfig(
                flat["embedding_mode"], flat["dimension"], flat["endpoint"], flat["timeout"]
            ),
            fuzzy=flat["fuzzy"],
            fuzzy_threshold=flat["fuzzy_threshold"],
            min_term_length=flat["min_term_length"],
            stopwords=flat["stopwords"],
            scaffold=flat["scaffold"],
            phrases=flat["phrases"],
            answer_mode=flat["answer_mode"],
            generator_endpoint=flat["generator_endpoint"],
            generator_timeout=flat["generator_timeout"],
        )

    def override(self, **values: Any) -> "PipelineConfig":
        flat = self.to_flat()
        flat.update({k: v for k, v in values.items() if v is not None})
        return PipelineConfig.from_flat(flat)


_INT_KEYS = {"top_k", "cand_k", "k_min", "min_term_length", "dimension"}
_BOOL_KEYS = {"phrase_anchoring", "fuzzy"}
_STR_KEYS = {
    "embedding_mode", "endpoint", "stopwords", "scaffold", "phrases", "answer_mode", "generator_endpoint",
}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(key: str, raw: Any, default: Any) -> Any:
    try:
        if key in _BOOL_KEYS:
            if isinstance(raw, bool):
                return raw
            s = str(raw).strip().lower()
            if s in _TRUE:
                return True
            if s in _FALSE:
                return False
            raise ValueError(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _STR_KEYS:
            s = str(raw).strip()
            return s or None
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_config(text: str) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    return dict(parser[_SECTION])


def load_config(path: str | Path | None = None, **overrides: Any) -> PipelineConfig:
    values: dict[str, Any] = {}
    if path is not None:
        values.update(parse_config(Path(path).read_text(encoding="utf-8")))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig.from_flat(values)


def dump_config(config: PipelineConfig) -> str:
    lines = []
    for key, value in config.to_flat().items():
        if value is None:
            value = ""
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
