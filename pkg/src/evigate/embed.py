"""Embedding providers and the clamped cosine similarity between their vectors.

Vectors are 1-D float64 numpy arrays with unit L2 norm, or all zeros for
text without tokens.
"""

from __future__ import annotations

import hashlib
import math
import threading
from dataclasses import dataclass
from typing import Sequence

import httpx
import numpy as np

from .errors import ConfigError, DimensionMismatch, ProtocolError, RemoteUnavailable
from .lexical import DEFAULT_LEXICON, tokenize

# Fixed key for the feature hash. Changing it changes every local embedding.
HASH_KEY = b"evigate-fh-v1"
DEFAULT_DIMENSION = 256


def l2_normalize(values: Sequence[float]) -> np.ndarray:
    vec = np.array(values, dtype=np.float64)
    norm = math.sqrt(math.fsum(float(x) * float(x) for x in vec))
    if norm == 0.0:
        return np.zeros_like(vec)
    vec = vec / norm
    vec.flags.writeable = False
    return vec


def sim(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of two unit vectors, with negatives clamped to 0."""
    if a.shape != b.shape:
        raise DimensionMismatch(a.shape[0], b.shape[0])
    return min(1.0, max(0.0, float((a * b).sum())))


def hash_token(token: str) -> int:
    return int.from_bytes(hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=HASH_KEY).digest(), "little")


class LocalHashEmbedder:
    """Signed feature hashing of content tokens into ``dimension`` buckets.

    Tokens on the bundled stopword list are skipped unless the text has no
    other tokens. The low bits of a keyed BLAKE2b hash pick the bucket and
    the top bit picks the sign, so the result depends only on the text and
    the dimension.
    """

    mode = "local_hash"

    def __init__(self, dimension: int = DEFAULT_DIMENSION):
        if dimension <= 0:
            raise ConfigError("dimension must be positive")
        self.dimension = dimension
        self._stopwords = DEFAULT_LEXICON.stopwords

    def embed(self, text: str) -> np.ndarray:
        tokens = tokenize(text)
        content = [t for t in tokens if t not in self._stopwords] or tokens
        counts = [0.0] * self.dimension
        for tok in content:
            h = hash_token(tok)
            counts[h % self.dimension] += -1.0 if h >> 63 else 1.0
        return l2_normalize(counts)

    def embed_many(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed(t) for t in texts]


class RemoteEmbedder:
    """Client for an embedding service speaking ``{"texts"} -> {"vectors"}``.

    Responses are cached by exact text for the life of the object and are
    normalized here whatever the server returns.
    """

    mode = "remote"

    def __init__(
        self,
        endpoint: str,
        timeout: float = 10.0,
        dimension: int | None = None,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.timeout = timeout
        self.dimension = dimension
        self._client = client or httpx.Client(timeout=timeout)
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _request(self, texts: list[str]) -> list[list[float]]:
        try:
            resp = self._client.post(self.endpoint, json={"texts": texts}, timeout=self.timeout)
            resp.raise_for_status()
            payload = resp.json()
        except (httpx.TimeoutException, httpx.TransportError) as exc:
            raise RemoteUnavailable(f"embedding service at {self.endpoint} unavailable: {exc}") from exc
        except httpx.HTTPStatusError as exc:
            raise RemoteUnavailable(f"embedding service returned {exc.response.status_code}") from exc
        except ValueError as exc:
            raise ProtocolError(f"embedding service sent invalid JSON: {exc}") from exc
        vectors = payload.get("vectors") if isinstance(payload, dict) else None
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ProtocolError("embedding response must carry one vector per text")
        return vectors

    def embed_many(self, texts: Sequence[str]) -> list[np.ndarray]:
        with self._lock:
            missing = sorted({t for t in texts if t not in self._cache and tokenize(t)})
            if missing:
                for text, raw in zip(missing, self._request(missing)):
                    if self.dimension is None:
                        self.dimension = len(raw)
                    if len(raw) != self.dimension:
                        raise DimensionMismatch(self.dimension, len(raw))
                    self._cache[text] = l2_normalize(raw)
            out = []
            for t in texts:
                if t in self._cache:
                    out.append(self._cache[t])
                elif self.dimension is None:
                    raise ConfigError("remote dimension unknown; embed a non-empty text first")
                else:
                    out.append(np.zeros(self.dimension))
            return out

    def embed(self, text: str) -> np.ndarray:
        return self.embed_many([text])[0]


@dataclass(frozen=True)
class EmbeddingProviderConfig:
    mode: str = "local_hash"
    dimension: int = DEFAULT_DIMENSION
    endpoint: str | None = None
    timeout: float = 10.0

    def __post_init__(self):
        if self.mode not in ("local_hash", "remote"):
            raise ConfigError(f"unknown embedding mode {self.mode!r}")
        if self.mode == "remote" and not self.endpoint:
            raise ConfigError("remote mode needs an endpoint")
        if self.dimension <= 0:
            raise ConfigError("dimension must be positive")

    def make(self, client: httpx.Client | None = None):
        if self.mode == "local_hash":
            return LocalHashEmbedder(self.dimension)
        return RemoteEmbedder(self.endpoint, self.timeout, client=client)
