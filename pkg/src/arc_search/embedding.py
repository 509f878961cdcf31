"""Unit-norm text embeddings via a pluggable provider.

Two providers share one interface: a deterministic feature-hashing embedder
for tests and offline use, and an HTTP client for a real sentence-embedding
service. All vectors are L2-normalized so inner product equals cosine
similarity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import httpx
import numpy as np

from .errors import DegenerateVectorError, DimensionError, EmptyTextError, ProviderError

DEFAULT_DIMENSION = 768

_TOKEN_RE = re.compile(r"[0-9a-z]+")

# FNV-1a 64-bit constants (fixed published algorithm; gives stable,
# cross-language-reproducible token hashes).
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def _fnv1a_64(data: str) -> int:
    h = _FNV_OFFSET
    for byte in data.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def tokenize_for_embedding(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def normalize(v: np.ndarray) -> np.ndarray:
    """Scale a raw vector to unit Euclidean length.

    Raises DegenerateVectorError on a zero vector or non-finite entries.
    """
    v = np.asarray(v, dtype=np.float32)
    if not np.all(np.isfinite(v)):
        raise DegenerateVectorError("vector has non-finite entries")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise DegenerateVectorError("cannot normalize the zero vector")
    return v / norm


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Inner product of two unit vectors, clamped to [-1, 1]."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.clip(np.dot(a, b), -1.0, 1.0))


class DeterministicHashEmbedder:
    """Feature-hashing embedder: a pure function of (text, dimension).

    Each token adds +/-1 at position hash(token) mod d (sign from the hash's
    top bit); each adjacent-token bigram, joined with "_", adds the same at
    weight 0.5. The accumulator is then L2-normalized. Bigrams give word-order
    sensitivity while unigram mass dominates.
    """

    kind = "deterministic-hash"

    def __init__(self, dimension: int = DEFAULT_DIMENSION):
        if dimension <= 0:
            raise DimensionError("dimension must be positive")
        self.dimension = dimension

    def _add_feature(self, acc: np.ndarray, feature: str, weight: float) -> None:
        h = _fnv1a_64(feature)
        sign = -1.0 if h >> 63 else 1.0
        acc[h % self.dimension] += sign * weight

    def embed(self, text: str) -> np.ndarray:
        tokens = tokenize_for_embedding(text)
        if not tokens:
            raise EmptyTextError("text has no tokens")
        acc = np.zeros(self.dimension, dtype=np.float64)
        for tok in tokens:
            self._add_feature(acc, tok, 1.0)
        for left, right in zip(tokens, tokens[1:]):
            self._add_feature(acc, f"{left}_{right}", 0.5)
        if not np.any(acc):
            # Unreachable with >=1 token, but guarded per the contract.
            raise DegenerateVectorError("hash accumulator is all zero")
        return normalize(acc)

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        return [self.embed(t) for t in texts]


@dataclass
class RemoteEmbedderConfig:
    url: str
    auth_token: str | None = None
    timeout: float = 30.0
    max_in_flight: int = 8


class RemoteEmbedder:
    """Client for a remote embedding service.

    Protocol: POST {"texts": [...]} -> {"vectors": [[...], ...]}. Vectors are
    re-normalized on receipt; services are not trusted to normalize.
    """

    kind = "remote-service"

    def __init__(self, config: RemoteEmbedderConfig, dimension: int = DEFAULT_DIMENSION):
        self.config = config
        self.dimension = dimension
        headers = {}
        if config.auth_token:
            headers["Authorization"] = f"Bearer {config.auth_token}"
        self._client = httpx.Client(
            timeout=config.timeout,
            headers=headers,
            limits=httpx.Limits(max_connections=config.max_in_flight),
        )

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        for text in texts:
            if not tokenize_for_embedding(text):
                raise EmptyTextError("text has no tokens")
        try:
            resp = self._client.post(self.config.url, json={"texts": texts})
            resp.raise_for_status()
            vectors = resp.json()["vectors"]
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise ProviderError(f"embedding service failure: {exc}") from exc
        if len(vectors) != len(texts):
            raise ProviderError("embedding service returned wrong vector count")
        out = []
        for vec in vectors:
            arr = np.asarray(vec, dtype=np.float32)
            if arr.shape != (self.dimension,):
                raise DimensionError(f"service returned dimension {arr.shape}, expected {self.dimension}")
            out.append(normalize(arr))
        return out

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]

    def close(self) -> None:
        self._client.close()


def embed_text(provider, text: str) -> np.ndarray:
    """Embed one text with any provider; unit-norm vector of its dimension."""
    return provider.embed(text)
