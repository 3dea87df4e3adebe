"""Sentence embedding providers: a deterministic hashing baseline and an HTTP client."""

from __future__ import annotations

import hashlib
from functools import lru_cache
from typing import Protocol, Sequence

import httpx
import numpy as np

from ..textproc import tokenize


class EmbeddingProvider(Protocol):
    """Deterministic sentence-to-vector mapping with a fixed dimensionality."""

    dim: int

    def embed(self, sentences: Sequence[str]) -> np.ndarray: ...


@lru_cache(maxsize=65536)
def _token_vector(token: str, dim: int, seed: int) -> np.ndarray:
    digest = hashlib.blake2b(f"{seed}\x00{token}".encode("utf-8"), digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "big"))
    vec = rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    vec.setflags(write=False)
    return vec


def hashed_embedding(tokens: Sequence[str], dim: int = 64, seed: int = 0) -> np.ndarray:
    """Mean of unit-norm pseudo-random token vectors; empty input gives zeros.

    Token vectors are keyed by a content hash of (seed, token), so the mapping
    is stable across processes.
    """
    if not tokens:
        return np.zeros(dim)
    return np.mean([_token_vector(t, dim, seed) for t in tokens], axis=0)


class HashedEmbedding:
    """Default provider: tokenise each sentence and average hashed token vectors."""

    def __init__(self, dim: int = 64, seed: int = 0):
        self.dim = dim
        self.seed = seed

    def embed(self, sentences: Sequence[str]) -> np.ndarray:
        return np.array([hashed_embedding(tokenize(s), self.dim, self.seed) for s in sentences])


class HttpEmbedding:
    """Client for an embedding service: GET /info for the dimension, POST for vectors."""

    def __init__(self, base_url: str, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        info = httpx.get(f"{self.base_url}/info", timeout=timeout)
        info.raise_for_status()
        self.dim = int(info.json()["dim"])

    def embed(self, sentences: Sequence[str]) -> np.ndarray:
        response = httpx.post(
            self.base_url, json={"sentences": list(sentences)}, timeout=self.timeout
        )
        response.raise_for_status()
        vectors = np.asarray(response.json()["vectors"], dtype=float)
        if vectors.shape != (len(sentences), self.dim) or not np.all(np.isfinite(vectors)):
            raise ValueError("embedding service returned malformed vectors")
        return vectors
