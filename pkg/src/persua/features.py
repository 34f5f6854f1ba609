"""Sentence and claim-premise pair featurization behind a pluggable provider.

Two providers exist. The builtin provider hashes word unigrams, word bigrams,
and character trigrams into a fixed number of signed buckets and L2-normalizes
the result; it is deterministic across processes, so the whole pipeline can
train and serve offline. The remote provider delegates to an external
contextual encoder over HTTP (request ``{"texts": [...]}``, response
``{"vectors": [[...], ...]}``) and is the path for real sentence embeddings.
"""

from __future__ import annotations

import hashlib
import os
import threading
from dataclasses import dataclass
from typing import Sequence

import httpx
import numpy as np

#: Environment variable overriding the remote provider endpoint.
EMBED_URL_ENV = "PERSUA_EMBED_URL"


class ProviderError(Exception):
    """Remote embedding call failed. Carries the endpoint and HTTP status."""

    def __init__(self, endpoint: str, status: int | None, message: str):
        super().__init__(f"{endpoint} (status={status}): {message}")
        self.endpoint = endpoint
        self.status = status


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "builtin_hash"  # "builtin_hash" | "remote"
    dimension: int = 1024
    seed: int = 42
    endpoint_url: str | None = None
    timeout_ms: int = 10_000
    max_in_flight: int = 4


def _words(text: str) -> list[str]:
    out: list[str] = []
    cur: list[str] = []
    for ch in text.lower():
        if ch.isalnum() or ch == "'":
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


class HashingProvider:
    """Signed feature hashing over word 1/2-grams and char trigrams.

    The hash bit decides the sign, which cancels collision bias in
    expectation. Identical text always maps to an identical unit vector for a
    fixed (dimension, seed).
    """

    kind = "builtin_hash"

    def __init__(self, dimension: int = 1024, seed: int = 42):
        if dimension <= 0 or dimension & (dimension - 1) != 0:
            raise ValueError(f"builtin dimension must be a power of two, got {dimension}")
        self.dimension = dimension
        self.seed = seed
        self._key = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")

    def _hash(self, feature: str) -> int:
        digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, "little")

    def _features(self, text: str) -> list[str]:
        words = _words(text)
        feats = [f"u={w}" for w in words]
        feats += [f"b={a} {b}" for a, b in zip(words, words[1:])]
        norm = " ".join(text.lower().split())
        feats += [f"c={norm[i:i + 3]}" for i in range(len(norm) - 2)]
        if not feats:
            # Punctuation-only input: hash the raw text so the vector is nonzero.
            feats = [f"raw={norm}"]
        return feats

    def embed(self, text: str) -> np.ndarray:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        vec = np.zeros(self.dimension, dtype=np.float64)
        for feat in self._features(text):
            h = self._hash(feat)
            sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
            vec[h % self.dimension] += sign
        vec /= np.linalg.norm(vec)
        return vec

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        return np.stack([self.embed(t) for t in texts]) if texts else np.zeros((0, self.dimension))


class RemoteProvider:
    """HTTP client for an external sentence encoder.

    The vector dimension is discovered on the first successful call and fixed
    afterwards; concurrent calls are bounded by a semaphore.
    """

    kind = "remote"

    def __init__(
        self,
        endpoint_url: str,
        timeout_ms: int = 10_000,
        max_in_flight: int = 4,
        transport: httpx.BaseTransport | None = None,
    ):
        if not endpoint_url:
            raise ValueError("remote provider requires an endpoint URL")
        self.endpoint_url = endpoint_url
        self._client = httpx.Client(timeout=timeout_ms / 1000.0, transport=transport)
        self._slots = threading.Semaphore(max_in_flight)
        self._lock = threading.Lock()
        self._dimension: int | None = None

    @property
    def dimension(self) -> int:
        if self._dimension is None:
            raise ProviderError(self.endpoint_url, None, "dimension unknown before the first embedding call")
        return self._dimension

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        for t in texts:
            if not t.strip():
                raise ValueError("cannot embed empty text")
        with self._slots:
            try:
                resp = self._client.post(self.endpoint_url, json={"texts": list(texts)})
            except httpx.HTTPError as exc:
                raise ProviderError(self.endpoint_url, None, str(exc)) from exc
        if resp.status_code != 200:
            raise ProviderError(self.endpoint_url, resp.status_code, resp.text[:200])
        try:
            vectors = resp.json()["vectors"]
        except Exception as exc:
            raise ProviderError(self.endpoint_url, resp.status_code, "response missing 'vectors'") from exc
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != len(texts) or not np.all(np.isfinite(arr)):
            raise ProviderError(self.endpoint_url, resp.status_code, f"bad vector payload of shape {arr.shape}")
        with self._lock:
            if self._dimension is None:
                self._dimension = int(arr.shape[1])
            elif arr.shape[1] != self._dimension:
                raise ProviderError(
                    self.endpoint_url,
                    resp.status_code,
                    f"dimension changed from {self._dimension} to {arr.shape[1]}",
                )
        return arr

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]


EmbeddingProvider = HashingProvider | RemoteProvider


def build_provider(cfg: ProviderConfig, transport: httpx.BaseTransport | None = None) -> EmbeddingProvider:
    if cfg.kind == "builtin_hash":
        return HashingProvider(dimension=cfg.dimension, seed=cfg.seed)
    if cfg.kind == "remote":
        endpoint = os.environ.get(EMBED_URL_ENV) or cfg.endpoint_url
        if not endpoint:
            raise ValueError(f"remote provider needs endpoint_url or ${EMBED_URL_ENV}")
        return RemoteProvider(
            endpoint_url=endpoint,
            timeout_ms=cfg.timeout_ms,
            max_in_flight=cfg.max_in_flight,
            transport=transport,
        )
    raise ValueError(f"unknown provider kind {cfg.kind!r}")


def embed_sentence(text: str, cfg: ProviderConfig) -> np.ndarray:
    return build_provider(cfg).embed(text)


def pair_features(claim_vec: np.ndarray, premise_vec: np.ndarray) -> np.ndarray:
    """Order-aware pair encoding ``[claim; premise; |claim - premise|]``.

    The absolute-difference block hands linear models an explicit similarity
    signal; the first two blocks keep the pair direction recoverable.
    """
    c = np.asarray(claim_vec, dtype=np.float64)
    p = np.asarray(premise_vec, dtype=np.float64)
    if c.shape != p.shape or c.ndim != 1:
        raise ValueError(f"dimension mismatch: {c.shape} vs {p.shape}")
    return np.concatenate([c, p, np.abs(c - p)])
