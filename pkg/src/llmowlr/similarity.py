"""Sentence similarity providers for ranking noise axioms."""

from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np
from sklearn.feature_extraction.text import TfidfVectorizer

from .client import Endpoint, post_json
from .errors import EndpointError, ProviderError


class SimilarityProvider(Protocol):
    def fit(self, corpus: Sequence[str]) -> "SimilarityProvider": ...

    def scores(self, query: str, sentences: Sequence[str]) -> list[float]: ...


class TfIdfCosine:
    """Cosine similarity of TF-IDF vectors over lowercase word tokens.

    Fit once on the ontology's sentences so IDF weights are shared by every
    query against that ontology. Single-character tokens count as words.
    """

    def __init__(self):
        self._vec = TfidfVectorizer(lowercase=True, token_pattern=r"(?u)\b\w+\b")
        self._fitted = False

    def fit(self, corpus: Sequence[str]) -> "TfIdfCosine":
        self._vec.fit(list(corpus) or [""])
        self._fitted = True
        return self

    def scores(self, query: str, sentences: Sequence[str]) -> list[float]:
        if not sentences:
            return []
        if not self._fitted:
            self.fit([query, *sentences])
        q = self._vec.transform([query])
        m = self._vec.transform(list(sentences))
        # rows are L2-normalised, so the dot product is the cosine
        return [float(x) for x in (m @ q.T).toarray().ravel()]

    def similarity(self, a: str, b: str) -> float:
        return self.scores(a, [b])[0]


class RemoteEmbedding:
    """Embeddings from an OpenAI-style ``/v1/embeddings`` endpoint."""

    def __init__(self, endpoint: Endpoint, model: str, batch_size: int = 64):
        self.endpoint = endpoint
        self.model = model
        self.batch_size = batch_size
        self._cache: dict[str, np.ndarray] = {}

    def _embed(self, sentences: Sequence[str]) -> None:
        missing = list(dict.fromkeys(s for s in sentences if s not in self._cache))
        for i in range(0, len(missing), self.batch_size):
            chunk = missing[i : i + self.batch_size]
            try:
                data, _ = post_json(self.endpoint, "/v1/embeddings", {"model": self.model, "input": chunk})
            except EndpointError as e:
                raise ProviderError(str(e), e.attempts, e.status) from e
            rows = data.get("data") if isinstance(data, dict) else None
            if not isinstance(rows, list) or len(rows) != len(chunk):
                raise ProviderError("embedding response does not match the request")
            for text, row in zip(chunk, rows):
                v = np.asarray(row["embedding"], dtype=float)
                n = np.linalg.norm(v)
                self._cache[text] = v / n if n else v

    def fit(self, corpus: Sequence[str]) -> "RemoteEmbedding":
        self._embed(corpus)
        return self

    def scores(self, query: str, sentences: Sequence[str]) -> list[float]:
        if not sentences:
            return []
        self._embed([query, *sentences])
        q = self._cache[query]
        return [float(self._cache[s] @ q) for s in sentences]
