"""Latent Dirichlet Allocation via collapsed Gibbs sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class LdaModel:
    """A fitted topic model: per-topic word distributions over a fixed vocabulary."""

    topics: int
    alpha: float
    beta: float
    seed: int
    vocabulary: tuple[str, ...]
    topic_word: np.ndarray  # (topics, |V|), rows sum to 1

    def word_index(self, token: str) -> int | None:
        return self._index.get(token)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.vocabulary)})


def lda_fit(
    pseudo_docs: Sequence[Sequence[str]],
    topics: int = 15,
    iterations: int = 500,
    alpha: float | None = None,
    beta: float = 0.01,
    seed: int = 0,
) -> LdaModel:
    """Fit topic-word distributions by collapsed Gibbs sampling.

    The sampler is fully driven by ``seed``; refitting the same input with the
    same seed reproduces the model bit for bit. ``alpha`` defaults to
    50 / topics.

    Topic-word estimates come from the final sample:
    topic_word[k][w] = (count(k, w) + beta) / (count(k) + beta * |V|).
    """
    if topics < 1:
        raise ValueError("topics must be >= 1")
    if alpha is None:
        alpha = 50.0 / topics

    vocabulary: dict[str, int] = {}
    doc_ids: list[int] = []
    word_ids: list[int] = []
    for d, doc in enumerate(pseudo_docs):
        for token in doc:
            if token not in vocabulary:
                vocabulary[token] = len(vocabulary)
            doc_ids.append(d)
            word_ids.append(vocabulary[token])
    if not word_ids:
        raise ValueError("all pseudo-documents are empty")

    v = len(vocabulary)
    n_docs = len(pseudo_docs)
    doc_of = np.array(doc_ids, dtype=np.int64)
    word_of = np.array(word_ids, dtype=np.int64)
    total = len(word_of)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, topics, size=total)

    doc_topic = np.zeros((n_docs, topics), dtype=np.float64)
    topic_term = np.zeros((topics, v), dtype=np.float64)
    topic_total = np.zeros(topics, dtype=np.float64)
    np.add.at(doc_topic, (doc_of, z), 1.0)
    np.add.at(topic_term, (z, word_of), 1.0)
    np.add.at(topic_total, z, 1.0)

    beta_v = beta * v
    for _ in range(iterations):
        for t in range(total):
            d = doc_of[t]
            w = word_of[t]
            k = z[t]
            doc_topic[d, k] -= 1.0
            topic_term[k, w] -= 1.0
            topic_total[k] -= 1.0

            p = (doc_topic[d] + alpha) * (topic_term[:, w] + beta) / (topic_total + beta_v)
            cum = np.cumsum(p)
            k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
            if k >= topics:  # guard against float edge at the top of the cdf
                k = topics - 1

            z[t] = k
            doc_topic[d, k] += 1.0
            topic_term[k, w] += 1.0
            topic_total[k] += 1.0

    topic_word = (topic_term + beta) / (topic_total[:, None] + beta_v)
    return LdaModel(
        topics=topics,
        alpha=alpha,
        beta=beta,
        seed=seed,
        vocabulary=tuple(vocabulary),
        topic_word=topic_word,
    )


def lda_token_score(model: LdaModel, token: str) -> float:
    """Sum of the token's probability across all topics; 0 for unseen tokens."""
    idx = model.word_index(token)
    if idx is None:
        return 0.0
    return float(model.topic_word[:, idx].sum())
