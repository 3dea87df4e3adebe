"""The seven extractive summarisation methods behind one dispatch interface.

Every method maps a sentence document to an ordered selection of sentence
indices. Selections are emitted in document order, ties always break toward
the lower sentence index, and each method is a pure function of
(document, config, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .corpus import SentenceDocument, Summary
from .models import (
    EmbeddingProvider,
    HashedEmbedding,
    kl_divergence,
    kmeans,
    lda_fit,
    lda_token_score,
    pagerank,
    rbm_enhance,
    rbm_fit,
    sentence_features,
    term_distribution,
    tf_isf,
)
from .textproc import StopList, load_stoplist, tokenize

MODEL_IDS = ("lead7", "textrank", "klsum", "bertsum", "tfidfsum", "topicsum", "rbmsum")

MODEL_DISPLAY = {
    "lead7": "Lead-7",
    "textrank": "TextRank",
    "klsum": "KLSum",
    "bertsum": "BERTSum",
    "tfidfsum": "TFIDFSum",
    "topicsum": "TopicSum",
    "rbmsum": "RBMSum",
}

_KLSUM_EPSILON = 1e-3


class UnknownModelError(ValueError):
    """Raised when a model id is not one of the seven configured methods."""


@dataclass(frozen=True)
class SummarizerConfig:
    n: int = 7
    min_content_tokens: int = 7
    cluster_len_min: int = 4
    cluster_len_max: int = 100
    lda_topics: int = 15
    seed: int = 0
    scope: str = "call"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("summary size n must be >= 1")
        if self.cluster_len_min >= self.cluster_len_max:
            raise ValueError("cluster_len_min must be below cluster_len_max")
        if self.scope not in ("call", "corpus"):
            raise ValueError(f"unknown scope {self.scope!r}")


@lru_cache(maxsize=1)
def _default_stoplist() -> StopList:
    return load_stoplist()


def _doc_tokens(doc: SentenceDocument) -> list[list[str]]:
    return [tokenize(s.text) for s in doc.sentences]


def _content(tokens: Sequence[Sequence[str]], stoplist: StopList) -> list[list[str]]:
    return [[t for t in sent if t not in stoplist.words] for sent in tokens]


def _emit(doc: SentenceDocument, model_id: str, indices: Sequence[int]) -> Summary:
    ordered = tuple(sorted(set(indices)))
    text = " ".join(doc.sentences[i].text for i in ordered)
    return Summary(call_id=doc.call_id, model_id=model_id, sentence_indices=ordered, text=text)


def _top_n(scores: Sequence[float], n: int) -> list[int]:
    """Indices of the n highest scores; equal scores favour the lower index."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return order[:n]


def lead_n(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
) -> Summary:
    """First N sentences that carry at least ``min_content_tokens`` non-stop words.

    When too few sentences qualify, the earliest disqualified sentences fill
    the remaining slots.
    """
    cfg = cfg or SummarizerConfig()
    stoplist = stoplist or _default_stoplist()
    content = _content(_doc_tokens(doc), stoplist)
    qualified = [i for i, toks in enumerate(content) if len(toks) >= cfg.min_content_tokens]
    passed = set(qualified)
    backfill = [i for i in range(len(content)) if i not in passed]
    chosen = (qualified + backfill)[: cfg.n]
    return _emit(doc, "lead7", chosen)


def textrank(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
) -> Summary:
    """PageRank over the content-token overlap similarity graph.

    similarity(i, j) = |shared content tokens| / (ln(1 + len_i) + ln(1 + len_j))
    with len counted over all tokens of each sentence.
    """
    cfg = cfg or SummarizerConfig()
    stoplist = stoplist or _default_stoplist()
    tokens = _doc_tokens(doc)
    content_sets = [set(c) for c in _content(tokens, stoplist)]
    n = len(tokens)

    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            overlap = len(content_sets[i] & content_sets[j])
            if overlap:
                sim = overlap / (math.log(1 + len(tokens[i])) + math.log(1 + len(tokens[j])))
                weights[i, j] = weights[j, i] = sim
    scores = pagerank(weights)
    return _emit(doc, "textrank", _top_n(scores.tolist(), cfg.n))


def klsum_selection_order(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
) -> list[int]:
    """Greedy selection sequence: each step adds the sentence that minimises
    KL(document distribution, smoothed candidate-summary distribution).

    Distributions are over content-token occurrences; the candidate side is
    smoothed with epsilon 1e-3. Exposed separately so the per-step optimality
    can be checked against exhaustive enumeration.
    """
    cfg = cfg or SummarizerConfig()
    stoplist = stoplist or _default_stoplist()
    content = _content(_doc_tokens(doc), stoplist)
    vocabulary = list(dict.fromkeys(t for sent in content for t in sent))
    steps = min(cfg.n, len(content))
    if not vocabulary:
        # nothing to match against: degrade to the leading sentences
        return list(range(steps))

    doc_dist = term_distribution(
        [t for sent in content for t in sent], 0.0, vocabulary
    )
    selected: list[int] = []
    pool_tokens: list[str] = []
    remaining = list(range(len(content)))
    for _ in range(steps):
        best_idx = -1
        best_kl = math.inf
        for j in remaining:
            candidate = term_distribution(pool_tokens + content[j], _KLSUM_EPSILON, vocabulary)
            divergence = kl_divergence(doc_dist, candidate)
            if divergence < best_kl:
                best_kl = divergence
                best_idx = j
        selected.append(best_idx)
        pool_tokens.extend(content[best_idx])
        remaining.remove(best_idx)
    return selected


def klsum(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
) -> Summary:
    return _emit(doc, "klsum", klsum_selection_order(doc, cfg, stoplist))


def cluster_sum(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    embedder: EmbeddingProvider | None = None,
) -> Summary:
    """Embed sentences, cluster into N groups, keep each cluster's centroid sentence.

    Sentences whose token count falls outside [cluster_len_min, cluster_len_max]
    are dropped first; if that starves the clusterer below N sentences, the
    filter is lifted entirely.
    """
    cfg = cfg or SummarizerConfig()
    embedder = embedder or HashedEmbedding(seed=cfg.seed)
    tokens = _doc_tokens(doc)

    keep = [
        i
        for i, toks in enumerate(tokens)
        if cfg.cluster_len_min <= len(toks) <= cfg.cluster_len_max
    ]
    if len(keep) < cfg.n:
        keep = list(range(len(tokens)))

    vectors = np.asarray(embedder.embed([doc.sentences[i].text for i in keep]), dtype=float)
    n_clusters = min(cfg.n, len(keep))
    result = kmeans(vectors, n_clusters, seed=cfg.seed)

    chosen: set[int] = set()
    for k in range(n_clusters):
        members = np.flatnonzero(result.assignments == k)
        if len(members) == 0:
            continue
        dist2 = ((vectors[members] - result.centroids[k]) ** 2).sum(axis=1)
        nearest = members[int(dist2.argmin())]  # argmin favours the earlier sentence
        chosen.add(keep[nearest])
    return _emit(doc, "bertsum", sorted(chosen))


def tfidf_sum(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
    corpus_docs: Sequence[SentenceDocument] | None = None,
) -> Summary:
    """Rank sentences by the summed tf-isf weight of their content tokens."""
    cfg = cfg or SummarizerConfig()
    stoplist = stoplist or _default_stoplist()
    tokens = _doc_tokens(doc)
    isf_sentences = _scope_sentences(cfg, tokens, corpus_docs)
    weights = tf_isf(tokens, stoplist.words, isf_sentences=isf_sentences)
    scores = [sum(w.values()) for w in weights]
    return _emit(doc, "tfidfsum", _top_n(scores, cfg.n))


def topic_sum(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
    corpus_docs: Sequence[SentenceDocument] | None = None,
) -> Summary:
    """Fit a topic model on the call's sentences and rank sentences by the
    total across-topic score of their distinct content tokens."""
    cfg = cfg or SummarizerConfig()
    stoplist = stoplist or _default_stoplist()
    content = _content(_doc_tokens(doc), stoplist)
    pseudo_docs = _scope_sentences(cfg, content, corpus_docs, stoplist=stoplist) or content
    if not any(pseudo_docs):
        raise ValueError(f"call {doc.call_id}: no content tokens to fit a topic model on")
    model = lda_fit(pseudo_docs, topics=cfg.lda_topics, seed=cfg.seed)
    scores = [
        sum(lda_token_score(model, t) for t in dict.fromkeys(sent)) for sent in content
    ]
    return _emit(doc, "topicsum", _top_n(scores, cfg.n))


def rbm_sum(
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
) -> Summary:
    """Score sentences by the summed hidden activations of an RBM trained on
    the call's own feature matrix."""
    cfg = cfg or SummarizerConfig()
    stoplist = stoplist or _default_stoplist()
    features = sentence_features(_doc_tokens(doc), stoplist.words)
    model = rbm_fit(features, hidden=6, seed=cfg.seed)
    scores = [float(rbm_enhance(model, row).sum()) for row in features]
    return _emit(doc, "rbmsum", _top_n(scores, cfg.n))


def _scope_sentences(
    cfg: SummarizerConfig,
    local: Sequence[Sequence[str]],
    corpus_docs: Sequence[SentenceDocument] | None,
    stoplist: StopList | None = None,
) -> list[list[str]] | None:
    """Token lists backing corpus-wide statistics, or None for call scope."""
    if cfg.scope != "corpus" or not corpus_docs:
        return None
    pooled: list[list[str]] = []
    for doc in corpus_docs:
        for sentence in doc.sentences:
            tokens = tokenize(sentence.text)
            if stoplist is not None:
                tokens = [t for t in tokens if t not in stoplist.words]
            pooled.append(tokens)
    return pooled


def summarize(
    model_id: str,
    doc: SentenceDocument,
    cfg: SummarizerConfig | None = None,
    stoplist: StopList | None = None,
    embedder: EmbeddingProvider | None = None,
    corpus_docs: Sequence[SentenceDocument] | None = None,
) -> Summary:
    """Route to one of the seven methods by model id."""
    cfg = cfg or SummarizerConfig()
    if model_id == "lead7":
        return lead_n(doc, cfg, stoplist)
    if model_id == "textrank":
        return textrank(doc, cfg, stoplist)
    if model_id == "klsum":
        return klsum(doc, cfg, stoplist)
    if model_id == "bertsum":
        return cluster_sum(doc, cfg, embedder)
    if model_id == "tfidfsum":
        return tfidf_sum(doc, cfg, stoplist, corpus_docs)
    if model_id == "topicsum":
        return topic_sum(doc, cfg, stoplist, corpus_docs)
    if model_id == "rbmsum":
        return rbm_sum(doc, cfg, stoplist)
    raise UnknownModelError(f"unknown model id {model_id!r}; expected one of {MODEL_IDS}")
