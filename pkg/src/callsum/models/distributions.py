"""Unigram term distributions, KL divergence, and within-call tf-isf weighting."""

from __future__ import annotations

import math
from collections import Counter
from typing import Collection, Mapping, Sequence

TermDistribution = dict[str, float]


def term_distribution(
    tokens: Sequence[str],
    smoothing_epsilon: float = 0.0,
    vocabulary: Sequence[str] | Collection[str] = (),
) -> TermDistribution:
    """Smoothed unigram distribution p(w) = (count(w) + eps) / (total + eps * |V|).

    Tokens outside the vocabulary are ignored. The returned mapping covers the
    whole vocabulary in its given iteration order.
    """
    if smoothing_epsilon < 0:
        raise ValueError("smoothing_epsilon must be >= 0")
    vocab = list(dict.fromkeys(vocabulary))
    if not vocab:
        raise ValueError("vocabulary must be non-empty")
    vocab_set = set(vocab)
    counts = Counter(t for t in tokens if t in vocab_set)
    total = sum(counts.values())
    denom = total + smoothing_epsilon * len(vocab)
    if denom == 0:
        raise ValueError("empty token list requires smoothing_epsilon > 0")
    return {w: (counts[w] + smoothing_epsilon) / denom for w in vocab}


def kl_divergence(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    """KL(p || q) in nats, with 0 * ln(0/q) = 0. Requires matching vocabularies."""
    if set(p) != set(q):
        raise ValueError("distributions must share a vocabulary")
    total = 0.0
    for word, pw in p.items():
        if pw == 0.0:
            continue
        qw = q[word]
        if qw <= 0.0:
            raise ValueError(f"q has zero mass on {word!r} where p > 0")
        total += pw * math.log(pw / qw)
    # float rounding can leave an epsilon below zero for near-identical inputs
    if -1e-12 < total < 0.0:
        return 0.0
    return total


def tf_isf(
    sentences: Sequence[Sequence[str]],
    stopwords: Collection[str],
    isf_sentences: Sequence[Sequence[str]] | None = None,
) -> list[dict[str, float]]:
    """Per-sentence tf-isf weights, treating each sentence as a pseudo-document.

    tf(w, s) = count(w in s) / content-token count of s; isf(w) =
    ln((1 + n) / (1 + sf(w))) + 1 over the sentence collection (``isf_sentences``
    when given, e.g. for corpus-scoped statistics). Stop words carry weight 0
    and never appear in the output maps.
    """
    stop = set(stopwords)
    content = [[t for t in sent if t not in stop] for sent in sentences]
    isf_content = content
    if isf_sentences is not None:
        isf_content = [[t for t in sent if t not in stop] for sent in isf_sentences]

    n = len(isf_content)
    sf: Counter[str] = Counter()
    for sent in isf_content:
        sf.update(set(sent))
    isf = {w: math.log((1 + n) / (1 + f)) + 1.0 for w, f in sf.items()}

    weights: list[dict[str, float]] = []
    for sent in content:
        counts = Counter(sent)
        size = len(sent)
        if size == 0:
            weights.append({})
            continue
        # unseen-in-isf words (possible under corpus scope) get the max isf
        default_isf = math.log(1 + n) + 1.0
        weights.append(
            {w: (c / size) * isf.get(w, default_isf) for w, c in counts.items()}
        )
    return weights
