"""Per-sentence feature vectors feeding the RBM scorer."""

from __future__ import annotations

from collections import Counter
from typing import Collection, Sequence

import numpy as np

from .distributions import tf_isf

FEATURE_NAMES = (
    "position",
    "length",
    "mean_tf_isf",
    "numeral_count",
    "centroid_cohesion",
    "content_ratio",
)


def raw_sentence_features(
    sentences: Sequence[Sequence[str]], stopwords: Collection[str]
) -> np.ndarray:
    """Unnormalised (m, 6) feature matrix for the tokenised sentences of one call.

    Columns: position weight 1 - i/max(1, n-1); token count; mean tf-isf over
    the sentence's content tokens; count of tokens containing a digit; cosine
    between the sentence's content-token counts and the document total; content
    token share of all tokens.
    """
    stop = set(stopwords)
    n = len(sentences)
    if n == 0:
        raise ValueError("need at least one sentence")
    content = [[t for t in sent if t not in stop] for sent in sentences]
    weights = tf_isf(sentences, stop)

    vocab = {w: i for i, w in enumerate(dict.fromkeys(t for sent in content for t in sent))}
    counts = np.zeros((n, max(1, len(vocab))))
    for i, sent in enumerate(content):
        for w, c in Counter(sent).items():
            counts[i, vocab[w]] = c
    doc_vector = counts.sum(axis=0)
    doc_norm = np.linalg.norm(doc_vector)

    rows = np.zeros((n, 6))
    for i, sent in enumerate(sentences):
        total = len(sent)
        rows[i, 0] = 1.0 - i / max(1, n - 1)
        rows[i, 1] = total
        rows[i, 2] = (sum(weights[i].values()) / len(weights[i])) if weights[i] else 0.0
        rows[i, 3] = sum(1 for t in sent if any(c.isdigit() for c in t))
        norm = np.linalg.norm(counts[i])
        rows[i, 4] = float(counts[i] @ doc_vector / (norm * doc_norm)) if norm and doc_norm else 0.0
        rows[i, 5] = len(content[i]) / total if total else 0.0
    return rows


def sentence_features(
    sentences: Sequence[Sequence[str]], stopwords: Collection[str]
) -> np.ndarray:
    """Min-max normalised feature matrix; constant columns map to 0.5."""
    raw = raw_sentence_features(sentences, stopwords)
    lo = raw.min(axis=0)
    hi = raw.max(axis=0)
    span = hi - lo
    out = np.full_like(raw, 0.5)
    varying = span > 0
    out[:, varying] = (raw[:, varying] - lo[varying]) / span[varying]
    return out
