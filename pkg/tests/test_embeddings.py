from __future__ import annotations

import numpy as np
import pytest

from callsum.models import HashedEmbedding, hashed_embedding


def test_same_tokens_same_vector():
    a = hashed_embedding(["hello", "there"], dim=32, seed=4)
    b = hashed_embedding(["hello", "there"], dim=32, seed=4)
    assert np.array_equal(a, b)


def test_empty_tokens_give_zero_vector():
    assert np.array_equal(hashed_embedding([], dim=16, seed=0), np.zeros(16))


def test_single_token_vector_is_unit_norm():
    vec = hashed_embedding(["refund"], dim=64, seed=1)
    assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-9)


def test_seed_changes_vectors():
    a = hashed_embedding(["refund"], dim=64, seed=1)
    b = hashed_embedding(["refund"], dim=64, seed=2)
    assert not np.array_equal(a, b)


def test_provider_embeds_sentences():
    provider = HashedEmbedding(dim=24, seed=9)
    out = provider.embed(["The refund lands friday.", "Thanks."])
    assert out.shape == (2, 24)
    assert np.all(np.isfinite(out))
    again = provider.embed(["The refund lands friday.", "Thanks."])
    assert np.array_equal(out, again)


def test_mean_of_token_vectors():
    provider = HashedEmbedding(dim=8, seed=2)
    sent = provider.embed(["alpha beta"])[0]
    expected = (hashed_embedding(["alpha"], 8, 2) + hashed_embedding(["beta"], 8, 2)) / 2
    assert sent == pytest.approx(expected)
