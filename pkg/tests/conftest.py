from __future__ import annotations

import json
from pathlib import Path

import pytest

from callsum.corpus import Sentence, SentenceDocument

FIXTURES = Path(__file__).parent / "fixtures"


def make_doc(texts, call_id="c1", speakers=None):
    speakers = speakers or [None] * len(texts)
    return SentenceDocument(
        call_id=call_id,
        sentences=tuple(Sentence(index=i, text=t, speaker=s) for i, (t, s) in enumerate(zip(texts, speakers))),
    )


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def transcripts_path() -> Path:
    return FIXTURES / "transcripts.jsonl"


@pytest.fixture
def gold_path() -> Path:
    return FIXTURES / "gold.jsonl"


@pytest.fixture
def rbm_fixture_matrix():
    return json.loads((FIXTURES / "rbm_features.json").read_text())
