"""Punctuation restoration, sentence segmentation, tokenisation, and stop-word handling."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Protocol, Sequence

import httpx

from .corpus import Sentence, SentenceDocument, Transcript

# strip leading/trailing non-alphanumerics; internal apostrophes, hyphens and
# decimal points survive ("it's", "40.50", "no-wait")
_TOKEN_EDGE = re.compile(r"^[^a-z0-9]+|[^a-z0-9]+$")

# break after . ! ? when followed by whitespace; end-of-text needs no break
_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")

_TERMINAL_MARKS = (".", "!", "?")

_DEFAULT_STOPLIST_RESOURCE = "stopwords_en.txt"


class RestorerError(RuntimeError):
    """External punctuation restorer failed."""


class WordPreservationError(RestorerError):
    """A restorer changed, dropped, or reordered words."""


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, strip surrounding punctuation, drop empties."""
    tokens = []
    for piece in text.lower().split():
        word = _TOKEN_EDGE.sub("", piece)
        if word:
            tokens.append(word)
    return tokens


@dataclass(frozen=True)
class StopList:
    """A fixed set of lowercase stop words, pinned by a version identifier."""

    words: frozenset[str]
    version: str

    def __contains__(self, word: str) -> bool:
        return word in self.words


def parse_stoplist(text: str, fallback_version: str | None = None) -> StopList:
    """Parse a stop list: one word per line, '#' comments ignored.

    A comment of the form ``# version: <id>`` pins the list version; otherwise
    the version is a digest of the word content.
    """
    words: set[str] = set()
    version = fallback_version
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.lower().startswith("version:"):
                version = body.split(":", 1)[1].strip()
            continue
        words.add(line.lower())
    if version is None:
        digest = hashlib.sha256("\n".join(sorted(words)).encode("utf-8")).hexdigest()
        version = f"sha256:{digest[:12]}"
    return StopList(words=frozenset(words), version=version)


def load_stoplist(path: str | Path | None = None) -> StopList:
    """Load a stop list file, or the bundled English list when no path is given."""
    if path is None:
        text = resources.files("callsum.data").joinpath(_DEFAULT_STOPLIST_RESOURCE).read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return parse_stoplist(text)


def content_tokens(tokens: Sequence[str], stoplist: StopList) -> list[str]:
    return [t for t in tokens if t not in stoplist.words]


def content_token_count(sentence: Sentence | str, stoplist: StopList) -> int:
    """Number of non-stop tokens in a sentence."""
    text = sentence.text if isinstance(sentence, Sentence) else sentence
    return len(content_tokens(tokenize(text), stoplist))


class PunctuationRestorer(Protocol):
    """Maps raw utterance text to punctuated text without touching the words."""

    def restore(self, text: str) -> str: ...


class DefaultRestorer:
    """Turn-boundary restorer: capitalise the first word, close with a period."""

    def restore(self, text: str) -> str:
        text = text.strip()
        restored = text[0].upper() + text[1:]
        if not restored.endswith(_TERMINAL_MARKS):
            restored += "."
        return restored


class HttpRestorer:
    """Client for an external restorer service: POST {text} -> {text}.

    On transport failure the request is retried; once retries are exhausted the
    default restorer takes over when ``fallback`` is set, otherwise the error
    propagates.
    """

    def __init__(self, url: str, timeout: float = 5.0, retries: int = 1, fallback: bool = True):
        self.url = url
        self.timeout = timeout
        self.retries = retries
        self.fallback = fallback
        self._default = DefaultRestorer()

    def restore(self, text: str) -> str:
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                response = httpx.post(self.url, json={"text": text}, timeout=self.timeout)
                response.raise_for_status()
                return response.json()["text"]
            except Exception as exc:  # noqa: BLE001 - any transport/shape failure counts
                last_error = exc
        if self.fallback:
            return self._default.restore(text)
        raise RestorerError(f"restorer at {self.url} failed: {last_error}") from last_error


def restore_punctuation(
    transcript: Transcript, restorer: PunctuationRestorer | None = None
) -> list[str]:
    """Restore punctuation for every utterance, enforcing word preservation."""
    restorer = restorer or DefaultRestorer()
    restored: list[str] = []
    for utt in transcript.utterances:
        try:
            text = restorer.restore(utt.text)
        except RestorerError as exc:
            raise RestorerError(
                f"call {transcript.call_id}, utterance {utt.index}: {exc}"
            ) from exc
        if tokenize(text) != tokenize(utt.text):
            raise WordPreservationError(
                f"call {transcript.call_id}, utterance {utt.index}: "
                f"restorer changed the word sequence"
            )
        restored.append(text)
    return restored


def segment_sentences(
    call_id: str, utterances: Sequence[tuple[str, str | None]]
) -> SentenceDocument:
    """Split punctuated utterances into a sentence document.

    Splits after '.', '!' or '?' followed by whitespace; the mark stays with
    its sentence. Every utterance starts a new sentence and hands its speaker
    label to all sentences it produces.
    """
    sentences: list[Sentence] = []
    for text, speaker in utterances:
        text = text.strip()
        if not text:
            raise ValueError(f"call {call_id}: cannot segment empty utterance text")
        for chunk in _SENTENCE_BREAK.split(text):
            chunk = chunk.strip()
            if chunk:
                sentences.append(Sentence(index=len(sentences), text=chunk, speaker=speaker))
    return SentenceDocument(call_id=call_id, sentences=tuple(sentences))


def transcript_to_document(
    transcript: Transcript, restorer: PunctuationRestorer | None = None
) -> SentenceDocument:
    """Run the restore-then-segment pipeline for one call.

    With ``restorer=None`` the utterance texts are assumed to be punctuated
    already and are segmented as-is.
    """
    if restorer is None:
        texts = [u.text for u in transcript.utterances]
    else:
        texts = restore_punctuation(transcript, restorer)
    pairs = [(text, utt.speaker) for text, utt in zip(texts, transcript.utterances)]
    return segment_sentences(transcript.call_id, pairs)
