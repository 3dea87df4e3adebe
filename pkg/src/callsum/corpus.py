"""Data model and line-delimited persistence for call transcripts, gold summaries, and produced summaries."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

SPEAKERS = ("agent", "customer", "other")

# marks a raw ASR utterance as invalid: uppercase or sentence punctuation
_RAW_FORBIDDEN = set(".!?,;:")

_META_KEY = "_meta"


class CorpusError(ValueError):
    """Malformed record or invariant violation in corpus data."""


@dataclass(frozen=True)
class Utterance:
    """One speaker turn of a call."""

    index: int
    speaker: str
    text: str

    def __post_init__(self) -> None:
        if self.speaker not in SPEAKERS:
            raise CorpusError(f"unknown speaker {self.speaker!r} at utterance {self.index}")
        if not self.text.strip():
            raise CorpusError(f"empty text at utterance {self.index}")


@dataclass(frozen=True)
class Transcript:
    """An ordered, speaker-labelled transcript of one call."""

    call_id: str
    domain: str
    utterances: tuple[Utterance, ...]

    def __post_init__(self) -> None:
        if not self.call_id:
            raise CorpusError("transcript without call_id")
        for expected, utt in enumerate(self.utterances):
            if utt.index != expected:
                raise CorpusError(
                    f"call {self.call_id}: utterance indices must be 0..n-1, "
                    f"got {utt.index} at position {expected}"
                )


@dataclass(frozen=True)
class Sentence:
    """One segmented sentence of a call document."""

    index: int
    text: str
    speaker: str | None = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise CorpusError(f"empty sentence text at index {self.index}")


@dataclass(frozen=True)
class SentenceDocument:
    """The punctuated, segmented sentence list a summariser consumes."""

    call_id: str
    sentences: tuple[Sentence, ...]

    def __post_init__(self) -> None:
        if not self.sentences:
            raise CorpusError(f"call {self.call_id}: document has no sentences")
        for expected, sent in enumerate(self.sentences):
            if sent.index != expected:
                raise CorpusError(
                    f"call {self.call_id}: sentence indices must be contiguous, "
                    f"got {sent.index} at position {expected}"
                )


@dataclass(frozen=True)
class GoldSummary:
    """Human-selected reference summary, stored as free sentence texts."""

    call_id: str
    sentences: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.sentences:
            raise CorpusError(f"call {self.call_id}: gold summary has no sentences")


@dataclass(frozen=True)
class Summary:
    """An ordered selection of document sentences produced by one model."""

    call_id: str
    model_id: str
    sentence_indices: tuple[int, ...]
    text: str

    def __post_init__(self) -> None:
        idx = self.sentence_indices
        if any(i < 0 for i in idx):
            raise CorpusError(f"call {self.call_id}: negative sentence index")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise CorpusError(
                f"call {self.call_id} ({self.model_id}): sentence indices must be strictly ascending"
            )


def validate_raw_asr(transcript: Transcript) -> None:
    """Reject utterances that contain uppercase letters or sentence punctuation."""
    for utt in transcript.utterances:
        bad = any(c.isupper() or c in _RAW_FORBIDDEN for c in utt.text)
        if bad:
            raise CorpusError(
                f"call {transcript.call_id}, utterance {utt.index}: "
                f"raw ASR text must be lowercase with no sentence punctuation: {utt.text!r}"
            )


def _iter_records(path: Path) -> Iterable[tuple[int, dict]]:
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed record: {exc.msg}") from exc
            if not isinstance(record, dict):
                raise CorpusError(f"{path}:{lineno}: record must be an object")
            yield lineno, record


def _require(record: dict, key: str, path: Path, lineno: int):
    if key not in record:
        raise CorpusError(f"{path}:{lineno}: missing field {key!r}")
    return record[key]


def load_corpus(path: str | Path, mode: str = "punctuated") -> list[Transcript]:
    """Load a transcripts file, one call per line, preserving file order.

    ``mode="raw_asr"`` additionally enforces the lowercase/no-punctuation rule
    on every utterance.
    """
    if mode not in ("raw_asr", "punctuated"):
        raise ValueError(f"unknown ingest mode {mode!r}")
    path = Path(path)
    transcripts: list[Transcript] = []
    seen: set[str] = set()
    for lineno, record in _iter_records(path):
        call_id = _require(record, "call_id", path, lineno)
        if call_id in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate call_id {call_id!r}")
        seen.add(call_id)
        utterances = tuple(
            Utterance(index=i, speaker=u.get("speaker", "other"), text=u.get("text", ""))
            for i, u in enumerate(_require(record, "utterances", path, lineno))
        )
        transcript = Transcript(call_id=call_id, domain=record.get("domain", ""), utterances=utterances)
        if mode == "raw_asr":
            validate_raw_asr(transcript)
        transcripts.append(transcript)
    return transcripts


def save_corpus(transcripts: Sequence[Transcript], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for t in transcripts:
            record = {
                "call_id": t.call_id,
                "domain": t.domain,
                "utterances": [{"speaker": u.speaker, "text": u.text} for u in t.utterances],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_gold(path: str | Path) -> list[GoldSummary]:
    """Load gold summaries, one call per line, order preserved."""
    path = Path(path)
    out: list[GoldSummary] = []
    seen: set[str] = set()
    for lineno, record in _iter_records(path):
        call_id = _require(record, "call_id", path, lineno)
        if call_id in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate call_id {call_id!r}")
        seen.add(call_id)
        sentences = tuple(_require(record, "sentences", path, lineno))
        if not sentences:
            raise CorpusError(f"{path}:{lineno}: gold summary for {call_id!r} has no sentences")
        out.append(GoldSummary(call_id=call_id, sentences=sentences))
    return out


def save_gold(gold: Sequence[GoldSummary], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for g in gold:
            fh.write(json.dumps({"call_id": g.call_id, "sentences": list(g.sentences)}, ensure_ascii=False) + "\n")


def save_summaries(summaries: Sequence[Summary], path: str | Path, meta: dict | None = None) -> None:
    """Write summaries one record per line; an optional metadata record goes first.

    The metadata record is distinguishable from summary records and is skipped
    by :func:`load_summaries`, so save/load round-trips are lossless.
    """
    for s in summaries:
        if not isinstance(s, Summary):
            raise CorpusError(f"not a Summary: {s!r}")
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        if meta is not None:
            fh.write(json.dumps({_META_KEY: meta}, ensure_ascii=False, sort_keys=True) + "\n")
        for s in summaries:
            record = {
                "call_id": s.call_id,
                "model_id": s.model_id,
                "sentence_indices": list(s.sentence_indices),
                "text": s.text,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_summaries(path: str | Path) -> list[Summary]:
    path = Path(path)
    out: list[Summary] = []
    for lineno, record in _iter_records(path):
        if _META_KEY in record:
            continue
        out.append(
            Summary(
                call_id=_require(record, "call_id", path, lineno),
                model_id=_require(record, "model_id", path, lineno),
                sentence_indices=tuple(_require(record, "sentence_indices", path, lineno)),
                text=_require(record, "text", path, lineno),
            )
        )
    return out


def read_summaries_meta(path: str | Path) -> dict | None:
    """Return the metadata record of a summaries file, if present."""
    for _, record in _iter_records(Path(path)):
        if _META_KEY in record:
            return record[_META_KEY]
        return None
    return None


def save_documents(documents: Sequence[SentenceDocument], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for doc in documents:
            record = {
                "call_id": doc.call_id,
                "sentences": [{"text": s.text, "speaker": s.speaker} for s in doc.sentences],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_documents(path: str | Path) -> list[SentenceDocument]:
    path = Path(path)
    out: list[SentenceDocument] = []
    seen: set[str] = set()
    for lineno, record in _iter_records(path):
        call_id = _require(record, "call_id", path, lineno)
        if call_id in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate call_id {call_id!r}")
        seen.add(call_id)
        sentences = tuple(
            Sentence(index=i, text=s["text"], speaker=s.get("speaker"))
            for i, s in enumerate(_require(record, "sentences", path, lineno))
        )
        out.append(SentenceDocument(call_id=call_id, sentences=sentences))
    return out
