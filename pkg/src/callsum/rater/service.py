"""HTTP service for the blind subjective experiment.

Serves blinded per-call summary sets, collects 1-10 ratings, appends them
durably to a line-delimited log, and reports mean opinion scores. No payload
sent to an annotator session ever names a model.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..corpus import Transcript, load_corpus, load_summaries
from ..evaluation import RatingRecord, mos
from .sessions import SessionPlan, build_sessions, load_sessions, save_sessions

RATINGS_FILE = "ratings.jsonl"
SESSIONS_FILE = "sessions.json"


class RatingValidationError(ValueError):
    def __init__(self, code: str, message: str, status: int = 400):
        super().__init__(message)
        self.code = code
        self.status = status


@dataclass
class _StoredRating:
    record: RatingRecord
    session_id: str


class RatingStore:
    """Session state plus the append-only rating log.

    Appends are flushed and fsynced per record; cursors are derived from the
    log on load, so a restart after an acknowledgement loses nothing.
    """

    def __init__(
        self,
        plans: Sequence[SessionPlan],
        transcripts: Mapping[str, Transcript],
        summary_texts: Mapping[tuple[str, str], str],
        data_dir: str | Path,
        audio_urls: Mapping[str, str] | None = None,
    ):
        self.plans = {p.session_id: p for p in plans}
        self.transcripts = dict(transcripts)
        self.summary_texts = dict(summary_texts)
        self.audio_urls = dict(audio_urls or {})
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._ratings: list[_StoredRating] = []
        self._rated: dict[str, dict[str, dict[str, int]]] = {}  # session -> call -> label -> score
        self._load_log()

    @property
    def ratings_path(self) -> Path:
        return self.data_dir / RATINGS_FILE

    def _load_log(self) -> None:
        if not self.ratings_path.exists():
            return
        for line in self.ratings_path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            raw = json.loads(line)
            record = RatingRecord(
                annotator_id=raw["annotator_id"],
                call_id=raw["call_id"],
                blind_label=raw["blind_label"],
                model_id=raw["model_id"],
                score=raw["score"],
                timestamp=raw.get("timestamp", ""),
            )
            self._remember(_StoredRating(record=record, session_id=raw.get("session_id", "")))

    def _remember(self, stored: _StoredRating) -> None:
        self._ratings.append(stored)
        by_call = self._rated.setdefault(stored.session_id, {})
        by_call.setdefault(stored.record.call_id, {})[stored.record.blind_label] = stored.record.score

    def _cursor(self, plan: SessionPlan) -> int:
        """Number of leading calls that are fully rated."""
        rated = self._rated.get(plan.session_id, {})
        cursor = 0
        for call_id in plan.calls:
            labels = rated.get(call_id, {})
            if len(labels) == len(plan.blind[call_id]):
                cursor += 1
            else:
                break
        return cursor

    def _plan(self, session_id: str) -> SessionPlan:
        plan = self.plans.get(session_id)
        if plan is None:
            raise RatingValidationError("unknown_session", f"no session {session_id!r}", status=404)
        return plan

    def session_overviews(self) -> list[dict]:
        with self._lock:
            out = []
            for plan in self.plans.values():
                done = self._cursor(plan)
                out.append(
                    {
                        "session_id": plan.session_id,
                        "annotator_id": plan.annotator_id,
                        "total_calls": len(plan.calls),
                        "completed_calls": done,
                        "done": done >= len(plan.calls),
                    }
                )
            return out

    def next_item(self, session_id: str) -> dict:
        with self._lock:
            plan = self._plan(session_id)
            cursor = self._cursor(plan)
            if cursor >= len(plan.calls):
                rated = sum(len(v) for v in self._rated.get(session_id, {}).values())
                return {"done": True, "rated_calls": len(plan.calls), "ratings": rated}
            call_id = plan.calls[cursor]
            transcript = self.transcripts[call_id]
            labels = sorted(plan.blind[call_id])
            summaries = []
            for label in labels:
                model_id = plan.blind[call_id][label]
                summaries.append({"label": label, "text": self.summary_texts[(call_id, model_id)]})
            return {
                "done": False,
                "call_id": call_id,
                "progress": {"completed": cursor, "total": len(plan.calls)},
                "transcript": [
                    {"speaker": u.speaker, "text": u.text} for u in transcript.utterances
                ],
                "summaries": summaries,
                "audio_url": self.audio_urls.get(call_id),
            }

    def submit(self, session_id: str, call_id: str, ratings: Mapping[str, object]) -> dict:
        with self._lock:
            plan = self._plan(session_id)
            cursor = self._cursor(plan)

            expected_labels = None
            if call_id in plan.blind:
                expected_labels = set(plan.blind[call_id])
            if expected_labels is None:
                raise RatingValidationError("unknown_call", f"call {call_id!r} is not in this session")

            clean = self._validate_scores(ratings, expected_labels)

            # exact duplicate of an acknowledged submission: idempotent no-op
            stored = self._rated.get(session_id, {}).get(call_id)
            if stored is not None and len(stored) == len(expected_labels):
                if stored == clean:
                    return {"accepted": True, "duplicate": True, "completed": cursor}
                raise RatingValidationError(
                    "already_rated", f"call {call_id!r} was already rated with different values"
                )
            if cursor >= len(plan.calls):
                raise RatingValidationError("session_complete", "session is complete", status=409)
            if plan.calls[cursor] != call_id:
                raise RatingValidationError(
                    "wrong_call",
                    f"expected ratings for call {plan.calls[cursor]!r}, got {call_id!r}",
                    status=409,
                )

            timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat()
            records = []
            for label in sorted(clean):
                records.append(
                    _StoredRating(
                        record=RatingRecord(
                            annotator_id=plan.annotator_id,
                            call_id=call_id,
                            blind_label=label,
                            model_id=plan.blind[call_id][label],
                            score=clean[label],
                            timestamp=timestamp,
                        ),
                        session_id=session_id,
                    )
                )
            self._append(records)
            for stored in records:
                self._remember(stored)
            return {"accepted": True, "duplicate": False, "completed": cursor + 1}

    @staticmethod
    def _validate_scores(ratings: Mapping[str, object], expected: set[str]) -> dict[str, int]:
        got = set(ratings)
        missing = expected - got
        if missing:
            raise RatingValidationError("missing_label", f"missing ratings for {sorted(missing)}")
        extra = got - expected
        if extra:
            raise RatingValidationError("unknown_label", f"unexpected labels {sorted(extra)}")
        clean: dict[str, int] = {}
        for label, value in ratings.items():
            if isinstance(value, bool) or not isinstance(value, int):
                raise RatingValidationError("bad_score", f"score for {label} must be an integer")
            if not 1 <= value <= 10:
                raise RatingValidationError("bad_score", f"score for {label} must lie in 1..10")
            clean[label] = value
        return clean

    def _append(self, records: Sequence[_StoredRating]) -> None:
        with self.ratings_path.open("a", encoding="utf-8") as fh:
            for stored in records:
                r = stored.record
                fh.write(
                    json.dumps(
                        {
                            "session_id": stored.session_id,
                            "annotator_id": r.annotator_id,
                            "call_id": r.call_id,
                            "blind_label": r.blind_label,
                            "model_id": r.model_id,
                            "score": r.score,
                            "timestamp": r.timestamp,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )
            fh.flush()
            os.fsync(fh.fileno())

    def results(self) -> dict:
        with self._lock:
            if not self._ratings:
                raise RatingValidationError("empty_store", "no ratings collected yet", status=409)
            aggregated = mos([s.record for s in self._ratings])
        rows = sorted(aggregated.scores.items(), key=lambda kv: (-kv[1], kv[0]))
        return {
            "results": [
                {"model": m, "mos": score, "count": aggregated.counts[m]} for m, score in rows
            ]
        }


def create_app(store: RatingStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="callsum rating service")

    @app.exception_handler(RatingValidationError)
    async def _validation_handler(_: Request, exc: RatingValidationError):
        return JSONResponse({"code": exc.code, "message": str(exc)}, status_code=exc.status)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/sessions")
    def sessions():
        return {"sessions": store.session_overviews()}

    @app.get("/api/session/{session_id}/next")
    def next_item(session_id: str):
        return store.next_item(session_id)

    @app.post("/api/session/{session_id}/ratings")
    async def submit(session_id: str, request: Request):
        try:
            body = await request.json()
        except Exception:  # noqa: BLE001
            raise RatingValidationError("bad_payload", "body must be a JSON object") from None
        if not isinstance(body, dict) or "call_id" not in body or "ratings" not in body:
            raise RatingValidationError("bad_payload", "body needs 'call_id' and 'ratings'")
        if not isinstance(body["ratings"], dict):
            raise RatingValidationError("bad_payload", "'ratings' must map labels to scores")
        return store.submit(session_id, body["call_id"], body["ratings"])

    @app.get("/api/results")
    def results():
        return store.results()

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def build_store(
    corpus_path: str | Path,
    summaries_path: str | Path,
    model_ids: Sequence[str],
    annotators: Sequence[str],
    seed: int,
    data_dir: str | Path,
    mode: str = "raw_asr",
) -> RatingStore:
    """Load corpus and summaries, then create or resume the session plans."""
    transcripts = {t.call_id: t for t in load_corpus(corpus_path, mode=mode)}
    summary_texts: dict[tuple[str, str], str] = {}
    for s in load_summaries(summaries_path):
        summary_texts[(s.call_id, s.model_id)] = s.text

    call_ids = [c for c in transcripts if all((c, m) in summary_texts for m in model_ids)]
    if not call_ids:
        raise ValueError("no call has summaries for every rated model")

    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    sessions_path = data_dir / SESSIONS_FILE
    if sessions_path.exists():
        plans = load_sessions(sessions_path)
    else:
        plans = build_sessions(annotators, call_ids, model_ids, seed)
        save_sessions(plans, sessions_path)
    return RatingStore(
        plans=plans,
        transcripts=transcripts,
        summary_texts=summary_texts,
        data_dir=data_dir,
    )
