"""Blind rating service: sessions, HTTP endpoints, durable rating storage."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

from .service import RatingStore, build_store, create_app
from .sessions import SessionPlan, build_sessions, load_sessions, save_sessions

__all__ = [
    "RatingStore",
    "SessionPlan",
    "build_sessions",
    "build_store",
    "create_app",
    "load_sessions",
    "save_sessions",
    "serve_from_values",
]


def serve_from_values(values: Mapping[str, str], host: str | None = None, port: int | None = None) -> None:
    """Start the rating service from harness config values (blocking)."""
    import uvicorn

    corpus_path = values.get("corpus")
    if not corpus_path:
        raise ValueError("serve-ratings needs a 'corpus' path")
    out_dir = Path(values.get("out", "out"))
    summaries_path = values.get("summaries") or str(out_dir / "summaries.jsonl")
    models = [
        m.strip()
        for m in values.get("rating_models", values.get("models", "")).split(",")
        if m.strip()
    ]
    if not models:
        raise ValueError("serve-ratings needs 'rating_models' (or 'models')")
    annotators = [a.strip() for a in values.get("annotators", "").split(",") if a.strip()]
    if not annotators:
        raise ValueError("serve-ratings needs an 'annotators' list")

    store = build_store(
        corpus_path=corpus_path,
        summaries_path=summaries_path,
        model_ids=models,
        annotators=annotators,
        seed=int(values.get("seed", "42")),
        data_dir=out_dir,
        mode=values.get("mode", "raw_asr"),
    )
    app = create_app(store, ui_dir=values.get("ui_dir") or None)
    uvicorn.run(
        app,
        host=host or values.get("host", "127.0.0.1"),
        port=port or int(values.get("port", "8040")),
        log_level="warning",
    )
