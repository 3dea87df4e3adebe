"""Session planning for the blind rating experiment.

Sessions are pre-generated from a seed: every annotator receives the same
call order, while the label-to-model mapping is reshuffled per (session, call)
so a label never tracks a model across calls. Blind maps live server-side only.
"""

from __future__ import annotations

import hashlib
import json
import random
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

LABELS = string.ascii_uppercase


@dataclass(frozen=True)
class SessionPlan:
    session_id: str
    annotator_id: str
    calls: tuple[str, ...]
    # call_id -> blind label -> model_id; bijective per call
    blind: Mapping[str, Mapping[str, str]]


def _session_token(seed: int, annotator_id: str) -> str:
    digest = hashlib.blake2b(f"{seed}:{annotator_id}".encode("utf-8"), digest_size=6)
    return digest.hexdigest()


def build_sessions(
    annotators: Sequence[str],
    call_ids: Sequence[str],
    model_ids: Sequence[str],
    seed: int,
) -> list[SessionPlan]:
    if len(model_ids) > len(LABELS):
        raise ValueError("more models than available blind labels")
    if len(set(annotators)) != len(annotators):
        raise ValueError("annotator ids must be unique")
    plans = []
    for annotator in annotators:
        session_id = _session_token(seed, annotator)
        blind: dict[str, dict[str, str]] = {}
        for call_id in call_ids:
            rng = random.Random(f"{seed}:{session_id}:{call_id}")
            order = list(model_ids)
            rng.shuffle(order)
            blind[call_id] = {LABELS[i]: model for i, model in enumerate(order)}
        plans.append(
            SessionPlan(
                session_id=session_id,
                annotator_id=annotator,
                calls=tuple(call_ids),
                blind=blind,
            )
        )
    return plans


def save_sessions(plans: Sequence[SessionPlan], path: str | Path) -> None:
    payload = [
        {
            "session_id": p.session_id,
            "annotator_id": p.annotator_id,
            "calls": list(p.calls),
            "blind": {c: dict(m) for c, m in p.blind.items()},
        }
        for p in plans
    ]
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")


def load_sessions(path: str | Path) -> list[SessionPlan]:
    payload = json.loads(Path(path).read_text("utf-8"))
    return [
        SessionPlan(
            session_id=p["session_id"],
            annotator_id=p["annotator_id"],
            calls=tuple(p["calls"]),
            blind=p["blind"],
        )
        for p in payload
    ]
