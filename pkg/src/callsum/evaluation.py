"""ROUGE-L scoring, macro aggregation over calls, and mean opinion scores."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .textproc import tokenize


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    def __post_init__(self) -> None:
        for name in ("precision", "recall", "f1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class RatingRecord:
    """One annotator's 1-10 judgement of one blinded summary."""

    annotator_id: str
    call_id: str
    blind_label: str
    model_id: str
    score: int
    timestamp: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.score, int) or isinstance(self.score, bool):
            raise ValueError(f"score must be an integer, got {self.score!r}")
        if not 1 <= self.score <= 10:
            raise ValueError(f"score must lie in 1..10, got {self.score}")


@dataclass(frozen=True)
class MosResult:
    scores: dict[str, float]  # model_id -> mean opinion score
    counts: dict[str, int]  # model_id -> number of ratings


@dataclass
class EvalReport:
    per_call: dict[tuple[str, str], RougeScore]  # (model_id, call_id) -> score
    macro: dict[str, RougeScore]  # model_id -> macro-averaged score
    metadata: dict = field(default_factory=dict)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence under token equality."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token_a in a:
        current = [0]
        for j, token_b in enumerate(b, start=1):
            if token_a == token_b:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def rouge_l_sentence(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    """ROUGE-L over two token sequences: R = LCS/|ref|, P = LCS/|cand|, F1 harmonic."""
    if not candidate or not reference:
        raise ValueError("candidate and reference must be non-empty")
    lcs = lcs_length(candidate, reference)
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    return RougeScore(precision=precision, recall=recall, f1=_f1(precision, recall))


def _lcs_match_positions(reference: Sequence[str], candidate: Sequence[str]) -> set[int]:
    """Reference-side token positions taking part in one LCS against the candidate."""
    la, lb = len(reference), len(candidate)
    dp = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(1, la + 1):
        row = dp[i]
        prev = dp[i - 1]
        for j in range(1, lb + 1):
            if reference[i - 1] == candidate[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = max(prev[j], row[j - 1])
    positions: set[int] = set()
    i, j = la, lb
    while i > 0 and j > 0:
        if reference[i - 1] == candidate[j - 1]:
            positions.add(i - 1)
            i -= 1
            j -= 1
        elif dp[i - 1][j] >= dp[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return positions


def rouge_l_summary(
    candidate_sentences: Sequence[str],
    reference_sentences: Sequence[str],
    mode: str = "summary_level",
) -> RougeScore:
    """ROUGE-L between a candidate summary and a reference, sentence lists on both sides.

    ``flat`` concatenates each side into one token sequence. ``summary_level``
    takes, per reference sentence, the union of LCS-matched positions against
    all candidate sentences; matched tokens consume per-token budgets on both
    sides so nothing is counted twice. Recall divides the hit total by the
    reference length and precision by the candidate length.
    """
    if mode not in ("summary_level", "flat"):
        raise ValueError(f"unknown mode {mode!r}")
    cand_tokens = [tokenize(s) for s in candidate_sentences]
    ref_tokens = [tokenize(s) for s in reference_sentences]
    cand_total = sum(len(t) for t in cand_tokens)
    ref_total = sum(len(t) for t in ref_tokens)
    if cand_total == 0 or ref_total == 0:
        raise ValueError("candidate and reference must be non-empty after tokenisation")

    if mode == "flat":
        flat_cand = [t for sent in cand_tokens for t in sent]
        flat_ref = [t for sent in ref_tokens for t in sent]
        return rouge_l_sentence(flat_cand, flat_ref)

    ref_budget = Counter(t for sent in ref_tokens for t in sent)
    cand_budget = Counter(t for sent in cand_tokens for t in sent)
    hits = 0
    for ref_sent in ref_tokens:
        matched: set[int] = set()
        for cand_sent in cand_tokens:
            matched |= _lcs_match_positions(ref_sent, cand_sent)
        for pos in sorted(matched):
            token = ref_sent[pos]
            if ref_budget[token] > 0 and cand_budget[token] > 0:
                hits += 1
                ref_budget[token] -= 1
                cand_budget[token] -= 1
    precision = hits / cand_total
    recall = hits / ref_total
    return RougeScore(precision=precision, recall=recall, f1=_f1(precision, recall))


def aggregate(
    per_call: Mapping[tuple[str, str], RougeScore],
    models: Sequence[str] | None = None,
    metadata: dict | None = None,
) -> EvalReport:
    """Macro rows per model: arithmetic means of the per-call columns.

    F1 is averaged per call like the other columns, never recomputed from the
    macro precision and recall.
    """
    grouped: dict[str, list[RougeScore]] = {}
    for (model_id, _), score in per_call.items():
        grouped.setdefault(model_id, []).append(score)
    wanted = list(models) if models is not None else list(grouped)
    macro: dict[str, RougeScore] = {}
    for model_id in wanted:
        scores = grouped.get(model_id, [])
        if not scores:
            raise ValueError(f"model {model_id!r} has no per-call scores")
        k = len(scores)
        # fsum keeps the means exactly permutation-invariant
        macro[model_id] = RougeScore(
            precision=math.fsum(s.precision for s in scores) / k,
            recall=math.fsum(s.recall for s in scores) / k,
            f1=math.fsum(s.f1 for s in scores) / k,
        )
    return EvalReport(per_call=dict(per_call), macro=macro, metadata=metadata or {})


def mos(ratings: Iterable[RatingRecord]) -> MosResult:
    """Per-model mean opinion score over all (annotator, call) ratings."""
    totals: dict[str, int] = {}
    counts: dict[str, int] = {}
    for record in ratings:
        totals[record.model_id] = totals.get(record.model_id, 0) + record.score
        counts[record.model_id] = counts.get(record.model_id, 0) + 1
    if not counts:
        raise ValueError("no ratings to aggregate")
    scores = {m: totals[m] / counts[m] for m in totals}
    return MosResult(scores=scores, counts=counts)


def render_mos_table(result: MosResult, fmt: str = "tsv", display_names: Mapping[str, str] | None = None) -> str:
    """Two-column table Model / MOS, descending by score, 2 decimal places."""
    names = display_names or {}
    rows = sorted(result.scores.items(), key=lambda kv: (-kv[1], kv[0]))
    if fmt == "tsv":
        lines = ["Model\tMOS"]
        lines += [f"{names.get(m, m)}\t{score:.2f}" for m, score in rows]
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| Model | MOS |", "| --- | --- |"]
        lines += [f"| {names.get(m, m)} | {score:.2f} |" for m, score in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
