"""CLI orchestration: ingest, summarise, evaluate, report, rating service, MOS."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

from . import evaluation
from .corpus import (
    CorpusError,
    SentenceDocument,
    Summary,
    Transcript,
    load_corpus,
    load_gold,
    save_documents,
    save_summaries,
)
from .evaluation import EvalReport, RatingRecord, RougeScore, mos, render_mos_table
from .models import HashedEmbedding, HttpEmbedding
from .summarizers import (
    MODEL_DISPLAY,
    MODEL_IDS,
    SummarizerConfig,
    UnknownModelError,
    summarize,
)
from .textproc import DefaultRestorer, HttpRestorer, load_stoplist, transcript_to_document

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PARTIAL = 3

_CONFIG_KEYS = {
    "corpus",
    "gold",
    "out",
    "models",
    "n",
    "seed",
    "mode",
    "scope",
    "rouge_mode",
    "restorer_url",
    "restorer_timeout",
    "restorer_retries",
    "restorer_fallback",
    "embedder_url",
    "workers",
    "stoplist",
    "summaries",
    "annotators",
    "rating_models",
    "host",
    "port",
    "ui_dir",
}


class ConfigError(ValueError):
    """Unusable run configuration."""


@dataclass(frozen=True)
class RunConfig:
    corpus_path: str
    out_dir: str = "out"
    gold_path: str | None = None
    models: tuple[str, ...] = MODEL_IDS
    n: int = 7
    seed: int = 42
    mode: str = "raw_asr"
    scope: str = "call"
    rouge_mode: str = "summary_level"
    restorer_url: str | None = None
    restorer_timeout: float = 5.0
    restorer_retries: int = 1
    restorer_fallback: bool = True
    embedder_url: str | None = None
    stoplist_path: str | None = None
    workers: int = 4

    def __post_init__(self) -> None:
        for model_id in self.models:
            if model_id not in MODEL_IDS:
                raise ConfigError(f"unknown model id {model_id!r}")
        if self.mode not in ("raw_asr", "punctuated"):
            raise ConfigError(f"unknown preprocessing mode {self.mode!r}")
        if self.rouge_mode not in ("summary_level", "flat"):
            raise ConfigError(f"unknown rouge mode {self.rouge_mode!r}")

    def fingerprint(self) -> str:
        """Hash of the input and parameter fields; output locations excluded."""
        payload = "\n".join(
            [
                f"corpus={self.corpus_path}",
                f"gold={self.gold_path or ''}",
                f"models={','.join(self.models)}",
                f"n={self.n}",
                f"seed={self.seed}",
                f"mode={self.mode}",
                f"scope={self.scope}",
                f"rouge_mode={self.rouge_mode}",
                f"restorer_url={self.restorer_url or ''}",
                f"restorer={self.restorer_timeout}:{self.restorer_retries}:{self.restorer_fallback}",
                f"embedder_url={self.embedder_url or ''}",
            ]
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Flat key-value config: one ``key = value`` per line, '#' comments ignored."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def run_config_from_values(values: Mapping[str, str]) -> RunConfig:
    if "corpus" not in values or not values["corpus"]:
        raise ConfigError("config needs a 'corpus' path")
    return RunConfig(
        corpus_path=values["corpus"],
        gold_path=values.get("gold") or None,
        out_dir=values.get("out", "out"),
        models=tuple(m.strip() for m in values.get("models", ",".join(MODEL_IDS)).split(",") if m.strip()),
        n=int(values.get("n", "7")),
        seed=int(values.get("seed", "42")),
        mode=values.get("mode", "raw_asr"),
        scope=values.get("scope", "call"),
        rouge_mode=values.get("rouge_mode", "summary_level"),
        restorer_url=values.get("restorer_url") or None,
        restorer_timeout=float(values.get("restorer_timeout", "5.0")),
        restorer_retries=int(values.get("restorer_retries", "1")),
        restorer_fallback=_parse_bool(values.get("restorer_fallback", "true")),
        embedder_url=values.get("embedder_url") or None,
        stoplist_path=values.get("stoplist") or None,
        workers=int(values.get("workers", "4")),
    )


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


@dataclass
class ExperimentResult:
    summaries: list[Summary]
    documents: list[SentenceDocument]
    report: EvalReport | None
    failures: list[dict] = field(default_factory=list)
    skipped_calls: list[str] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.failures)


def _build_documents(config: RunConfig, transcripts: Sequence[Transcript]) -> list[SentenceDocument]:
    restorer = None
    if config.mode == "raw_asr":
        if config.restorer_url:
            restorer = HttpRestorer(
                config.restorer_url,
                timeout=config.restorer_timeout,
                retries=config.restorer_retries,
                fallback=config.restorer_fallback,
            )
        else:
            restorer = DefaultRestorer()
    return [transcript_to_document(t, restorer) for t in transcripts]


def run_experiment(config: RunConfig) -> ExperimentResult:
    """Run the full pipeline: ingest, preprocess, summarise, evaluate, persist.

    One model failing on one call is recorded and skipped; the run continues.
    Outputs are deterministic for a fixed config: rerunning writes identical
    bytes.
    """
    transcripts = load_corpus(config.corpus_path, mode=config.mode)
    stoplist = load_stoplist(config.stoplist_path)
    documents = _build_documents(config, transcripts)
    embedder = (
        HttpEmbedding(config.embedder_url)
        if config.embedder_url
        else HashedEmbedding(seed=config.seed)
    )
    summarizer_cfg = SummarizerConfig(n=config.n, seed=config.seed, scope=config.scope)
    corpus_docs = documents if config.scope == "corpus" else None

    failures: list[dict] = []

    def run_call(doc: SentenceDocument) -> dict[str, Summary | Exception]:
        results: dict[str, Summary | Exception] = {}
        for model_id in config.models:
            try:
                results[model_id] = summarize(
                    model_id,
                    doc,
                    summarizer_cfg,
                    stoplist=stoplist,
                    embedder=embedder,
                    corpus_docs=corpus_docs,
                )
            except Exception as exc:  # noqa: BLE001 - per-cell isolation
                results[model_id] = exc
        return results

    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as pool:
        per_call_results = list(pool.map(run_call, documents))

    summaries: list[Summary] = []
    for doc, results in zip(documents, per_call_results):
        for model_id in config.models:
            outcome = results[model_id]
            if isinstance(outcome, Exception):
                failures.append(
                    {"call_id": doc.call_id, "model_id": model_id, "error": str(outcome)}
                )
            else:
                summaries.append(outcome)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = {
        "config_hash": config.fingerprint(),
        "stoplist_version": stoplist.version,
        "seed": config.seed,
        "models": list(config.models),
        "mode": config.mode,
        "scope": config.scope,
    }
    save_summaries(summaries, out_dir / "summaries.jsonl", meta=meta)

    report: EvalReport | None = None
    skipped: list[str] = []
    if config.gold_path:
        gold_by_call = {g.call_id: g for g in load_gold(config.gold_path)}
        doc_by_call = {d.call_id: d for d in documents}
        per_call: dict[tuple[str, str], RougeScore] = {}
        for summary in summaries:
            gold = gold_by_call.get(summary.call_id)
            if gold is None:
                if summary.call_id not in skipped:
                    skipped.append(summary.call_id)
                    print(f"warning: no gold summary for call {summary.call_id}, skipped", file=sys.stderr)
                continue
            doc = doc_by_call[summary.call_id]
            candidate = [doc.sentences[i].text for i in summary.sentence_indices]
            per_call[(summary.model_id, summary.call_id)] = evaluation.rouge_l_summary(
                candidate, list(gold.sentences), mode=config.rouge_mode
            )
        scored_models = [m for m in config.models if any(k[0] == m for k in per_call)]
        report = evaluation.aggregate(
            per_call,
            models=scored_models,
            metadata={
                **meta,
                "rouge_mode": config.rouge_mode,
                "n": config.n,
                "skipped_calls": skipped,
                "failures": failures,
            },
        )
        _write_report(report, out_dir)

    return ExperimentResult(
        summaries=summaries,
        documents=documents,
        report=report,
        failures=failures,
        skipped_calls=skipped,
    )


def _report_to_dict(report: EvalReport) -> dict:
    return {
        "metadata": report.metadata,
        "macro": {
            m: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
            for m, s in report.macro.items()
        },
        "per_call": [
            {
                "model_id": model_id,
                "call_id": call_id,
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
            }
            for (model_id, call_id), s in report.per_call.items()
        ],
    }


def report_from_file(path: str | Path) -> EvalReport:
    raw = json.loads(Path(path).read_text("utf-8"))
    per_call = {
        (row["model_id"], row["call_id"]): RougeScore(row["precision"], row["recall"], row["f1"])
        for row in raw.get("per_call", [])
    }
    macro = {
        m: RougeScore(s["precision"], s["recall"], s["f1"]) for m, s in raw.get("macro", {}).items()
    }
    return EvalReport(per_call=per_call, macro=macro, metadata=raw.get("metadata", {}))


def _write_report(report: EvalReport, out_dir: Path) -> None:
    (out_dir / "report.json").write_text(
        json.dumps(_report_to_dict(report), indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        "utf-8",
    )
    (out_dir / "report.tsv").write_text(render_report(report, "tsv"), "utf-8")
    (out_dir / "report.md").write_text(render_report(report, "markdown"), "utf-8")


def render_report(report: EvalReport, fmt: str = "tsv") -> str:
    """Macro table with columns Model, Precision, Recall, F1 at 3 decimals.

    Rows sort by descending F1; equal F1 falls back to ascending model id.
    """
    rows = sorted(report.macro.items(), key=lambda kv: (-kv[1].f1, kv[0]))
    if fmt == "tsv":
        lines = ["Model\tPrecision\tRecall\tF1"]
        lines += [
            f"{MODEL_DISPLAY.get(m, m)}\t{s.precision:.3f}\t{s.recall:.3f}\t{s.f1:.3f}"
            for m, s in rows
        ]
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| Model | Precision | Recall | F1 |", "| --- | --- | --- | --- |"]
        lines += [
            f"| {MODEL_DISPLAY.get(m, m)} | {s.precision:.3f} | {s.recall:.3f} | {s.f1:.3f} |"
            for m, s in rows
        ]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def load_ratings_file(path: str | Path) -> list[RatingRecord]:
    records: list[RatingRecord] = []
    for line in Path(path).read_text("utf-8").splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        records.append(
            RatingRecord(
                annotator_id=raw["annotator_id"],
                call_id=raw["call_id"],
                blind_label=raw["blind_label"],
                model_id=raw["model_id"],
                score=raw["score"],
                timestamp=raw.get("timestamp", ""),
            )
        )
    return records


def _build_parser() -> argparse.ArgumentParser:
    # SUPPRESS defaults let the global flags appear before or after the
    # subcommand without the subparser clobbering an earlier value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="flat key-value config file")
    common.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS, help="override the configured seed"
    )
    common.add_argument(
        "--out", default=argparse.SUPPRESS, help="override the configured output directory"
    )

    parser = argparse.ArgumentParser(
        prog="callsum",
        description="Benchmark extractive summarisation methods on call-centre transcripts.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "ingest", parents=[common], help="validate the corpus and write the segmented documents"
    )
    sub.add_parser(
        "summarize", parents=[common], help="produce summaries for every configured model"
    )
    sub.add_parser(
        "evaluate", parents=[common], help="summarise and score against gold summaries"
    )

    p_report = sub.add_parser("report", parents=[common], help="render a saved report")
    p_report.add_argument("--report", default=None, help="path to report.json")
    p_report.add_argument("--format", choices=("tsv", "markdown"), default="tsv")

    p_serve = sub.add_parser("serve-ratings", parents=[common], help="run the blind rating service")
    p_serve.add_argument("--host", default=None)
    p_serve.add_argument("--port", type=int, default=None)

    p_mos = sub.add_parser(
        "mos", parents=[common], help="aggregate a ratings file into mean opinion scores"
    )
    p_mos.add_argument("--ratings", default=None, help="path to ratings.jsonl")
    p_mos.add_argument("--format", choices=("tsv", "markdown"), default="tsv")
    return parser


def _load_config(args: argparse.Namespace) -> tuple[RunConfig, dict[str, str]]:
    config_path = getattr(args, "config", None)
    values = parse_config_file(config_path) if config_path else {}
    out = getattr(args, "out", None)
    if out:
        values["out"] = out
    seed = getattr(args, "seed", None)
    if seed is not None:
        values["seed"] = str(seed)
    return run_config_from_values(values), values


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_USAGE

    out_flag = getattr(args, "out", None)
    try:
        if args.command == "report":
            report_path = args.report or (Path(out_flag or "out") / "report.json")
            print(render_report(report_from_file(report_path), args.format), end="")
            return EXIT_OK
        if args.command == "mos":
            ratings_path = args.ratings or (Path(out_flag or "out") / "ratings.jsonl")
            records = load_ratings_file(ratings_path)
            print(render_mos_table(mos(records), args.format, MODEL_DISPLAY), end="")
            return EXIT_OK

        config, values = _load_config(args)

        if args.command == "ingest":
            transcripts = load_corpus(config.corpus_path, mode=config.mode)
            documents = _build_documents(config, transcripts)
            out_dir = Path(config.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            save_documents(documents, out_dir / "documents.jsonl")
            print(f"ingested {len(documents)} calls -> {out_dir / 'documents.jsonl'}")
            return EXIT_OK
        if args.command == "summarize":
            result = run_experiment(replace(config, gold_path=None))
            print(f"wrote {len(result.summaries)} summaries -> {Path(config.out_dir) / 'summaries.jsonl'}")
            return EXIT_PARTIAL if result.partial else EXIT_OK
        if args.command == "evaluate":
            if not config.gold_path:
                raise ConfigError("evaluate needs a 'gold' path in the config")
            result = run_experiment(config)
            assert result.report is not None
            print(render_report(result.report, "tsv"), end="")
            return EXIT_PARTIAL if result.partial else EXIT_OK
        if args.command == "serve-ratings":
            from .rater import serve_from_values

            serve_from_values(values, host=args.host, port=args.port)
            return EXIT_OK
    except (ConfigError, UnknownModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
