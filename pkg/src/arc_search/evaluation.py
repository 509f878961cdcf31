"""Benchmark harness: categorized query sets, rank metrics, and reports.

Runs each query against the hybrid engine and a BM25-only baseline,
records rank metrics on the raw orderings, min-max-normalizes scores
(per-run or per-query) before aggregating score metrics, and writes
report.json, report.csv, and raw_log.jsonl.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DocumentParseError, SchemaError
from .lexical import min_max_normalize, tokenize
from .model import FieldType, arc_document_from_dict
from .scorer import SearchEngine, SearchQuery, StructureFilter

DEFAULT_CATEGORIES = ("KW", "KWPAR", "KWSUD", "KWA", "SWK", "SEM")
MAX_EXTRA_CATEGORIES = 3
TOP_K = 5
MAX_FAILURE_FRACTION = 0.10


@dataclass(frozen=True)
class BenchmarkQuery:
    query_id: str
    text: str
    category: str
    relevant: tuple[str, ...]
    filters: tuple[StructureFilter, ...] = ()


@dataclass
class CategoryStats:
    category: str
    engine: str
    n: int
    mrr: float
    mean_rank: float
    hit_rate: float
    mean_top1: float
    mean_avg_top5: float
    empty_results: int = 0


@dataclass
class EvalReport:
    stats: list[CategoryStats]
    metadata: dict
    failed_queries: list[dict] = field(default_factory=list)
    status: str = "ok"


def load_query_set(path: str | Path, categories: tuple[str, ...] = DEFAULT_CATEGORIES) -> list[BenchmarkQuery]:
    """Parse a JSON Lines query set; validates categories and id uniqueness."""
    if len(categories) > len(DEFAULT_CATEGORIES) + MAX_EXTRA_CATEGORIES:
        raise SchemaError(
            f"at most {MAX_EXTRA_CATEGORIES} categories beyond the named six are supported"
        )
    queries: list[BenchmarkQuery] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DocumentParseError(f"line {lineno}: malformed JSON: {exc.msg}") from exc
            for key in ("query_id", "text", "category", "relevant"):
                if key not in obj:
                    raise DocumentParseError(f"line {lineno}: missing key '{key}'")
            if obj["category"] not in categories:
                raise SchemaError(f"line {lineno}: unknown category {obj['category']!r}", field="category")
            if not obj["relevant"]:
                raise SchemaError(f"line {lineno}: 'relevant' must be non-empty", field="relevant")
            if obj["query_id"] in seen:
                raise SchemaError(f"line {lineno}: duplicate query_id {obj['query_id']!r}", field="query_id")
            seen.add(obj["query_id"])
            filters = tuple(
                StructureFilter(field_type=FieldType(f["field_type"]), match=f["match"])
                for f in obj.get("filters", [])
            )
            queries.append(
                BenchmarkQuery(
                    query_id=obj["query_id"],
                    text=obj["text"],
                    category=obj["category"],
                    relevant=tuple(obj["relevant"]),
                    filters=filters,
                )
            )
    return queries


def reciprocal_rank(ranking: list[str], gold: set[str]) -> float:
    """1/rank of the first gold id (1-based); 0.0 when none appears."""
    for i, arc_id in enumerate(ranking, start=1):
        if arc_id in gold:
            return 1.0 / i
    return 0.0


def mean_reciprocal_rank(rankings: list[list[str]], golds: list[set[str]]) -> float:
    if len(rankings) != len(golds):
        raise ValueError("one ranking per query required")
    if not rankings:
        raise ValueError("at least one query required")
    return sum(reciprocal_rank(r, g) for r, g in zip(rankings, golds)) / len(rankings)


def avg_top_k_score(scores: list[float], k: int = TOP_K) -> float:
    """Mean of the first min(k, len) scores; 0.0 for an empty list."""
    if not scores:
        return 0.0
    head = scores[:k]
    return sum(head) / len(head)


def load_corpus(path: str | Path) -> list:
    """JSONL corpus of ingest-schema document objects."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DocumentParseError(f"line {lineno}: malformed JSON: {exc.msg}") from exc
            docs.append(arc_document_from_dict(obj))
    return docs


class HybridAdapter:
    """Evaluation adapter over the hybrid search engine."""

    name = "hybrid"

    def __init__(self, engine: SearchEngine, alpha: float, beta: float, gamma: float):
        self.engine = engine
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma

    def run(self, query: BenchmarkQuery, k: int) -> list[tuple[str, float]]:
        results = self.engine.search(
            SearchQuery(
                text=query.text,
                k=k,
                alpha=self.alpha,
                beta=self.beta,
                gamma=self.gamma,
                filters=query.filters,
            )
        )
        return [(r.arc_id, r.final_score) for r in results]


class Bm25Adapter:
    """BM25-only baseline over whole-document search texts."""

    name = "bm25"

    def __init__(self, engine: SearchEngine):
        self.engine = engine

    def run(self, query: BenchmarkQuery, k: int) -> list[tuple[str, float]]:
        hits = self.engine.doc_lexical.bm25_top_k(tokenize(query.text), k)
        return [(h.entry_id, h.score) for h in hits]


def _normalize_scores(
    per_query: dict[str, list[float]], mode: str
) -> dict[str, list[float]]:
    """Eq.-2 style min-max of an engine's scores, per-run or per-query."""
    if mode == "per-query":
        return {qid: (min_max_normalize(s) if s else []) for qid, s in per_query.items()}
    if mode == "per-run":
        flat = [s for scores in per_query.values() for s in scores]
        if not flat:
            return {qid: [] for qid in per_query}
        lo, hi = min(flat), max(flat)
        if hi == lo:
            return {qid: [0.0] * len(s) for qid, s in per_query.items()}
        return {qid: [(x - lo) / (hi - lo) for x in s] for qid, s in per_query.items()}
    raise ValueError(f"unknown normalization mode {mode!r}")


def run_benchmark(
    corpus_path: str | Path,
    queries_path: str | Path,
    engine: SearchEngine,
    out_dir: str | Path,
    alpha: float = 0.5,
    beta: float = 0.7,
    gamma: float = 0.1,
    norm_mode: str = "per-run",
    categories: tuple[str, ...] = DEFAULT_CATEGORIES,
    k: int = TOP_K,
) -> EvalReport:
    """Evaluate hybrid and BM25 baseline engines over a query set.

    Rank metrics use the raw orderings; score aggregates use normalized
    scores. Per-query engine failures are logged and skipped; more than 10%
    failures marks the whole run failed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for doc in load_corpus(corpus_path):
        engine.ingest(doc)
    queries = load_query_set(queries_path, categories=categories)

    adapters = [
        HybridAdapter(engine, alpha=alpha, beta=beta, gamma=gamma),
        Bm25Adapter(engine),
    ]

    rows: list[dict] = []       # per (query, engine) raw log rows
    failures: list[dict] = []
    raw_scores: dict[str, dict[str, list[float]]] = {a.name: {} for a in adapters}

    for adapter in adapters:
        for query in queries:
            try:
                ranking = adapter.run(query, k)
            except Exception as exc:  # recorded, run continues
                failures.append(
                    {"query_id": query.query_id, "engine": adapter.name, "error": str(exc)}
                )
                continue
            ids = [arc_id for arc_id, _ in ranking]
            scores = [score for _, score in ranking]
            gold = set(query.relevant)
            rank = next((i for i, a in enumerate(ids, start=1) if a in gold), None)
            raw_scores[adapter.name][query.query_id] = scores
            rows.append(
                {
                    "query_id": query.query_id,
                    "category": query.category,
                    "engine": adapter.name,
                    "ranking": ids,
                    "raw_scores": scores,
                    "rank_first_gold": rank,
                    "reciprocal_rank": 1.0 / rank if rank else 0.0,
                }
            )

    normalized = {name: _normalize_scores(scores, norm_mode) for name, scores in raw_scores.items()}
    for row in rows:
        row["normalized_scores"] = normalized[row["engine"]][row["query_id"]]

    stats = _aggregate(rows)
    total_runs = len(queries) * len(adapters)
    status = "failed" if failures and len(failures) > MAX_FAILURE_FRACTION * total_runs else "ok"
    report = EvalReport(
        stats=stats,
        metadata={
            "alpha": alpha,
            "beta": beta,
            "gamma": gamma,
            "normalization": norm_mode,
            "corpus_size": len(engine),
            "query_count": len(queries),
            "top_k": k,
        },
        failed_queries=failures,
        status=status,
    )
    _write_outputs(report, rows, out_dir)
    return report


def _aggregate(rows: list[dict]) -> list[CategoryStats]:
    groups: dict[tuple[str, str], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["category"], row["engine"]), []).append(row)
    stats = []
    for (category, engine_name), group in sorted(groups.items()):
        rrs = [r["reciprocal_rank"] for r in group]
        hits = [r["rank_first_gold"] for r in group if r["rank_first_gold"] is not None]
        top1 = [r["normalized_scores"][0] for r in group if r["normalized_scores"]]
        avg5 = [avg_top_k_score(r["normalized_scores"]) for r in group]
        stats.append(
            CategoryStats(
                category=category,
                engine=engine_name,
                n=len(group),
                mrr=sum(rrs) / len(rrs),
                mean_rank=sum(hits) / len(hits) if hits else 0.0,
                hit_rate=len(hits) / len(group),
                mean_top1=sum(top1) / len(top1) if top1 else 0.0,
                mean_avg_top5=sum(avg5) / len(avg5),
                empty_results=sum(1 for r in group if not r["ranking"]),
            )
        )
    return stats


CSV_COLUMNS = ["category", "engine", "n", "mrr", "mean_rank", "hit_rate", "mean_top1", "mean_avg_top5"]


def _write_outputs(report: EvalReport, rows: list[dict], out_dir: Path) -> None:
    with open(out_dir / "raw_log.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    with open(out_dir / "report.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for s in report.stats:
            writer.writerow(
                [s.category, s.engine, s.n]
                + [f"{v:.10f}" for v in (s.mrr, s.mean_rank, s.hit_rate, s.mean_top1, s.mean_avg_top5)]
            )
    payload = {
        "status": report.status,
        "metadata": report.metadata,
        "failed_queries": report.failed_queries,
        "stats": [vars(s) for s in report.stats],
    }
    with open(out_dir / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
