"""Walkthrough: evaluating the hybrid engine against a BM25-only baseline on
the shipped synthetic benchmark (or a freshly generated one).

Equivalent CLI: bench run --corpus benchmarks/corpus.jsonl \
    --queries benchmarks/queries.jsonl --out /tmp/bench-out

Run with: python3 demos/03_benchmark_evaluation.py
"""
import tempfile
from pathlib import Path

from arc_search import DeterministicHashEmbedder, SearchEngine
from arc_search.benchmark_gen import generate_benchmark
from arc_search.evaluation import run_benchmark

shipped = Path(__file__).resolve().parent.parent / "benchmarks"
with tempfile.TemporaryDirectory() as tmp:
    if shipped.exists():
        corpus, queries = shipped / "corpus.jsonl", shipped / "queries.jsonl"
    else:
        corpus, queries = generate_benchmark(Path(tmp) / "data", n_docs=200, seed=77)

    engine = SearchEngine(DeterministicHashEmbedder(dimension=768))
    report = run_benchmark(corpus, queries, engine, Path(tmp) / "out", norm_mode="per-run")

    print(f"{'category':8s} {'engine':7s} {'n':>3s} {'mrr':>6s} {'top1':>6s} {'avg5':>6s}")
    for s in report.stats:
        print(
            f"{s.category:8s} {s.engine:7s} {s.n:3d} {s.mrr:6.3f} "
            f"{s.mean_top1:6.3f} {s.mean_avg_top5:6.3f}"
        )

    sem = {s.engine: s for s in report.stats if s.category == "SEM"}
    kw = {s.engine: s for s in report.stats if s.category == "KW"}
    print(
        f"\nsemantic queries: hybrid avg-top-5 beats BM25 by "
        f"{sem['hybrid'].mean_avg_top5 - sem['bm25'].mean_avg_top5:+.3f}"
    )
    print(
        f"keyword queries:  BM25 MRR {kw['bm25'].mrr:.3f} vs hybrid {kw['hybrid'].mrr:.3f} "
        "(exact-match retrieval stays the lexical engine's strength)"
    )
    print(f"\nreports written under {Path(tmp) / 'out'} (report.json / report.csv / raw_log.jsonl)")
