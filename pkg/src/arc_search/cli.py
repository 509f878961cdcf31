"""Command-line entry points: `arc-search serve` and `bench run`."""
from __future__ import annotations

import argparse
import sys

from .embedding import DeterministicHashEmbedder
from .evaluation import run_benchmark
from .scorer import SearchEngine
from .service import ServiceConfig, create_app


def main_serve(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="arc-search")
    sub = parser.add_subparsers(dest="command", required=True)
    serve = sub.add_parser("serve", help="run the ingestion/search HTTP service")
    serve.add_argument("--config", help="JSON config file mirroring ServiceConfig", default=None)
    args = parser.parse_args(argv)

    config = ServiceConfig.from_file(args.config) if args.config else ServiceConfig()
    app = create_app(config)
    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def main_bench(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bench")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate hybrid and BM25 engines on a query set")
    run.add_argument("--corpus", required=True, help="JSONL corpus of document objects")
    run.add_argument("--queries", required=True, help="JSONL benchmark query set")
    run.add_argument("--alpha", type=float, default=0.5)
    run.add_argument("--beta", type=float, default=0.7)
    run.add_argument("--gamma", type=float, default=0.1)
    run.add_argument("--norm", choices=["per-run", "per-query"], default="per-run")
    run.add_argument("--out", required=True, help="output directory for reports")
    run.add_argument("--dimension", type=int, default=768)
    args = parser.parse_args(argv)

    engine = SearchEngine(DeterministicHashEmbedder(dimension=args.dimension))
    report = run_benchmark(
        args.corpus,
        args.queries,
        engine,
        args.out,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        norm_mode=args.norm,
    )
    for s in report.stats:
        print(
            f"{s.category:8s} {s.engine:8s} n={s.n:3d} mrr={s.mrr:.4f} "
            f"mean_rank={s.mean_rank:.3f} hit_rate={s.hit_rate:.3f} "
            f"top1={s.mean_top1:.4f} avg_top5={s.mean_avg_top5:.4f}"
        )
    print(f"status: {report.status}; outputs in {args.out}")
    return 0 if report.status == "ok" else 1


if __name__ == "__main__":
    sys.exit(main_serve())
