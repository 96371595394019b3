"""Command-line entry points: ingest, ask, eval, serve."""

from __future__ import annotations

import argparse
import json
import sys

from .engine import Engine, EngineConfig
from .evaluation import load_benchmark, run_benchmark
from .quasigraph import PREDICATE_ALIGNMENT_GRID
from .store import (
    GraphError,
    RejectedRecord,
    corpus_stats,
    ingest_corpus,
    read_annotation_file,
    save_graph,
)


def _add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", required=True, help="path to a saved graph image")
    parser.add_argument(
        "--index",
        default=None,
        help="optional index cache: loaded when present, written after building otherwise",
    )
    parser.add_argument("--dict", dest="dict_path", default=None, help="mention-entity dictionary (TSV)")
    parser.add_argument("--emb", dest="emb_path", default=None, help="word embeddings (word2vec text)")
    parser.add_argument("--stopwords", default=None, help="override stopword list file")
    parser.add_argument("--verbs", default=None, help="override verb lexicon file")
    parser.add_argument("--top-docs", type=int, default=10)
    parser.add_argument("--top-gst", type=int, default=50)
    parser.add_argument(
        "--gst-group-budget",
        type=int,
        default=12,
        help="cornerstone-group budget for the exact solver; beyond it the greedy fallback runs",
    )
    parser.add_argument("--base-threshold", type=float, default=0.25)
    parser.add_argument(
        "--pred-align-threshold",
        type=float,
        default=0.5,
        help=f"predicate alignment threshold, one of {PREDICATE_ALIGNMENT_GRID}",
    )
    parser.add_argument(
        "--free-threshold",
        action="store_true",
        help="allow --pred-align-threshold values outside the standard grid",
    )
    parser.add_argument("--workers", type=int, default=1)


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    return EngineConfig(
        graph_path=args.graph,
        dict_path=args.dict_path,
        emb_path=args.emb_path,
        index_path=args.index,
        stopwords_path=args.stopwords,
        verbs_path=args.verbs,
        base_threshold=args.base_threshold,
        pred_align_threshold=args.pred_align_threshold,
        free_threshold=args.free_threshold,
        top_docs=args.top_docs,
        top_gst=args.top_gst,
        gst_group_budget=args.gst_group_budget,
        workers=args.workers,
    )


def cmd_ingest(args: argparse.Namespace) -> int:
    rejects: list[RejectedRecord] = []
    graph = ingest_corpus(
        read_annotation_file(args.corpus),
        dictionary=None,
        on_reject=rejects.append,
    )
    for reject in rejects:
        print(f"rejected: {reject}", file=sys.stderr)
    if rejects and args.strict:
        print(f"error: {len(rejects)} schema violation(s)", file=sys.stderr)
        return 1
    save_graph(graph, args.out)
    stats = corpus_stats(graph)
    print(
        f"ingested {stats.as_tuple()} "
        "(documents, sentences, clauses, mentions, entities) "
        f"-> {args.out}"
    )
    return 0


def cmd_ask(args: argparse.Namespace) -> int:
    if not args.question.strip():
        print("error: empty question", file=sys.stderr)
        return 2
    engine = Engine.load(_engine_config(args))
    result = engine.ask(args.question)
    if args.json:
        print(json.dumps(result.record(), ensure_ascii=False))
        return 0
    if not result.answers:
        print(f"no answer ({result.reason})")
        return 0
    for rank, answer in enumerate(result.answers, start=1):
        kb = f"  [{answer.kb_id}]" if answer.kb_id else ""
        print(f"{rank}. {answer.label}{kb}  score={answer.score:.4f} trees={len(answer.tree_indices)}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    engine = Engine.load(_engine_config(args))
    items = load_benchmark(args.benchmark)
    wanted = {m.strip() for m in args.metrics.split(",") if m.strip()}
    unknown = wanted - {"mrr", "p1", "hit5"}
    if unknown:
        print(f"error: unknown metrics {sorted(unknown)}", file=sys.stderr)
        return 2
    thresholds = (
        list(PREDICATE_ALIGNMENT_GRID) if args.sweep else [args.pred_align_threshold]
    )
    for value in thresholds:
        config = EngineConfig(
            graph_path=args.graph,
            base_threshold=args.base_threshold,
            pred_align_threshold=value,
            free_threshold=args.free_threshold,
            top_docs=args.top_docs,
            top_gst=args.top_gst,
            gst_group_budget=args.gst_group_budget,
        ).pipeline()
        report = run_benchmark(
            items,
            engine.graph,
            engine.index,
            engine.dictionary,
            engine.embeddings,
            config,
            workers=args.workers,
            stopwords=engine.stopwords,
            verbs=engine.verbs,
        )
        print(f"# pred_align_threshold={value}")
        print(report.table())
        if args.records:
            for result in report.per_question:
                print(json.dumps(result.record(), ensure_ascii=False))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    engine = Engine.load(_engine_config(args))
    uvicorn.run(create_app(engine), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphqa",
        description="Question answering over a hybrid text knowledge graph",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="build a graph image from annotation records")
    p_ingest.add_argument("--corpus", required=True, help="annotation JSONL file")
    p_ingest.add_argument("--dict", dest="dict_path", default=None)
    p_ingest.add_argument("--out", required=True, help="output graph image path")
    p_ingest.add_argument(
        "--strict", action="store_true", help="fail when any record is rejected"
    )
    p_ingest.set_defaults(func=cmd_ingest)

    p_ask = sub.add_parser("ask", help="answer one question")
    p_ask.add_argument("question")
    _add_engine_flags(p_ask)
    p_ask.add_argument("--json", action="store_true", help="emit the full answer record")
    p_ask.set_defaults(func=cmd_ask)

    p_eval = sub.add_parser("eval", help="run a benchmark file")
    p_eval.add_argument("--benchmark", required=True)
    _add_engine_flags(p_eval)
    p_eval.add_argument("--metrics", default="mrr,p1,hit5")
    p_eval.add_argument(
        "--sweep", action="store_true", help="sweep the predicate alignment grid"
    )
    p_eval.add_argument(
        "--records", action="store_true", help="also emit per-question JSON records"
    )
    p_eval.set_defaults(func=cmd_eval)

    p_serve = sub.add_parser("serve", help="run the query service")
    _add_engine_flags(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
