"""CLI: annotate raw documents into graph-ingestable records."""

from __future__ import annotations

import argparse
import logging
import sys

from .pipeline import AnnotatorConfig, annotate_corpus, read_raw_documents, write_records


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annotate",
        description="Convert raw {id, title, text} documents to annotation records",
    )
    parser.add_argument("--in", dest="input", required=True, help="raw JSONL file")
    parser.add_argument("--out", required=True, help="annotation JSONL output")
    parser.add_argument("--clauses", choices=["rules", "none"], default="rules")
    parser.add_argument("--ner", choices=["caps", "strict", "both", "none"], default="caps")
    parser.add_argument("--merge", choices=["union", "intersection"], default="union")
    parser.add_argument("--linker", choices=["slug", "dictionary", "none"], default="slug")
    parser.add_argument("--linker-dict", default=None, help="TSV dictionary for the dictionary linker")
    parser.add_argument("--coref", choices=["on", "off"], default="on")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = AnnotatorConfig(
            clause_extractor=args.clauses,
            ner=args.ner,
            ner_merge=args.merge,
            linker=args.linker,
            linker_dict=args.linker_dict,
            coref=args.coref == "on",
        )
        count = write_records(
            annotate_corpus(read_raw_documents(args.input), config), args.out
        )
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"annotated {count} document(s) -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
