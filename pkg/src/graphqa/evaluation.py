"""Benchmark harness: MRR, P@1 and Hit@5 with per-category breakdowns.

Questions answer through the full pipeline; unanswered questions keep an
infinite rank and contribute zero to every metric. The report also carries
the mean node/edge counts of the largest connected components fed to the
tree search.
"""

from __future__ import annotations

import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .answering import AnswerCandidate, PipelineConfig, RankedAnswerList, answer_question
from .retrieval import InvertedIndex
from .similarity import EmbeddingTable, MentionEntityDictionary, normalize_text
from .store import PropertyGraph

_LEADING_ARTICLE = re.compile(r"^(the|a|an)\s+")


class BenchmarkFormatError(ValueError):
    pass


@dataclass(frozen=True)
class BenchmarkItem:
    question: str
    gold_aliases: tuple[str, ...]
    gold_kb_id: str | None = None
    category: str | None = None

    def __post_init__(self) -> None:
        if not self.gold_aliases or not any(normalize_text(a) for a in self.gold_aliases):
            raise BenchmarkFormatError(
                f"benchmark item {self.question!r} has no usable gold alias"
            )


def load_benchmark(path: str | Path) -> list[BenchmarkItem]:
    """Newline-delimited records: {question, gold_aliases, gold_kb_id?, category?}."""
    items: list[BenchmarkItem] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise BenchmarkFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            try:
                items.append(
                    BenchmarkItem(
                        question=record["question"],
                        gold_aliases=tuple(record["gold_aliases"]),
                        gold_kb_id=record.get("gold_kb_id"),
                        category=record.get("category"),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise BenchmarkFormatError(f"{path}:{lineno}: bad record: {exc}") from exc
    return items


def _normalize_gold(text: str) -> str:
    return _LEADING_ARTICLE.sub("", normalize_text(text))


def answer_match(candidate: AnswerCandidate, item: BenchmarkItem) -> bool:
    """KB ids match when both sides have one; otherwise the normalized label
    (lowercased, punctuation and leading articles stripped) must equal an
    alias."""
    if candidate.kb_id is not None and item.gold_kb_id is not None:
        if candidate.kb_id == item.gold_kb_id:
            return True
    label = _normalize_gold(candidate.label)
    return any(label == _normalize_gold(alias) for alias in item.gold_aliases)


def compute_metrics(ranks: list[float]) -> tuple[float, float, float]:
    """(mrr, p@1, hit@5) over positive integer ranks (math.inf = unanswered)."""
    if not ranks:
        raise ValueError("ranks must be non-empty")
    for rank in ranks:
        if rank != math.inf and (rank < 1 or int(rank) != rank):
            raise ValueError(f"rank must be a positive integer or inf, got {rank}")
    q = len(ranks)
    # fsum keeps the mean exactly permutation-invariant
    mrr = math.fsum(0.0 if r == math.inf else 1.0 / r for r in ranks) / q
    p_at_1 = sum(1 for r in ranks if r == 1) / q
    hit_at_5 = sum(1 for r in ranks if r <= 5) / q
    return (mrr, p_at_1, hit_at_5)


@dataclass(frozen=True)
class QuestionResult:
    index: int
    question: str
    rank: float
    reason: str
    category: str | None
    top_answer: str | None
    lcc_nodes: int
    lcc_edges: int

    def record(self) -> dict:
        return {
            "index": self.index,
            "question": self.question,
            "rank": None if self.rank == math.inf else int(self.rank),
            "reason": self.reason,
            "category": self.category,
            "top_answer": self.top_answer,
            "lcc_nodes": self.lcc_nodes,
            "lcc_edges": self.lcc_edges,
        }


@dataclass(frozen=True)
class MetricsReport:
    question_count: int
    mrr: float
    p_at_1: float
    hit_at_5: float
    mean_lcc_nodes: float
    mean_lcc_edges: float
    per_category: dict[str, "MetricsReport"] = field(default_factory=dict)
    per_question: tuple[QuestionResult, ...] = ()

    def table(self) -> str:
        lines = [
            f"{'scope':<12} {'Q':>4} {'MRR':>8} {'P@1':>8} {'Hit@5':>8} {'LCC-nodes':>10} {'LCC-edges':>10}",
            f"{'overall':<12} {self.question_count:>4} {self.mrr:>8.3f} {self.p_at_1:>8.3f} "
            f"{self.hit_at_5:>8.3f} {self.mean_lcc_nodes:>10.1f} {self.mean_lcc_edges:>10.1f}",
        ]
        for name in sorted(self.per_category):
            sub = self.per_category[name]
            lines.append(
                f"{name:<12} {sub.question_count:>4} {sub.mrr:>8.3f} {sub.p_at_1:>8.3f} "
                f"{sub.hit_at_5:>8.3f} {sub.mean_lcc_nodes:>10.1f} {sub.mean_lcc_edges:>10.1f}"
            )
        return "\n".join(lines)


def _first_match_rank(answers: RankedAnswerList, item: BenchmarkItem) -> float:
    for position, candidate in enumerate(answers.answers, start=1):
        if answer_match(candidate, item):
            return float(position)
    return math.inf


def _aggregate(results: list[QuestionResult]) -> MetricsReport:
    ranks = [r.rank for r in results]
    mrr, p1, hit5 = compute_metrics(ranks)
    with_graph = [r for r in results if r.lcc_nodes > 0]
    mean_nodes = (
        sum(r.lcc_nodes for r in with_graph) / len(with_graph) if with_graph else 0.0
    )
    mean_edges = (
        sum(r.lcc_edges for r in with_graph) / len(with_graph) if with_graph else 0.0
    )
    return MetricsReport(
        question_count=len(results),
        mrr=mrr,
        p_at_1=p1,
        hit_at_5=hit5,
        mean_lcc_nodes=mean_nodes,
        mean_lcc_edges=mean_edges,
        per_question=tuple(results),
    )


def run_benchmark(
    items: list[BenchmarkItem],
    graph: PropertyGraph,
    index: InvertedIndex,
    dictionary: MentionEntityDictionary,
    embeddings: EmbeddingTable,
    config: PipelineConfig | None = None,
    workers: int = 1,
    stopwords: frozenset[str] | None = None,
    verbs: frozenset[str] | None = None,
) -> MetricsReport:
    """Answer every item, record the rank of the first correct answer, and
    aggregate overall plus per category. Aggregation is a deterministic
    fold in item order regardless of worker count."""
    if config is None:
        config = PipelineConfig()

    def run_one(pair: tuple[int, BenchmarkItem]) -> QuestionResult:
        idx, item = pair
        answers = answer_question(
            item.question,
            graph,
            index,
            dictionary,
            embeddings,
            config,
            stopwords=stopwords,
            verbs=verbs,
        )
        return QuestionResult(
            index=idx,
            question=item.question,
            rank=_first_match_rank(answers, item),
            reason=answers.reason,
            category=item.category,
            top_answer=answers.answers[0].label if answers.answers else None,
            lcc_nodes=answers.lcc_nodes,
            lcc_edges=answers.lcc_edges,
        )

    indexed = list(enumerate(items))
    if workers <= 1:
        results = [run_one(pair) for pair in indexed]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, indexed))
    results.sort(key=lambda r: r.index)

    report = _aggregate(results)
    categories: dict[str, list[QuestionResult]] = {}
    for result in results:
        if result.category:
            categories.setdefault(result.category, []).append(result)
    per_category = {name: _aggregate(rs) for name, rs in categories.items()}
    return MetricsReport(
        question_count=report.question_count,
        mrr=report.mrr,
        p_at_1=report.p_at_1,
        hit_at_5=report.hit_at_5,
        mean_lcc_nodes=report.mean_lcc_nodes,
        mean_lcc_edges=report.mean_lcc_edges,
        per_category=per_category,
        per_question=report.per_question,
    )
