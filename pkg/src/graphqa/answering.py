"""End-to-end question answering: retrieval, quasi-graph construction,
Group Steiner Tree search, and answer extraction/ranking/filtering.

Answer candidates are the non-cornerstone mention/entity nodes of the
returned trees, merged by KB id where links exist, scored by the sum of
1/(1+cost) over their supporting trees, and type-filtered by demotion.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

from . import gst
from .question import QuestionParseError, QuestionTerms, parse_question
from .quasigraph import (
    ENTITY,
    MENTION,
    CornerstoneGroups,
    NoAnswerError,
    QuasiGraph,
    Thresholds,
    build_quasi_graph,
    largest_connected_component,
    select_cornerstones,
)
from .retrieval import InvertedIndex, retrieve_top_k
from .similarity import EmbeddingTable, MentionEntityDictionary, normalize_text
from .store import PropertyGraph, document_subgraph

logger = logging.getLogger(__name__)

REASON_OK = "OK"
REASON_NO_RETRIEVAL = "NO_RETRIEVAL"
REASON_INSUFFICIENT_GROUPS = "INSUFFICIENT_GROUPS"
REASON_NO_TREE = "NO_TREE"


@dataclass(frozen=True)
class PipelineConfig:
    thresholds: Thresholds = field(default_factory=Thresholds)
    top_docs: int = 10
    top_gst: int = 50
    gst_group_budget: int = gst.EXACT_GROUP_BUDGET

    def __post_init__(self) -> None:
        if self.top_docs < 1 or self.top_gst < 1:
            raise ValueError("top_docs and top_gst must be >= 1")

    def echo(self) -> dict:
        return {
            "base_threshold": self.thresholds.base,
            "pred_align_threshold": self.thresholds.predicate_alignment,
            "top_docs": self.top_docs,
            "top_gst": self.top_gst,
        }


@dataclass(frozen=True)
class AnswerCandidate:
    label: str
    kb_id: str | None
    score: float
    tree_indices: tuple[int, ...]
    node_ids: tuple[int, ...]
    node_weight: float
    ner_types: frozenset[str]

    def record(self) -> dict:
        entry = {"label": self.label, "score": self.score, "tree_count": len(self.tree_indices)}
        if self.kb_id is not None:
            entry["kb_id"] = self.kb_id
        return entry


@dataclass(frozen=True)
class RankedAnswerList:
    question: str
    reason: str
    answers: tuple[AnswerCandidate, ...]
    config: dict
    timings: dict[str, float] = field(default_factory=dict)
    lcc_nodes: int = 0
    lcc_edges: int = 0

    def record(self) -> dict:
        return {
            "question": self.question,
            "reason": self.reason,
            "answers": [a.record() for a in self.answers],
            "config": self.config,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
            "lcc_nodes": self.lcc_nodes,
            "lcc_edges": self.lcc_edges,
        }


def quasi_to_instance(qg: QuasiGraph, groups: CornerstoneGroups) -> gst.GstInstance:
    """Edge cost = 1 - weight, clamped to [0, 1]; cornerstone groups become
    the terminal groups."""
    edges = [
        (edge.src, edge.dst, min(1.0, max(0.0, 1.0 - edge.weight)))
        for edge in qg.edges.values()
    ]
    return gst.GstInstance.build(
        nodes=list(qg.nodes),
        edges=edges,
        groups=[frozenset(group.members) for group in groups],
    )


# ---------------------------------------------------------------------------
# Candidate extraction / scoring / filtering
# ---------------------------------------------------------------------------


def extract_candidates(
    trees: list[gst.SteinerTree], qg: QuasiGraph, groups: CornerstoneGroups
) -> list[AnswerCandidate]:
    """Mention/entity nodes of the trees, excluding cornerstones.

    Mentions linked to an entity merge into one candidate keyed by KB id
    (labelled with the entity label); a merged candidate is discarded when
    its entity is itself a cornerstone, since that label already names a
    question term.
    """
    cornerstone_ids = set()
    for group in groups:
        cornerstone_ids.update(group.members)
    cornerstone_kbs = {
        qg.nodes[nid].entity_kb
        for nid in cornerstone_ids
        if qg.nodes[nid].kind in (MENTION, ENTITY) and qg.nodes[nid].entity_kb
    }

    merged: dict[tuple[str, str], dict] = {}
    for index, tree in enumerate(trees):
        for nid in tree.nodes:
            node = qg.nodes[nid]
            if node.kind not in (MENTION, ENTITY) or nid in cornerstone_ids:
                continue
            if node.entity_kb is not None:
                if node.entity_kb in cornerstone_kbs:
                    continue
                key = ("kb", node.entity_kb)
                label = (
                    node.label
                    if node.kind == ENTITY
                    else _entity_label_for(qg, node.entity_kb)
                )
            else:
                key = ("surface", normalize_text(node.label))
                label = node.label
            entry = merged.setdefault(
                key,
                {
                    "label": label,
                    "kb_id": node.entity_kb,
                    "trees": set(),
                    "nodes": set(),
                    "weight": 0.0,
                    "ner": set(),
                },
            )
            entry["trees"].add(index)
            entry["nodes"].add(nid)
            entry["weight"] = max(entry["weight"], node.weight)
            if node.ner_type != "NONE":
                entry["ner"].add(node.ner_type)

    return [
        AnswerCandidate(
            label=entry["label"],
            kb_id=entry["kb_id"],
            score=0.0,
            tree_indices=tuple(sorted(entry["trees"])),
            node_ids=tuple(sorted(entry["nodes"])),
            node_weight=entry["weight"],
            ner_types=frozenset(entry["ner"]),
        )
        for entry in merged.values()
    ]


def _entity_label_for(qg: QuasiGraph, kb_id: str) -> str:
    for node in qg.nodes.values():
        if node.kind == ENTITY and node.entity_kb == kb_id:
            return node.label
    return kb_id.replace("_", " ")


def score_candidates(
    candidates: list[AnswerCandidate], trees: list[gst.SteinerTree]
) -> list[AnswerCandidate]:
    """score = sum over supporting trees of 1/(1+cost); sorted descending,
    ties broken by higher node weight then label."""
    scored = [
        replace(
            cand,
            score=sum(1.0 / (1.0 + trees[i].cost) for i in cand.tree_indices),
        )
        for cand in candidates
    ]
    scored.sort(key=lambda c: (-c.score, -c.node_weight, c.label))
    return scored


_HINT_EXPECTED_NER = {"PERSON": "PER", "PLACE": "LOC"}


def filter_by_type(
    answers: list[AnswerCandidate] | tuple[AnswerCandidate, ...], hint: str
) -> list[AnswerCandidate]:
    """For PERSON/PLACE hints, stably demote candidates whose known NER
    evidence contradicts the expected type; nothing is removed."""
    expected = _HINT_EXPECTED_NER.get(hint)
    if expected is None:
        return list(answers)
    keep, demoted = [], []
    for candidate in answers:
        contradicts = bool(candidate.ner_types) and expected not in candidate.ner_types
        (demoted if contradicts else keep).append(candidate)
    return keep + demoted


# ---------------------------------------------------------------------------
# Full pipeline
# ---------------------------------------------------------------------------


def answer_question(
    question: str,
    graph: PropertyGraph,
    index: InvertedIndex,
    dictionary: MentionEntityDictionary,
    embeddings: EmbeddingTable,
    config: PipelineConfig | None = None,
    stopwords: frozenset[str] | None = None,
    verbs: frozenset[str] | None = None,
) -> RankedAnswerList:
    """Run retrieval -> subgraph -> quasi-graph -> cornerstones -> LCC ->
    top-k trees -> extraction/scoring/filtering. No-answer conditions
    yield an empty list with a machine-readable reason code."""
    if not question or not question.strip():
        raise ValueError("question must be non-empty")
    if config is None:
        config = PipelineConfig()
    timings: dict[str, float] = {}

    def empty(reason: str, lcc_nodes: int = 0, lcc_edges: int = 0) -> RankedAnswerList:
        return RankedAnswerList(
            question=question,
            reason=reason,
            answers=(),
            config=config.echo(),
            timings=timings,
            lcc_nodes=lcc_nodes,
            lcc_edges=lcc_edges,
        )

    start = time.perf_counter()
    try:
        terms = parse_question(question, stopwords=stopwords, verbs=verbs)
    except QuestionParseError:
        timings["parse"] = time.perf_counter() - start
        return empty(REASON_INSUFFICIENT_GROUPS)
    timings["parse"] = time.perf_counter() - start

    start = time.perf_counter()
    retrieved = retrieve_top_k(index, question, k=config.top_docs, stopwords=stopwords)
    timings["retrieve"] = time.perf_counter() - start
    if not retrieved.ranked:
        return empty(REASON_NO_RETRIEVAL)

    start = time.perf_counter()
    sub = document_subgraph(graph, set(retrieved.doc_ids()))
    qg = build_quasi_graph(
        sub,
        terms,
        config.thresholds,
        dictionary,
        embeddings,
        stopwords=stopwords,
        verbs=verbs,
    )
    timings["quasi_graph"] = time.perf_counter() - start

    start = time.perf_counter()
    try:
        groups = select_cornerstones(qg, terms, config.thresholds)
        lcc, groups = largest_connected_component(qg, groups)
    except NoAnswerError:
        timings["cornerstones"] = time.perf_counter() - start
        return empty(REASON_INSUFFICIENT_GROUPS)
    timings["cornerstones"] = time.perf_counter() - start
    lcc_nodes, lcc_edges = len(lcc.nodes), len(lcc.edges)

    start = time.perf_counter()
    instance = quasi_to_instance(lcc, groups)
    if len(groups) > config.gst_group_budget:
        logger.warning(
            "question %r has %d cornerstone groups; falling back to the greedy solver",
            question,
            len(groups),
        )
        trees = [gst.solve_greedy(instance)]
    else:
        trees = gst.solve_topk(instance, config.top_gst)
    timings["gst"] = time.perf_counter() - start
    if not trees:
        return empty(REASON_NO_TREE, lcc_nodes, lcc_edges)

    start = time.perf_counter()
    candidates = extract_candidates(trees, lcc, groups)
    ranked = score_candidates(candidates, trees)
    final = filter_by_type(ranked, terms.answer_type_hint)
    timings["rank"] = time.perf_counter() - start
    if not final:
        return empty(REASON_NO_TREE, lcc_nodes, lcc_edges)
    return RankedAnswerList(
        question=question,
        reason=REASON_OK,
        answers=tuple(final),
        config=config.echo(),
        timings=timings,
        lcc_nodes=lcc_nodes,
        lcc_edges=lcc_edges,
    )
