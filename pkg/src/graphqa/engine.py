"""Loaded, shared-read-only engine state: graph, index and lexical resources."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .answering import PipelineConfig, RankedAnswerList, answer_question
from .quasigraph import PREDICATE_ALIGNMENT_GRID, Thresholds
from .resources import default_stopwords, default_verb_lexicon, load_wordlist
from .retrieval import InvertedIndex, build_index, load_index, save_index
from .similarity import (
    EmbeddingTable,
    MentionEntityDictionary,
    load_dictionary,
    load_embeddings,
)
from .store import PropertyGraph, corpus_stats, load_graph


@dataclass(frozen=True)
class EngineConfig:
    """Paths plus pipeline parameters, as supplied by CLI flags."""

    graph_path: str
    dict_path: str | None = None
    emb_path: str | None = None
    index_path: str | None = None
    stopwords_path: str | None = None
    verbs_path: str | None = None
    base_threshold: float = 0.25
    pred_align_threshold: float = 0.5
    free_threshold: bool = False
    top_docs: int = 10
    top_gst: int = 50
    gst_group_budget: int = 12
    workers: int = 1

    def pipeline(self) -> PipelineConfig:
        if not self.free_threshold and self.pred_align_threshold not in PREDICATE_ALIGNMENT_GRID:
            raise ValueError(
                f"--pred-align-threshold must be one of {PREDICATE_ALIGNMENT_GRID} "
                "(pass --free-threshold to override)"
            )
        return PipelineConfig(
            thresholds=Thresholds(
                base=self.base_threshold,
                predicate_alignment=self.pred_align_threshold,
            ),
            top_docs=self.top_docs,
            top_gst=self.top_gst,
            gst_group_budget=self.gst_group_budget,
        )


@dataclass
class Engine:
    """Everything a query needs, loaded once and shared read-only."""

    graph: PropertyGraph
    index: InvertedIndex
    dictionary: MentionEntityDictionary
    embeddings: EmbeddingTable
    config: PipelineConfig
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    verbs: frozenset[str] = field(default_factory=default_verb_lexicon)
    workers: int = 1

    @classmethod
    def load(cls, config: EngineConfig) -> "Engine":
        graph = load_graph(config.graph_path)
        index = None
        if config.index_path and Path(config.index_path).exists():
            index = load_index(config.index_path)
            if set(index.doc_lengths) != set(graph.documents):
                index = None  # stale cache for a different graph
        if index is None:
            index = build_index(graph)
            if config.index_path:
                save_index(index, config.index_path)
        dictionary = (
            load_dictionary(config.dict_path)
            if config.dict_path
            else MentionEntityDictionary.empty()
        )
        embeddings = (
            load_embeddings(config.emb_path) if config.emb_path else EmbeddingTable.empty()
        )
        stopwords = (
            load_wordlist(config.stopwords_path)
            if config.stopwords_path
            else default_stopwords()
        )
        verbs = (
            load_wordlist(config.verbs_path) if config.verbs_path else default_verb_lexicon()
        )
        return cls(
            graph=graph,
            index=index,
            dictionary=dictionary,
            embeddings=embeddings,
            config=config.pipeline(),
            stopwords=stopwords,
            verbs=verbs,
            workers=config.workers,
        )

    def ask(self, question: str, config: PipelineConfig | None = None) -> RankedAnswerList:
        return answer_question(
            question,
            self.graph,
            self.index,
            self.dictionary,
            self.embeddings,
            config or self.config,
            stopwords=self.stopwords,
            verbs=self.verbs,
        )

    def stats(self) -> dict:
        stats = corpus_stats(self.graph)
        return {
            "documents": stats.documents,
            "sentences": stats.sentences,
            "clauses": stats.clauses,
            "mentions": stats.mentions,
            "entities": stats.entities,
        }
