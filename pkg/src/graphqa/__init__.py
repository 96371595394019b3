"""Question answering over a hybrid text knowledge graph.

Annotated documents become a five-kind property graph (documents,
sentences, clauses, mentions, entities); questions retrieve pivot
documents, translate their subgraph into a weighted quasi-graph, and rank
answers from Group Steiner Trees over cornerstone groups.
"""

from .answering import PipelineConfig, RankedAnswerList, answer_question
from .engine import Engine, EngineConfig
from .evaluation import BenchmarkItem, compute_metrics, run_benchmark
from .gst import GstInstance, SteinerTree, brute_force, solve_exact, solve_greedy, solve_topk
from .question import QuestionTerms, parse_question
from .quasigraph import QuasiGraph, Thresholds, build_quasi_graph
from .retrieval import InvertedIndex, build_index, retrieve_top_k
from .similarity import (
    EmbeddingTable,
    MentionEntityDictionary,
    cosine,
    jaccard_sets,
    load_dictionary,
    load_embeddings,
    mention_similarity,
    phrase_vector,
)
from .store import (
    PropertyGraph,
    corpus_stats,
    document_subgraph,
    ingest_corpus,
    load_graph,
    save_graph,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkItem",
    "EmbeddingTable",
    "Engine",
    "EngineConfig",
    "GstInstance",
    "InvertedIndex",
    "MentionEntityDictionary",
    "PipelineConfig",
    "PropertyGraph",
    "QuasiGraph",
    "QuestionTerms",
    "RankedAnswerList",
    "SteinerTree",
    "Thresholds",
    "answer_question",
    "brute_force",
    "build_index",
    "build_quasi_graph",
    "compute_metrics",
    "corpus_stats",
    "cosine",
    "document_subgraph",
    "ingest_corpus",
    "jaccard_sets",
    "load_dictionary",
    "load_embeddings",
    "load_graph",
    "mention_similarity",
    "parse_question",
    "phrase_vector",
    "retrieve_top_k",
    "run_benchmark",
    "save_graph",
    "solve_exact",
    "solve_greedy",
    "solve_topk",
]
