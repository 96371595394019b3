"""BM25 document retrieval over the property graph.

Ranks documents against the natural-language question and returns the
top-k pivots that seed per-question subgraph extraction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .resources import default_stopwords
from .similarity import normalize_text
from .store import PropertyGraph

BM25_K1 = 1.2
BM25_B = 0.75


@dataclass(frozen=True)
class RetrievalResult:
    """Ranked (doc_id, score) pairs, scores non-increasing."""

    ranked: tuple[tuple[str, float], ...]

    def doc_ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.ranked]

    def __len__(self) -> int:
        return len(self.ranked)


@dataclass
class InvertedIndex:
    """Term -> posting list of (doc_id, term frequency), postings sorted by doc id."""

    postings: dict[str, tuple[tuple[str, int], ...]] = field(default_factory=dict)
    doc_lengths: dict[str, int] = field(default_factory=dict)

    @property
    def doc_count(self) -> int:
        return len(self.doc_lengths)

    @property
    def avg_doc_length(self) -> float:
        if not self.doc_lengths:
            return 0.0
        return sum(self.doc_lengths.values()) / len(self.doc_lengths)


def _document_terms(graph: PropertyGraph, doc_id: str) -> list[str]:
    doc = graph.documents[doc_id]
    terms = normalize_text(doc.title).split()
    for sent_vid in doc.sentence_ids:
        for token in graph.sentences[sent_vid.local].tokens:
            terms.extend(normalize_text(token).split())
    return terms


def build_index(graph: PropertyGraph) -> InvertedIndex:
    """Index every document's title and sentence tokens, normalized
    (lowercased, punctuation stripped)."""
    postings: dict[str, dict[str, int]] = {}
    doc_lengths: dict[str, int] = {}
    for doc_id in graph.documents:
        terms = _document_terms(graph, doc_id)
        doc_lengths[doc_id] = len(terms)
        for term in terms:
            postings.setdefault(term, {}).setdefault(doc_id, 0)
            postings[term][doc_id] += 1
    return InvertedIndex(
        postings={
            term: tuple(sorted(freqs.items())) for term, freqs in postings.items()
        },
        doc_lengths=doc_lengths,
    )


def save_index(index: InvertedIndex, path: str | Path) -> None:
    payload = {
        "postings": {term: [list(p) for p in posts] for term, posts in index.postings.items()},
        "doc_lengths": index.doc_lengths,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False)


def load_index(path: str | Path) -> InvertedIndex:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    return InvertedIndex(
        postings={
            term: tuple((doc, tf) for doc, tf in posts)
            for term, posts in payload["postings"].items()
        },
        doc_lengths=payload["doc_lengths"],
    )


def _idf(index: InvertedIndex, term: str) -> float:
    df = len(index.postings.get(term, ()))
    if df == 0:
        return 0.0
    n = index.doc_count
    # log1p-form BM25 idf: strictly positive for any indexed term
    return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def retrieve_top_k(
    index: InvertedIndex,
    question: str,
    k: int = 10,
    stopwords: frozenset[str] | None = None,
) -> RetrievalResult:
    """Score documents with BM25 (k1=1.2, b=0.75) against the question's
    content terms. Only strictly positive scores are returned; ties break
    by ascending doc id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if stopwords is None:
        stopwords = default_stopwords()
    terms = [t for t in normalize_text(question).split() if t not in stopwords]
    if not terms:
        return RetrievalResult(ranked=())
    avgdl = index.avg_doc_length
    scores: dict[str, float] = {}
    for term in terms:
        idf = _idf(index, term)
        if idf == 0.0:
            continue
        for doc_id, tf in index.postings[term]:
            dl = index.doc_lengths[doc_id]
            norm = BM25_K1 * (1.0 - BM25_B + BM25_B * dl / avgdl) if avgdl else BM25_K1
            scores[doc_id] = scores.get(doc_id, 0.0) + idf * tf * (BM25_K1 + 1.0) / (tf + norm)
    ranked = sorted(
        ((doc_id, score) for doc_id, score in scores.items() if score > 0.0),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return RetrievalResult(ranked=tuple(ranked[:k]))
