"""Per-question weighted quasi-graph over a document subgraph.

Mentions, entities and clause predicates become nodes; type nodes are
added from Hearst-pattern matches; edges carry proximity weights
(mention-predicate), fixed weight 1 (mention-entity, type, coref), or
similarity weights (alignment). Cornerstone groups are the question-term
matches that seed the Group Steiner Tree search.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .question import QuestionTerms
from .resources import default_stopwords, default_verb_lexicon
from .similarity import (
    EmbeddingTable,
    MentionEntityDictionary,
    clamped_cosine,
    mention_similarity,
    normalize_text,
    phrase_vector,
)
from .store import PropertyGraph, Span, VertexId

MENTION = "MENTION"
ENTITY = "ENTITY"
PREDICATE = "PREDICATE"
TYPE = "TYPE"

STRUCTURAL = "STRUCTURAL"
TYPE_EDGE = "TYPE_EDGE"
ALIGNMENT = "ALIGNMENT"

PREDICATE_ALIGNMENT_GRID = (0.25, 0.375, 0.5, 0.6, 0.75)


class NoAnswerError(Exception):
    """The question cannot proceed (too few cornerstone groups survive)."""

    def __init__(self, message: str, reason: str = "INSUFFICIENT_GROUPS") -> None:
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class Thresholds:
    """Similarity cutoffs: one base value, one for predicate alignment edges."""

    base: float = 0.25
    predicate_alignment: float = 0.5

    def __post_init__(self) -> None:
        for name, value in (("base", self.base), ("predicate_alignment", self.predicate_alignment)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"threshold {name} must be in [0, 1], got {value}")


@dataclass
class QuasiNode:
    id: int
    kind: str
    label: str
    provenance: tuple[VertexId, ...]
    weight: float = 0.0
    # for MENTION nodes: the linked entity, if any (used for candidate merging)
    entity_kb: str | None = None
    ner_type: str = "NONE"


@dataclass
class QuasiEdge:
    src: int
    dst: int
    kind: str
    weight: float


@dataclass(frozen=True)
class CornerstoneGroup:
    """Quasi-graph nodes matching one question term, with their similarities."""

    term: str
    term_kind: str  # "entity" or "relation"
    members: dict[int, float]


CornerstoneGroups = tuple[CornerstoneGroup, ...]


@dataclass
class QuasiGraph:
    nodes: dict[int, QuasiNode] = field(default_factory=dict)
    edges: dict[tuple[int, int], QuasiEdge] = field(default_factory=dict)
    # per-term node similarities recorded while weighting; consumed by
    # cornerstone selection so it needs no further resource access
    term_similarities: dict[tuple[str, str], dict[int, float]] = field(default_factory=dict)
    _next_id: int = 0

    def add_node(
        self,
        kind: str,
        label: str,
        provenance: tuple[VertexId, ...],
        entity_kb: str | None = None,
        ner_type: str = "NONE",
    ) -> int:
        nid = self._next_id
        self._next_id += 1
        self.nodes[nid] = QuasiNode(
            id=nid,
            kind=kind,
            label=label,
            provenance=provenance,
            entity_kb=entity_kb,
            ner_type=ner_type,
        )
        return nid

    def add_edge(self, a: int, b: int, kind: str, weight: float) -> None:
        """Insert an undirected edge; parallel edges keep the highest weight."""
        if a == b:
            return
        key = (a, b) if a < b else (b, a)
        existing = self.edges.get(key)
        if existing is None or weight > existing.weight:
            self.edges[key] = QuasiEdge(src=key[0], dst=key[1], kind=kind, weight=weight)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {nid: set() for nid in self.nodes}
        for (a, b) in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def nodes_of_kind(self, kind: str) -> list[QuasiNode]:
        return [n for n in self.nodes.values() if n.kind == kind]

    def edges_of_kind(self, kind: str) -> list[QuasiEdge]:
        return [e for e in self.edges.values() if e.kind == kind]


def _spans_overlap(a: Span, b: Span) -> bool:
    return a[0] < b[1] and b[0] < a[1]


def _token_gap(a: Span, b: Span) -> int:
    """Tokens strictly between two non-overlapping spans (0 when adjacent
    or overlapping)."""
    if _spans_overlap(a, b):
        return 0
    return max(0, max(a[0], b[0]) - min(a[1], b[1]))


# ---------------------------------------------------------------------------
# Translation
# ---------------------------------------------------------------------------


def translate_subgraph(sub: PropertyGraph) -> QuasiGraph:
    """Create mention/entity/predicate nodes and the structural skeleton.

    Clauses of one sentence that share a normalized predicate phrase share
    one PREDICATE node (so parallel clause readings induce one edge, kept
    at the highest weight). Structural edges: subject-mention <->
    predicate and predicate <-> object-mention for every clause role span
    overlapping a mention span, plus mention <-> entity links. Coref pairs
    come in as weight-1 alignment edges. Mention-predicate weights are
    provisional until ``assign_edge_weights`` runs.
    """
    qg = QuasiGraph()
    mention_node: dict[str, int] = {}
    entity_node: dict[str, int] = {}

    for kb_id in sub.entities:
        entity = sub.entities[kb_id]
        entity_node[kb_id] = qg.add_node(
            ENTITY, entity.label, (entity.id,), entity_kb=kb_id
        )
    for local, mention in sub.mentions.items():
        kb = mention.entity_id.local if mention.entity_id else None
        mention_node[local] = qg.add_node(
            MENTION, mention.surface, (mention.id,), entity_kb=kb, ner_type=mention.ner_type
        )
        if kb is not None:
            qg.add_edge(mention_node[local], entity_node[kb], STRUCTURAL, 1.0)

    pred_by_key: dict[tuple[str, str], int] = {}
    for clause in sorted(sub.clauses.values(), key=lambda c: c.id.local):
        sentence = sub.sentences[clause.parent_sent.local]
        label = " ".join(sentence.tokens[clause.predicate_span[0] : clause.predicate_span[1]])
        key = (sentence.id.local, normalize_text(label))
        if key in pred_by_key:
            pred_nid = pred_by_key[key]
            node = qg.nodes[pred_nid]
            node.provenance = tuple(sorted({*node.provenance, clause.id}, key=str))
        else:
            pred_nid = qg.add_node(PREDICATE, label, (clause.id,))
            pred_by_key[key] = pred_nid
        sentence_mentions = sub.mentions_of_sentence(sentence.id.local)
        for role_span in (clause.subject_span, *clause.object_spans):
            for mention in sentence_mentions:
                if _spans_overlap(role_span, mention.span):
                    qg.add_edge(mention_node[mention.id.local], pred_nid, STRUCTURAL, 1.0)

    for a, b in sub.coref_pairs:
        qg.add_edge(mention_node[a], mention_node[b], ALIGNMENT, 1.0)
    return qg


# ---------------------------------------------------------------------------
# Type nodes via Hearst patterns
# ---------------------------------------------------------------------------


def _noun_phrase_after(
    tokens: tuple[str, ...], start: int, stopwords: frozenset[str], verbs: frozenset[str]
) -> tuple[int, int] | None:
    """Longest content-token run from ``start``: stops at punctuation,
    stopwords and verbs."""
    end = start
    while end < len(tokens):
        token = tokens[end]
        lower = token.lower()
        if not any(ch.isalnum() for ch in token):
            break
        if lower in stopwords or lower in verbs:
            break
        end += 1
    if end == start:
        return None
    return (start, end)


def _hearst_matches(
    tokens: tuple[str, ...], stopwords: frozenset[str], verbs: frozenset[str]
) -> list[tuple[str, int, Span]]:
    """Pattern matches as (np1 anchoring rule, anchor token index, np2 span).

    Inventory: "NP1 is/was a/an NP2", "NP2 such as NP1", and the
    apposition "NP1, a/an NP2,". A mention plays NP1 when its span ends at
    the anchor (is-a, apposition) or starts at it (such-as).
    """
    matches: list[tuple[str, int, Span]] = []
    lowered = [t.lower() for t in tokens]
    for i, token in enumerate(lowered):
        if token in ("is", "was") and i + 1 < len(tokens) and lowered[i + 1] in ("a", "an"):
            np2 = _noun_phrase_after(tokens, i + 2, stopwords, verbs)
            if np2 is not None:
                matches.append(("ends_at", i, np2))
        if token == "," and i + 1 < len(tokens) and lowered[i + 1] in ("a", "an"):
            np2 = _noun_phrase_after(tokens, i + 2, stopwords, verbs)
            if np2 is not None and np2[1] < len(tokens) and lowered[np2[1]] in (",", "."):
                matches.append(("ends_at", i, np2))
        if token == "such" and i + 1 < len(lowered) and lowered[i + 1] == "as":
            start = i
            while (
                start > 0
                and lowered[start - 1] not in stopwords
                and any(ch.isalnum() for ch in tokens[start - 1])
                and lowered[start - 1] not in verbs
            ):
                start -= 1
            if start < i:
                matches.append(("starts_at", i + 2, (start, i)))
    return matches


def add_type_nodes(
    qg: QuasiGraph,
    sub: PropertyGraph,
    stopwords: frozenset[str] | None = None,
    verbs: frozenset[str] | None = None,
) -> QuasiGraph:
    """Attach TYPE nodes for Hearst-pattern matches whose NP1 touches a
    mention; type labels are deduplicated by normalized form."""
    if stopwords is None:
        stopwords = default_stopwords()
    if verbs is None:
        verbs = default_verb_lexicon()
    mention_node = {
        node.provenance[0].local: nid
        for nid, node in qg.nodes.items()
        if node.kind == MENTION
    }
    type_node: dict[str, int] = {
        normalize_text(node.label): nid
        for nid, node in qg.nodes.items()
        if node.kind == TYPE
    }
    for sentence in sub.sentences.values():
        tokens = sentence.tokens
        mentions = sub.mentions_of_sentence(sentence.id.local)
        for rule, anchor, np2 in _hearst_matches(tokens, stopwords, verbs):
            if rule == "ends_at":
                touching = [m for m in mentions if m.span[1] == anchor]
            else:
                touching = [m for m in mentions if m.span[0] == anchor]
            if not touching:
                continue
            label = " ".join(tokens[np2[0] : np2[1]])
            key = normalize_text(label)
            if key not in type_node:
                type_node[key] = qg.add_node(TYPE, label, (sentence.id,))
            for mention in touching:
                qg.add_edge(mention_node[mention.id.local], type_node[key], TYPE_EDGE, 1.0)
    return qg


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


def assign_edge_weights(qg: QuasiGraph, sub: PropertyGraph) -> QuasiGraph:
    """Mention-predicate weight = 1/(1+d), d counting tokens strictly
    between the mention span and the predicate span; parallel clause edges
    keep the maximum. Mention-entity and type edges stay at 1."""
    pred_node: dict[str, int] = {}
    for nid, node in qg.nodes.items():
        if node.kind == PREDICATE:
            for clause_vid in node.provenance:
                pred_node[clause_vid.local] = nid
    mention_node = {
        node.provenance[0].local: nid
        for nid, node in qg.nodes.items()
        if node.kind == MENTION
    }
    best: dict[tuple[int, int], float] = {}
    for clause in sub.clauses.values():
        pred_nid = pred_node[clause.id.local]
        sentence_mentions = sub.mentions_of_sentence(clause.parent_sent.local)
        for role_span in (clause.subject_span, *clause.object_spans):
            for mention in sentence_mentions:
                if not _spans_overlap(role_span, mention.span):
                    continue
                gap = _token_gap(mention.span, clause.predicate_span)
                weight = 1.0 / (1.0 + gap)
                key = tuple(sorted((mention_node[mention.id.local], pred_nid)))
                if weight > best.get(key, 0.0):
                    best[key] = weight
    for key, weight in best.items():
        edge = qg.edges.get(key)
        if edge is not None:
            qg.edges[key] = replace(edge, weight=weight)
    return qg


def assign_vertex_weights(
    qg: QuasiGraph,
    terms: QuestionTerms,
    dictionary: MentionEntityDictionary,
    embeddings: EmbeddingTable,
) -> QuasiGraph:
    """Node weight = the maximal similarity to any question term of the
    matching kind; per-term similarities are kept for cornerstone selection."""
    relation_vectors = {
        term: phrase_vector(term, embeddings) for term in terms.relation_terms
    }
    entity_sims: dict[str, dict[int, float]] = {t: {} for t in terms.entity_terms}
    relation_sims: dict[str, dict[int, float]] = {t: {} for t in terms.relation_terms}

    for nid, node in qg.nodes.items():
        if node.kind in (MENTION, ENTITY):
            best = 0.0
            for term in terms.entity_terms:
                sim = mention_similarity(term, node.label, dictionary)
                entity_sims[term][nid] = sim
                best = max(best, sim)
            node.weight = best
        elif node.kind == PREDICATE:
            label_vec = phrase_vector(node.label, embeddings)
            best = 0.0
            for term in terms.relation_terms:
                sim = clamped_cosine(label_vec, relation_vectors[term])
                relation_sims[term][nid] = sim
                best = max(best, sim)
            node.weight = best
        else:  # TYPE: token-set Jaccard against every term
            best = 0.0
            for term in terms.all_terms():
                sim = mention_similarity(term, node.label, MentionEntityDictionary.empty())
                best = max(best, sim)
            node.weight = best

    qg.term_similarities = {
        **{("entity", term): sims for term, sims in entity_sims.items()},
        **{("relation", term): sims for term, sims in relation_sims.items()},
    }
    return qg


def add_alignment_edges(
    qg: QuasiGraph,
    thresholds: Thresholds,
    dictionary: MentionEntityDictionary,
    embeddings: EmbeddingTable,
) -> QuasiGraph:
    """Insert alignment edges between same-kind nodes whose similarity
    clears the threshold; the similarity becomes the edge weight.

    Mention pairs linked to the same entity align at weight 1 outright.
    """
    mentions = sorted(qg.nodes_of_kind(MENTION), key=lambda n: n.id)
    for i, a in enumerate(mentions):
        for b in mentions[i + 1 :]:
            if a.entity_kb is not None and a.entity_kb == b.entity_kb:
                qg.add_edge(a.id, b.id, ALIGNMENT, 1.0)
                continue
            sim = mention_similarity(a.label, b.label, dictionary)
            if sim >= thresholds.base:
                qg.add_edge(a.id, b.id, ALIGNMENT, sim)

    predicates = sorted(qg.nodes_of_kind(PREDICATE), key=lambda n: n.id)
    pred_vecs = {n.id: phrase_vector(n.label, embeddings) for n in predicates}
    for i, a in enumerate(predicates):
        for b in predicates[i + 1 :]:
            sim = clamped_cosine(pred_vecs[a.id], pred_vecs[b.id])
            if sim >= thresholds.predicate_alignment:
                qg.add_edge(a.id, b.id, ALIGNMENT, sim)

    types = sorted(qg.nodes_of_kind(TYPE), key=lambda n: n.id)
    type_vecs = {n.id: phrase_vector(n.label, embeddings) for n in types}
    for i, a in enumerate(types):
        for b in types[i + 1 :]:
            sim = clamped_cosine(type_vecs[a.id], type_vecs[b.id])
            if sim >= thresholds.base:
                qg.add_edge(a.id, b.id, ALIGNMENT, sim)
    return qg


# ---------------------------------------------------------------------------
# Cornerstones and largest connected component
# ---------------------------------------------------------------------------


def select_cornerstones(
    qg: QuasiGraph, terms: QuestionTerms, thresholds: Thresholds
) -> CornerstoneGroups:
    """One group per question term: entity terms gather MENTION/ENTITY
    nodes, relation terms gather PREDICATE nodes, each at similarity >=
    the base threshold. Empty groups are dropped; fewer than two
    surviving groups is a no-answer condition."""
    if not qg.term_similarities:
        raise ValueError("vertex weights must be assigned before cornerstone selection")
    groups: list[CornerstoneGroup] = []
    for kind, term_list in (("entity", terms.entity_terms), ("relation", terms.relation_terms)):
        for term in term_list:
            sims = qg.term_similarities.get((kind, term), {})
            members = {
                nid: sim for nid, sim in sorted(sims.items()) if sim >= thresholds.base
            }
            if members:
                groups.append(CornerstoneGroup(term=term, term_kind=kind, members=members))
    if len(groups) < 2:
        raise NoAnswerError(
            f"only {len(groups)} cornerstone group(s) matched the question terms"
        )
    return tuple(groups)


def connected_components(qg: QuasiGraph) -> list[set[int]]:
    adj = qg.adjacency()
    seen: set[int] = set()
    components: list[set[int]] = []
    for start in sorted(qg.nodes):
        if start in seen:
            continue
        component = {start}
        frontier = [start]
        seen.add(start)
        while frontier:
            node = frontier.pop()
            for neighbor in adj[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    component.add(neighbor)
                    frontier.append(neighbor)
        components.append(component)
    return components


def largest_connected_component(
    qg: QuasiGraph, groups: CornerstoneGroups
) -> tuple[QuasiGraph, CornerstoneGroups]:
    """Restrict the graph and the cornerstone groups to the largest
    component (ties: total edge weight, then smallest node id)."""
    components = connected_components(qg)
    if not components:
        raise NoAnswerError("empty quasi-graph")

    def component_rank(component: set[int]) -> tuple[int, float, int]:
        weight = sum(
            e.weight for (a, b), e in qg.edges.items() if a in component and b in component
        )
        return (len(component), weight, -min(component))

    best = max(components, key=component_rank)
    lcc = QuasiGraph()
    lcc.nodes = {nid: qg.nodes[nid] for nid in sorted(best)}
    lcc.edges = {
        key: edge for key, edge in qg.edges.items() if key[0] in best and key[1] in best
    }
    lcc.term_similarities = {
        term: {nid: sim for nid, sim in sims.items() if nid in best}
        for term, sims in qg.term_similarities.items()
    }
    lcc._next_id = qg._next_id
    surviving = []
    for group in groups:
        members = {nid: sim for nid, sim in group.members.items() if nid in best}
        if members:
            surviving.append(
                CornerstoneGroup(term=group.term, term_kind=group.term_kind, members=members)
            )
    if len(surviving) < 2:
        raise NoAnswerError(
            "largest connected component keeps fewer than 2 cornerstone groups"
        )
    return lcc, tuple(surviving)


def build_quasi_graph(
    sub: PropertyGraph,
    terms: QuestionTerms,
    thresholds: Thresholds,
    dictionary: MentionEntityDictionary,
    embeddings: EmbeddingTable,
    stopwords: frozenset[str] | None = None,
    verbs: frozenset[str] | None = None,
) -> QuasiGraph:
    """Full construction: translate, type nodes, edge + vertex weights,
    alignment edges."""
    qg = translate_subgraph(sub)
    add_type_nodes(qg, sub, stopwords=stopwords, verbs=verbs)
    assign_edge_weights(qg, sub)
    assign_vertex_weights(qg, terms, dictionary, embeddings)
    add_alignment_edges(qg, thresholds, dictionary, embeddings)
    return qg
