"""Hybrid property graph of documents, sentences, clauses, mentions and entities.

The graph is built from newline-delimited annotation records (one document
per line), is immutable once built, and supports document-pivoted subgraph
extraction plus a versioned binary image for persistence. The layout is
single-node but id-indexed and append-ordered so it could later be
partitioned.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Iterator

VERTEX_KINDS = ("doc", "sent", "clause", "mention", "entity")
EDGE_KINDS = ("structural", "mention_entity", "coref")
NER_TYPES = ("PER", "ORG", "LOC", "MISC", "NONE")

Span = tuple[int, int]


class GraphError(Exception):
    """Base class for graph construction and query failures."""


class DuplicateDocumentError(GraphError):
    """Two annotation records share a doc_id."""


class UnknownVertexError(GraphError):
    """A query referenced a vertex id that is not in the graph."""


class GraphImageError(GraphError):
    """A persisted graph image is unreadable, truncated or version-mismatched."""


@dataclass(frozen=True)
class VertexId:
    """Globally unique vertex name: a kind tag plus a corpus-unique local id."""

    kind: str
    local: str

    def __post_init__(self) -> None:
        if self.kind not in VERTEX_KINDS:
            raise ValueError(f"unknown vertex kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind}:{self.local}"


@dataclass(frozen=True)
class DocumentVertex:
    id: VertexId
    title: str
    url: str | None
    timestamp: str | None
    sentence_ids: tuple[VertexId, ...]


@dataclass(frozen=True)
class SentenceVertex:
    id: VertexId
    text: str
    tokens: tuple[str, ...]
    clause_ids: tuple[VertexId, ...]
    parent_doc: VertexId


@dataclass(frozen=True)
class ClauseVertex:
    id: VertexId
    subject_span: Span
    predicate_span: Span
    object_spans: tuple[Span, ...]
    adverbial_spans: tuple[Span, ...]
    parent_sent: VertexId


@dataclass(frozen=True)
class MentionVertex:
    id: VertexId
    surface: str
    span: Span
    sentence: VertexId
    ner_type: str = "NONE"
    pos: str | None = None
    lemma: str | None = None
    entity_id: VertexId | None = None


@dataclass(frozen=True)
class EntityVertex:
    id: VertexId
    kb_id: str
    label: str


@dataclass(frozen=True)
class GraphEdge:
    src: VertexId
    dst: VertexId
    kind: str


@dataclass(frozen=True)
class CorpusStats:
    documents: int
    sentences: int
    clauses: int
    mentions: int
    entities: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.documents, self.sentences, self.clauses, self.mentions, self.entities)


@dataclass(frozen=True)
class RejectedRecord:
    """A schema-invalid annotation record, reported instead of ingested."""

    doc_id: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"doc {self.doc_id!r} at {self.path}: {self.message}"


@dataclass
class PropertyGraph:
    """Immutable-after-build store of typed vertices and typed edges."""

    documents: dict[str, DocumentVertex] = field(default_factory=dict)
    sentences: dict[str, SentenceVertex] = field(default_factory=dict)
    clauses: dict[str, ClauseVertex] = field(default_factory=dict)
    mentions: dict[str, MentionVertex] = field(default_factory=dict)
    entities: dict[str, EntityVertex] = field(default_factory=dict)
    # coref edges stored once per unordered pair, canonically (min, max)
    coref_pairs: set[tuple[str, str]] = field(default_factory=set)

    # -- lookups ---------------------------------------------------------

    def mentions_of_sentence(self, sent_local: str) -> list[MentionVertex]:
        index = self._mention_index()
        return [self.mentions[m] for m in index.get(sent_local, ())]

    def _mention_index(self) -> dict[str, tuple[str, ...]]:
        cached = getattr(self, "_mentions_by_sentence", None)
        if cached is None:
            grouped: dict[str, list[str]] = {}
            for local, mention in self.mentions.items():
                grouped.setdefault(mention.sentence.local, []).append(local)
            cached = {k: tuple(v) for k, v in grouped.items()}
            object.__setattr__(self, "_mentions_by_sentence", cached)
        return cached

    # -- edges -----------------------------------------------------------

    def edges(self) -> Iterator[GraphEdge]:
        """All edges, grouped by kind: structural, mention_entity, coref."""
        for doc in self.documents.values():
            for sid in doc.sentence_ids:
                yield GraphEdge(doc.id, sid, "structural")
        for sent in self.sentences.values():
            for cid in sent.clause_ids:
                yield GraphEdge(sent.id, cid, "structural")
        for mention in self.mentions.values():
            if mention.entity_id is not None:
                yield GraphEdge(mention.id, mention.entity_id, "mention_entity")
        for a, b in self.coref_pairs:
            yield GraphEdge(VertexId("mention", a), VertexId("mention", b), "coref")

    def edge_multiset(self) -> dict[tuple[str, str, str], int]:
        counts: dict[tuple[str, str, str], int] = {}
        for edge in self.edges():
            key = (str(edge.src), str(edge.dst), edge.kind)
            counts[key] = counts.get(key, 0) + 1
        return counts

    def coref_partners(self, mention_local: str) -> set[str]:
        partners = set()
        for a, b in self.coref_pairs:
            if a == mention_local:
                partners.add(b)
            elif b == mention_local:
                partners.add(a)
        return partners

    # -- canonical form ---------------------------------------------------

    def canonical_payload(self) -> dict:
        """Order-independent serializable form: equal payloads mean
        isomorphic graphs (vertex ids are the isomorphism)."""
        payload = _graph_payload(self)
        for key in ("documents", "sentences", "clauses", "mentions", "entities"):
            payload[key] = sorted(payload[key], key=lambda row: row["id"])
        payload["coref_pairs"] = sorted(payload["coref_pairs"])
        return payload


def corpus_stats(graph: PropertyGraph) -> CorpusStats:
    return CorpusStats(
        documents=len(graph.documents),
        sentences=len(graph.sentences),
        clauses=len(graph.clauses),
        mentions=len(graph.mentions),
        entities=len(graph.entities),
    )


# ---------------------------------------------------------------------------
# Annotation record validation
# ---------------------------------------------------------------------------


def _check_span(value, n_tokens: int, path: str, errors: list[tuple[str, str]]) -> Span | None:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, int) for x in value)
    ):
        errors.append((path, "span must be an [start, end) pair of integers"))
        return None
    start, end = value
    if not (0 <= start < end <= n_tokens):
        errors.append((path, f"span [{start}, {end}) outside token range 0..{n_tokens}"))
        return None
    return (start, end)


def _squash(text: str) -> str:
    return "".join(text.split())


def validate_record(record: dict) -> list[tuple[str, str]]:
    """Schema-check one annotation record; returns (field path, message) pairs."""
    errors: list[tuple[str, str]] = []
    if not isinstance(record, dict):
        return [("", "record must be an object")]
    doc_id = record.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        errors.append(("doc_id", "missing or empty"))
    if not isinstance(record.get("title"), str):
        errors.append(("title", "missing or not a string"))
    for opt in ("url", "timestamp"):
        if opt in record and not isinstance(record[opt], str):
            errors.append((opt, "must be a string when present"))
    sentences = record.get("sentences")
    if not isinstance(sentences, list):
        errors.append(("sentences", "missing or not a list"))
        sentences = []
    mention_ids_seen: set[str] = set()
    for si, sent in enumerate(sentences):
        spath = f"sentences[{si}]"
        if not isinstance(sent, dict):
            errors.append((spath, "must be an object"))
            continue
        if not isinstance(sent.get("sent_id"), str) or not sent.get("sent_id"):
            errors.append((f"{spath}.sent_id", "missing or empty"))
        text = sent.get("text")
        tokens = sent.get("tokens")
        if not isinstance(text, str):
            errors.append((f"{spath}.text", "missing or not a string"))
            text = ""
        if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
            errors.append((f"{spath}.tokens", "missing or not a list of strings"))
            tokens = []
        if text and tokens and _squash("".join(tokens)) != _squash(text):
            errors.append(
                (f"{spath}.tokens", "tokens do not reconstruct text up to whitespace")
            )
        n = len(tokens)
        for ci, clause in enumerate(sent.get("clauses", []) or []):
            cpath = f"{spath}.clauses[{ci}]"
            if not isinstance(clause, dict):
                errors.append((cpath, "must be an object"))
                continue
            if not isinstance(clause.get("clause_id"), str) or not clause.get("clause_id"):
                errors.append((f"{cpath}.clause_id", "missing or empty"))
            for role in ("subject", "predicate"):
                if role not in clause:
                    errors.append((f"{cpath}.{role}", "mandatory clause component missing"))
                else:
                    _check_span(clause[role], n, f"{cpath}.{role}", errors)
            for li, span in enumerate(clause.get("objects", []) or []):
                _check_span(span, n, f"{cpath}.objects[{li}]", errors)
            for li, span in enumerate(clause.get("adverbials", []) or []):
                _check_span(span, n, f"{cpath}.adverbials[{li}]", errors)
        for mi, mention in enumerate(sent.get("mentions", []) or []):
            mpath = f"{spath}.mentions[{mi}]"
            if not isinstance(mention, dict):
                errors.append((mpath, "must be an object"))
                continue
            mid = mention.get("mention_id")
            if not isinstance(mid, str) or not mid:
                errors.append((f"{mpath}.mention_id", "missing or empty"))
            elif mid in mention_ids_seen:
                errors.append((f"{mpath}.mention_id", f"duplicate mention_id {mid!r}"))
            else:
                mention_ids_seen.add(mid)
            span = _check_span(mention.get("span"), n, f"{mpath}.span", errors)
            surface = mention.get("surface")
            if not isinstance(surface, str) or not surface:
                errors.append((f"{mpath}.surface", "missing or empty"))
            elif span is not None and tokens:
                joined = " ".join(tokens[span[0] : span[1]])
                if joined != surface:
                    errors.append(
                        (f"{mpath}.surface", f"surface {surface!r} != span tokens {joined!r}")
                    )
            ner = mention.get("ner_type", "NONE")
            if ner not in NER_TYPES:
                errors.append((f"{mpath}.ner_type", f"unknown ner_type {ner!r}"))
            if "entity_id" in mention and (
                not isinstance(mention["entity_id"], str) or not mention["entity_id"]
            ):
                errors.append((f"{mpath}.entity_id", "must be a non-empty string"))
    chains = record.get("coref_chains", []) or []
    if not isinstance(chains, list):
        errors.append(("coref_chains", "must be a list of chains"))
        chains = []
    for ki, chain in enumerate(chains):
        kpath = f"coref_chains[{ki}]"
        if not isinstance(chain, list) or len(chain) < 2:
            errors.append((kpath, "chain must list >= 2 mention ids"))
            continue
        for member in chain:
            if member not in mention_ids_seen:
                errors.append((kpath, f"unknown mention id {member!r} in chain"))
    return errors


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------


def entity_label(kb_id: str) -> str:
    """Canonical display label for a KB identifier."""
    return kb_id.replace("_", " ")


def ingest_corpus(
    records: Iterable[dict],
    dictionary=None,
    on_reject: Callable[[RejectedRecord], None] | None = None,
) -> PropertyGraph:
    """Build the property graph from per-document annotation records.

    Schema-invalid records are skipped and reported through ``on_reject``;
    a duplicate doc_id is a hard error. ``dictionary`` is accepted for
    interface compatibility with linkers that resolve against it upstream;
    entity vertices come solely from the records' entity_ids.
    """
    del dictionary  # linking happened upstream; ids arrive in the records
    graph = PropertyGraph()
    seen_sent_ids: set[str] = set()
    seen_clause_ids: set[str] = set()
    seen_mention_ids: set[str] = set()

    for record in records:
        errors = validate_record(record)
        doc_id = record.get("doc_id") if isinstance(record, dict) else None
        doc_id = doc_id if isinstance(doc_id, str) else "<unknown>"
        if doc_id in graph.documents:
            raise DuplicateDocumentError(f"duplicate doc_id {doc_id!r}")
        if not errors:
            # cross-document uniqueness of local ids
            for si, sent in enumerate(record["sentences"]):
                if sent["sent_id"] in seen_sent_ids:
                    errors.append(
                        (f"sentences[{si}].sent_id", f"duplicate sent_id {sent['sent_id']!r}")
                    )
                for ci, clause in enumerate(sent.get("clauses", []) or []):
                    if clause["clause_id"] in seen_clause_ids:
                        errors.append(
                            (
                                f"sentences[{si}].clauses[{ci}].clause_id",
                                f"duplicate clause_id {clause['clause_id']!r}",
                            )
                        )
                for mi, mention in enumerate(sent.get("mentions", []) or []):
                    if mention["mention_id"] in seen_mention_ids:
                        errors.append(
                            (
                                f"sentences[{si}].mentions[{mi}].mention_id",
                                f"duplicate mention_id {mention['mention_id']!r}",
                            )
                        )
        if errors:
            if on_reject is not None:
                for path, message in errors:
                    on_reject(RejectedRecord(doc_id=doc_id, path=path, message=message))
            continue

        doc_vid = VertexId("doc", doc_id)
        sentence_vids: list[VertexId] = []
        for sent in record["sentences"]:
            sent_vid = VertexId("sent", sent["sent_id"])
            seen_sent_ids.add(sent["sent_id"])
            sentence_vids.append(sent_vid)
            clause_vids: list[VertexId] = []
            for clause in sent.get("clauses", []) or []:
                clause_vid = VertexId("clause", clause["clause_id"])
                seen_clause_ids.add(clause["clause_id"])
                clause_vids.append(clause_vid)
                graph.clauses[clause_vid.local] = ClauseVertex(
                    id=clause_vid,
                    subject_span=tuple(clause["subject"]),
                    predicate_span=tuple(clause["predicate"]),
                    object_spans=tuple(tuple(s) for s in clause.get("objects", []) or []),
                    adverbial_spans=tuple(
                        tuple(s) for s in clause.get("adverbials", []) or []
                    ),
                    parent_sent=sent_vid,
                )
            for mention in sent.get("mentions", []) or []:
                mention_vid = VertexId("mention", mention["mention_id"])
                seen_mention_ids.add(mention["mention_id"])
                entity_vid = None
                if mention.get("entity_id"):
                    kb_id = mention["entity_id"]
                    entity_vid = VertexId("entity", kb_id)
                    if kb_id not in graph.entities:
                        graph.entities[kb_id] = EntityVertex(
                            id=entity_vid, kb_id=kb_id, label=entity_label(kb_id)
                        )
                graph.mentions[mention_vid.local] = MentionVertex(
                    id=mention_vid,
                    surface=mention["surface"],
                    span=tuple(mention["span"]),
                    sentence=sent_vid,
                    ner_type=mention.get("ner_type", "NONE"),
                    pos=mention.get("pos"),
                    lemma=mention.get("lemma"),
                    entity_id=entity_vid,
                )
            graph.sentences[sent_vid.local] = SentenceVertex(
                id=sent_vid,
                text=sent["text"],
                tokens=tuple(sent["tokens"]),
                clause_ids=tuple(clause_vids),
                parent_doc=doc_vid,
            )
        graph.documents[doc_id] = DocumentVertex(
            id=doc_vid,
            title=record["title"],
            url=record.get("url"),
            timestamp=record.get("timestamp"),
            sentence_ids=tuple(sentence_vids),
        )
        # expand each coreference chain to pairwise edges among its members
        for chain in record.get("coref_chains", []) or []:
            for i in range(len(chain)):
                for j in range(i + 1, len(chain)):
                    a, b = sorted((chain[i], chain[j]))
                    if a != b:
                        graph.coref_pairs.add((a, b))
    return graph


def read_annotation_file(path: str | Path) -> Iterator[dict]:
    """Yield one record per non-blank line of an annotation JSONL file."""
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise GraphError(f"{path}:{lineno}: invalid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def document_subgraph(graph: PropertyGraph, doc_ids: set[str] | Iterable[str]) -> PropertyGraph:
    """Subgraph of the listed documents: their full hierarchical substructure,
    every entity linked from a contained mention, and coref edges whose
    endpoints both survive."""
    wanted = {d.local if isinstance(d, VertexId) else d for d in doc_ids}
    for doc_id in sorted(wanted):
        if doc_id not in graph.documents:
            raise UnknownVertexError(f"unknown doc_id {doc_id!r}")
    sub = PropertyGraph()
    for doc_id in graph.documents:
        if doc_id not in wanted:
            continue
        doc = graph.documents[doc_id]
        sub.documents[doc_id] = doc
        for sent_vid in doc.sentence_ids:
            sent = graph.sentences[sent_vid.local]
            sub.sentences[sent_vid.local] = sent
            for clause_vid in sent.clause_ids:
                sub.clauses[clause_vid.local] = graph.clauses[clause_vid.local]
            for mention in graph.mentions_of_sentence(sent_vid.local):
                sub.mentions[mention.id.local] = mention
                if mention.entity_id is not None:
                    kb = mention.entity_id.local
                    sub.entities[kb] = graph.entities[kb]
    for a, b in graph.coref_pairs:
        if a in sub.mentions and b in sub.mentions:
            sub.coref_pairs.add((a, b))
    return sub


# ---------------------------------------------------------------------------
# Persistence: versioned binary image
# ---------------------------------------------------------------------------

_MAGIC = b"GQAGRAPH"
FORMAT_VERSION = 1


def _span_list(spans: tuple[Span, ...]) -> list[list[int]]:
    return [list(s) for s in spans]


def _graph_payload(graph: PropertyGraph) -> dict:
    return {
        "documents": [
            {
                "id": d.id.local,
                "title": d.title,
                "url": d.url,
                "timestamp": d.timestamp,
                "sentence_ids": [s.local for s in d.sentence_ids],
            }
            for d in graph.documents.values()
        ],
        "sentences": [
            {
                "id": s.id.local,
                "text": s.text,
                "tokens": list(s.tokens),
                "clause_ids": [c.local for c in s.clause_ids],
                "parent_doc": s.parent_doc.local,
            }
            for s in graph.sentences.values()
        ],
        "clauses": [
            {
                "id": c.id.local,
                "subject": list(c.subject_span),
                "predicate": list(c.predicate_span),
                "objects": _span_list(c.object_spans),
                "adverbials": _span_list(c.adverbial_spans),
                "parent_sent": c.parent_sent.local,
            }
            for c in graph.clauses.values()
        ],
        "mentions": [
            {
                "id": m.id.local,
                "surface": m.surface,
                "span": list(m.span),
                "sentence": m.sentence.local,
                "ner_type": m.ner_type,
                "pos": m.pos,
                "lemma": m.lemma,
                "entity_id": m.entity_id.local if m.entity_id else None,
            }
            for m in graph.mentions.values()
        ],
        "entities": [
            {"id": e.kb_id, "kb_id": e.kb_id, "label": e.label}
            for e in graph.entities.values()
        ],
        "coref_pairs": [list(p) for p in sorted(graph.coref_pairs)],
    }


def save_graph(graph: PropertyGraph, path: str | Path) -> None:
    """Write the graph as: magic, format version, length-prefixed
    zlib-compressed vertex tables and edge lists."""
    blob = zlib.compress(
        json.dumps(_graph_payload(graph), ensure_ascii=False).encode("utf-8")
    )
    with open(path, "wb") as handle:
        handle.write(_MAGIC)
        handle.write(struct.pack("<I", FORMAT_VERSION))
        handle.write(struct.pack("<Q", len(blob)))
        handle.write(blob)


def load_graph(path: str | Path) -> PropertyGraph:
    with open(path, "rb") as handle:
        head = handle.read(len(_MAGIC))
        if head != _MAGIC:
            raise GraphImageError(f"{path}: not a graph image (bad magic)")
        version_raw = handle.read(4)
        length_raw = handle.read(8)
        if len(version_raw) < 4 or len(length_raw) < 8:
            raise GraphImageError(f"{path}: truncated header")
        (version,) = struct.unpack("<I", version_raw)
        if version != FORMAT_VERSION:
            raise GraphImageError(
                f"{path}: format version {version} not supported (expected {FORMAT_VERSION})"
            )
        (length,) = struct.unpack("<Q", length_raw)
        blob = handle.read(length)
        if len(blob) < length:
            raise GraphImageError(f"{path}: truncated image")
    try:
        payload = json.loads(zlib.decompress(blob).decode("utf-8"))
    except (zlib.error, json.JSONDecodeError) as exc:
        raise GraphImageError(f"{path}: corrupt image payload: {exc}") from exc

    graph = PropertyGraph()
    for row in payload["entities"]:
        graph.entities[row["kb_id"]] = EntityVertex(
            id=VertexId("entity", row["kb_id"]), kb_id=row["kb_id"], label=row["label"]
        )
    for row in payload["documents"]:
        graph.documents[row["id"]] = DocumentVertex(
            id=VertexId("doc", row["id"]),
            title=row["title"],
            url=row["url"],
            timestamp=row["timestamp"],
            sentence_ids=tuple(VertexId("sent", s) for s in row["sentence_ids"]),
        )
    for row in payload["sentences"]:
        graph.sentences[row["id"]] = SentenceVertex(
            id=VertexId("sent", row["id"]),
            text=row["text"],
            tokens=tuple(row["tokens"]),
            clause_ids=tuple(VertexId("clause", c) for c in row["clause_ids"]),
            parent_doc=VertexId("doc", row["parent_doc"]),
        )
    for row in payload["clauses"]:
        graph.clauses[row["id"]] = ClauseVertex(
            id=VertexId("clause", row["id"]),
            subject_span=tuple(row["subject"]),
            predicate_span=tuple(row["predicate"]),
            object_spans=tuple(tuple(s) for s in row["objects"]),
            adverbial_spans=tuple(tuple(s) for s in row["adverbials"]),
            parent_sent=VertexId("sent", row["parent_sent"]),
        )
    for row in payload["mentions"]:
        graph.mentions[row["id"]] = MentionVertex(
            id=VertexId("mention", row["id"]),
            surface=row["surface"],
            span=tuple(row["span"]),
            sentence=VertexId("sent", row["sentence"]),
            ner_type=row["ner_type"],
            pos=row["pos"],
            lemma=row["lemma"],
            entity_id=VertexId("entity", row["entity_id"]) if row["entity_id"] else None,
        )
    graph.coref_pairs = {tuple(p) for p in payload["coref_pairs"]}
    return graph
