"""Synthetic corpora and solver instances shared by tests.

Two generators live here: random (but always schema-valid) annotation
corpora for property tests over the graph store, and the 20-document
mini-benchmark whose 10 questions each pin a unique tree-forced answer.
"""

from __future__ import annotations

import random

from graphqa.gst import GstInstance
from graphqa.similarity import EmbeddingTable, MentionEntityDictionary
import numpy as np

# ---------------------------------------------------------------------------
# Random annotation corpora
# ---------------------------------------------------------------------------

_WORDS = [
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
    "india", "juliet", "kilo", "lima", "mike", "november", "oscar", "papa",
]


def random_corpus(rng: random.Random, n_docs: int | None = None) -> list[dict]:
    """Schema-valid random annotation records with shared entities and
    coref chains."""
    n_docs = n_docs if n_docs is not None else rng.randint(0, 5)
    entity_pool = [f"E{i}" for i in range(rng.randint(1, 6))]
    records = []
    for d in range(n_docs):
        sentences = []
        mention_ids = []
        for s in range(rng.randint(1, 3)):
            n_tokens = rng.randint(3, 9)
            tokens = [rng.choice(_WORDS) for _ in range(n_tokens)]
            clauses = []
            for c in range(rng.randint(0, 2)):
                subj_start = rng.randrange(0, n_tokens - 1)
                subject = [subj_start, subj_start + 1]
                pred_start = rng.randrange(0, n_tokens - 1)
                predicate = [pred_start, pred_start + 1]
                objects = []
                if rng.random() < 0.7:
                    o = rng.randrange(0, n_tokens)
                    objects.append([o, min(n_tokens, o + rng.randint(1, 2))])
                clauses.append(
                    {
                        "clause_id": f"d{d}s{s}c{c}",
                        "subject": subject,
                        "predicate": predicate,
                        "objects": objects,
                        "adverbials": [],
                    }
                )
            mentions = []
            for m in range(rng.randint(0, 3)):
                start = rng.randrange(0, n_tokens)
                end = min(n_tokens, start + rng.randint(1, 2))
                mention = {
                    "mention_id": f"d{d}s{s}m{m}",
                    "span": [start, end],
                    "surface": " ".join(tokens[start:end]),
                    "ner_type": rng.choice(["PER", "ORG", "LOC", "MISC", "NONE"]),
                }
                if rng.random() < 0.6:
                    mention["entity_id"] = rng.choice(entity_pool)
                mentions.append(mention)
                mention_ids.append(mention["mention_id"])
            sentences.append(
                {
                    "sent_id": f"d{d}s{s}",
                    "text": " ".join(tokens),
                    "tokens": tokens,
                    "clauses": clauses,
                    "mentions": mentions,
                }
            )
        chains = []
        if len(mention_ids) >= 2 and rng.random() < 0.5:
            size = rng.randint(2, min(3, len(mention_ids)))
            chains.append(rng.sample(mention_ids, size))
        records.append(
            {
                "doc_id": f"doc{d}",
                "title": " ".join(rng.choice(_WORDS) for _ in range(2)),
                "sentences": sentences,
                "coref_chains": chains,
            }
        )
    return records


# ---------------------------------------------------------------------------
# Random GST instances
# ---------------------------------------------------------------------------


def random_instance(
    rng: random.Random, max_nodes: int = 8, max_groups: int = 3
) -> GstInstance:
    """Random connected instance: a spanning tree plus extra edges, costs
    uniform in [0, 1], 2..max_groups non-empty groups."""
    n = rng.randint(2, max_nodes)
    nodes = list(range(n))
    edges = []
    for v in range(1, n):
        u = rng.randrange(0, v)
        edges.append((u, v, rng.random()))
    extra = rng.randint(0, n)
    for _ in range(extra):
        u, v = rng.sample(nodes, 2)
        edges.append((min(u, v), max(u, v), rng.random()))
    n_groups = rng.randint(2, max_groups)
    groups = [
        frozenset(rng.sample(nodes, rng.randint(1, max(1, n // 2))))
        for _ in range(n_groups)
    ]
    return GstInstance.build(nodes, edges, groups)


# ---------------------------------------------------------------------------
# Mini-benchmark: 20 documents, 10 questions, forced unique answers
# ---------------------------------------------------------------------------

_MINI_SPECS = [
    # (person_a, person_b, answer surface, answer ner, verb, noun, category)
    ("Alice Johnson", "Bob Smith", "Acme Corporation", "ORG", "founded", "company", "Business"),
    ("Clara Webb", "David Lane", "Starlake Pictures", "ORG", "launched", "studio", "Business"),
    ("Elena Park", "Felix Moore", "Harbor Lights", "MISC", "directed", "movie", "Movie"),
    ("Grace Liu", "Henry Ford", "Silent Meadow", "MISC", "produced", "film", "Movie"),
    ("Iris Delgado", "Jack Monroe", "Paper Atlas", "MISC", "published", "novel", "Books"),
    ("Karen Voss", "Liam Chen", "Copper Crossing", "LOC", "designed", "bridge", "Place"),
    ("Maya Osei", "Noah Brandt", "Winter Suite", "MISC", "composed", "symphony", "Music"),
    ("Olive Stone", "Peter Quill", "Desert Anthem", "MISC", "recorded", "album", "Music"),
    ("Quinn Harper", "Rosa Velez", "Summit Relay", "MISC", "organized", "festival", "Event"),
    ("Sara Bloom", "Tomas Reyes", "Coral Fund", "ORG", "sponsored", "charity", "Event"),
]


def _mini_doc(doc_id: str, subject: str, verb: str, answer: str, answer_ner: str) -> dict:
    subj_tokens = subject.split()
    ans_tokens = answer.split()
    tokens = subj_tokens + [verb] + ans_tokens + ["."]
    subj_span = [0, len(subj_tokens)]
    pred_span = [len(subj_tokens), len(subj_tokens) + 1]
    ans_span = [pred_span[1], pred_span[1] + len(ans_tokens)]
    return {
        "doc_id": doc_id,
        "title": subject,
        "sentences": [
            {
                "sent_id": f"{doc_id}s1",
                "text": " ".join(tokens),
                "tokens": tokens,
                "clauses": [
                    {
                        "clause_id": f"{doc_id}s1c1",
                        "subject": subj_span,
                        "predicate": pred_span,
                        "objects": [ans_span],
                        "adverbials": [],
                    }
                ],
                "mentions": [
                    {
                        "mention_id": f"{doc_id}s1m1",
                        "span": subj_span,
                        "surface": subject,
                        "ner_type": "PER",
                        "entity_id": subject.replace(" ", "_"),
                    },
                    {
                        "mention_id": f"{doc_id}s1m2",
                        "span": ans_span,
                        "surface": answer,
                        "ner_type": answer_ner,
                        "entity_id": answer.replace(" ", "_"),
                    },
                ],
            }
        ],
        "coref_chains": [],
    }


def minibench_corpus() -> list[dict]:
    records = []
    for i, (person_a, person_b, answer, ner, verb, _, _) in enumerate(_MINI_SPECS):
        records.append(_mini_doc(f"mb{i}a", person_a, verb, answer, ner))
        records.append(_mini_doc(f"mb{i}b", person_b, verb, answer, ner))
    return records


def minibench_items() -> list[dict]:
    items = []
    for person_a, person_b, answer, _, verb, noun, category in _MINI_SPECS:
        items.append(
            {
                "question": f"Which {noun} was {verb} by {person_a} and {person_b}?",
                "gold_aliases": [answer],
                "gold_kb_id": answer.replace(" ", "_"),
                "category": category,
            }
        )
    return items


def minibench_embeddings() -> EmbeddingTable:
    verbs = sorted({spec[4] for spec in _MINI_SPECS})
    vectors = {}
    for i, verb in enumerate(verbs):
        v = np.zeros(len(verbs))
        v[i] = 1.0
        vectors[verb] = v
    return EmbeddingTable(vectors=vectors, dim=len(verbs))


def minibench_dictionary() -> MentionEntityDictionary:
    return MentionEntityDictionary.empty()
