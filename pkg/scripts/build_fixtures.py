#!/usr/bin/env python3
"""Regenerate the movie fixture corpus under fixtures/.

The fixture is a 3-document corpus (two actors-and-directors biographies
plus a film article) with hand-assigned token spans, a small
mention-entity dictionary, a 16-dimensional embedding table whose cosines
are pinned to useful values, and a 3-question benchmark. The script
verifies the similarity geometry and the end-to-end answers before
writing anything.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

# ---------------------------------------------------------------------------
# Embedding table: 16 axes, sparse hand-placed vectors
# ---------------------------------------------------------------------------

DIM = 16


def _vec(**components: float) -> np.ndarray:
    v = np.zeros(DIM)
    for axis, value in components.items():
        v[int(axis[1:])] = value
    return v


VECTORS = {
    "starred": _vec(e0=1.0),
    "played": _vec(e0=0.65, e1=math.sqrt(1 - 0.65**2)),
    "written": _vec(e1=0.42 / math.sqrt(1 - 0.65**2)),  # e2 filled below
    "born": _vec(e3=1.0),  # e2 filled below
    "directed": _vec(e4=1.0),
    "directing": _vec(e4=0.92, e5=math.sqrt(1 - 0.92**2)),
    "debut": _vec(e4=0.35, e5=0.30, e6=math.sqrt(1 - 0.35**2 - 0.30**2)),
    "made": _vec(e4=0.20, e7=math.sqrt(1 - 0.20**2)),
    "feature": _vec(e8=1.0),
    "film": _vec(e8=0.30, e9=math.sqrt(1 - 0.30**2)),
    "american": _vec(e10=1.0),
    "british": _vec(e10=0.50, e11=math.sqrt(1 - 0.50**2)),
    "actress": _vec(e12=1.0),
    "director": _vec(e12=0.40, e13=math.sqrt(1 - 0.40**2)),
    "stage": _vec(e14=1.0),
}
# complete the chained unit vectors: written.played = 0.42, born.written = 0.30
_w1 = VECTORS["written"][1]
VECTORS["written"][2] = math.sqrt(1 - _w1**2)
_b2 = 0.30 / VECTORS["written"][2]
VECTORS["born"][2] = _b2
VECTORS["born"][3] = math.sqrt(1 - _b2**2)


def cos(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def mean_of(*names: str) -> np.ndarray:
    return np.mean([VECTORS[n] for n in names], axis=0)


def verify_geometry() -> None:
    v = VECTORS
    debut_phrase = mean_of("made", "feature", "film", "directing", "debut")
    debut_term = mean_of("directing", "debut")
    checks = {
        # predicate alignment sweep: 4 > 3 > 2 > 1 > 0 edges over the grid
        "starred/played in [0.6, 0.75)": 0.60 <= cos(v["starred"], v["played"]) < 0.75,
        "directed/debut-phrase in [0.5, 0.6)": 0.50 <= cos(v["directed"], debut_phrase) < 0.60,
        "played/written in [0.375, 0.5)": 0.375 <= cos(v["played"], v["written"]) < 0.50,
        "written/born in [0.25, 0.375)": 0.25 <= cos(v["written"], v["born"]) < 0.375,
        # cornerstone group membership at the 0.25 base threshold
        "debut-phrase matches 'directing debut'": cos(debut_phrase, debut_term) >= 0.25,
        "directed matches 'directing debut'": cos(v["directed"], debut_term) >= 0.25,
        "starred does not match 'directing debut'": cos(v["starred"], debut_term) < 0.25,
        "played does not match 'directing debut'": cos(v["played"], debut_term) < 0.25,
        "written does not match 'directing debut'": cos(v["written"], debut_term) < 0.25,
        "born does not match 'directing debut'": cos(v["born"], debut_term) < 0.25,
        "played matches 'starred'": cos(v["played"], v["starred"]) >= 0.25,
        "debut-phrase does not match 'starred'": cos(debut_phrase, v["starred"]) < 0.25,
        "directed does not match 'starred'": cos(v["directed"], v["starred"]) < 0.25,
        "written does not match 'directed'": cos(v["written"], v["directed"]) < 0.25,
        "played does not match 'directed'": cos(v["played"], v["directed"]) < 0.25,
        "debut-phrase matches 'directed'": cos(debut_phrase, v["directed"]) >= 0.25,
        "starred does not match 'born'": cos(v["starred"], v["born"]) < 0.25,
        "directed does not match 'born'": cos(v["directed"], v["born"]) < 0.25,
        "debut-phrase does not match 'born'": cos(debut_phrase, v["born"]) < 0.25,
        # one type-type alignment edge at the base threshold
        "type labels weakly similar": 0.25
        <= cos(mean_of("american", "actress"), mean_of("british", "stage", "director"))
        < 0.5,
        "film type is unrelated": cos(v["film"], mean_of("american", "actress")) < 0.25,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise SystemExit(f"geometry check failed: {failed}")


# ---------------------------------------------------------------------------
# Corpus: three interlinked movie documents
# ---------------------------------------------------------------------------


def sent(sent_id, text, tokens, clauses, mentions):
    squash = lambda s: "".join(s.split())
    assert squash("".join(tokens)) == squash(text), f"tokens mismatch in {sent_id}"
    for m in mentions:
        s, e = m["span"]
        joined = " ".join(tokens[s:e])
        assert joined == m["surface"], f"{sent_id}: {m['surface']!r} != {joined!r}"
    return {
        "sent_id": sent_id,
        "text": text,
        "tokens": tokens,
        "clauses": clauses,
        "mentions": mentions,
    }


def mention(mid, span, surface, ner="NONE", entity=None):
    record = {"mention_id": mid, "span": span, "surface": surface, "ner_type": ner}
    if entity:
        record["entity_id"] = entity
    return record


def clause(cid, subject, predicate, objects=(), adverbials=()):
    return {
        "clause_id": cid,
        "subject": subject,
        "predicate": predicate,
        "objects": list(objects),
        "adverbials": list(adverbials),
    }


DOCS = [
    {
        "doc_id": "d1",
        "title": "Thora Birch",
        "url": "https://en.wikipedia.org/wiki/Thora_Birch",
        "sentences": [
            sent(
                "d1s1",
                "Thora Birch is an American actress.",
                ["Thora", "Birch", "is", "an", "American", "actress", "."],
                [clause("d1s1c1", [0, 2], [2, 3], objects=[[3, 6]])],
                [mention("d1m1", [0, 2], "Thora Birch", "PER", "Thora_Birch")],
            ),
            sent(
                "d1s2",
                "She later played the role of Jane Burnham in the acclaimed film American Beauty.",
                ["She", "later", "played", "the", "role", "of", "Jane", "Burnham",
                 "in", "the", "acclaimed", "film", "American", "Beauty", "."],
                [clause("d1s2c1", [0, 1], [2, 3], objects=[[3, 8]], adverbials=[[8, 14]])],
                [
                    mention("d1m2", [0, 1], "She", "NONE", "Thora_Birch"),
                    mention("d1m3", [6, 8], "Jane Burnham", "PER", "Jane_Burnham"),
                    mention("d1m4", [12, 14], "American Beauty", "MISC", "American_Beauty"),
                ],
            ),
        ],
        "coref_chains": [["d1m2", "d1m1"]],
    },
    {
        "doc_id": "d2",
        "title": "Sam Mendes",
        "url": "https://en.wikipedia.org/wiki/Sam_Mendes",
        "sentences": [
            sent(
                "d2s1",
                "Sam Mendes is a British stage director.",
                ["Sam", "Mendes", "is", "a", "British", "stage", "director", "."],
                [clause("d2s1c1", [0, 2], [2, 3], objects=[[3, 7]])],
                [mention("d2m1", [0, 2], "Sam Mendes", "PER", "Sam_Mendes")],
            ),
            sent(
                "d2s2",
                "He made his feature-film directing debut with the acclaimed drama American Beauty.",
                ["He", "made", "his", "feature-film", "directing", "debut", "with",
                 "the", "acclaimed", "drama", "American", "Beauty", "."],
                [clause("d2s2c1", [0, 1], [1, 6], adverbials=[[6, 12]])],
                [
                    mention("d2m2", [0, 1], "He", "NONE", "Sam_Mendes"),
                    mention("d2m3", [9, 10], "drama", "NONE", "American_Beauty"),
                    mention("d2m4", [10, 12], "American Beauty", "MISC", "American_Beauty"),
                ],
            ),
            sent(
                "d2s3",
                "Samuel Alexander Mendes was born in the town of Reading in 1965.",
                ["Samuel", "Alexander", "Mendes", "was", "born", "in", "the", "town",
                 "of", "Reading", "in", "1965", "."],
                [clause("d2s3c1", [0, 3], [3, 5], objects=[[5, 10]], adverbials=[[10, 12]])],
                [
                    mention("d2m5", [0, 3], "Samuel Alexander Mendes", "PER", "Sam_Mendes"),
                    mention("d2m6", [9, 10], "Reading", "LOC", "Reading"),
                ],
            ),
        ],
        "coref_chains": [["d2m2", "d2m1"], ["d2m3", "d2m4"]],
    },
    {
        "doc_id": "d3",
        "title": "American Beauty",
        "url": "https://en.wikipedia.org/wiki/American_Beauty_(1999_film)",
        "sentences": [
            sent(
                "d3s1",
                "American Beauty is a 1999 film written by Alan Ball and directed by Sam Mendes.",
                ["American", "Beauty", "is", "a", "1999", "film", "written", "by",
                 "Alan", "Ball", "and", "directed", "by", "Sam", "Mendes", "."],
                [
                    clause("d3s1c1", [0, 2], [2, 3], objects=[[3, 6]]),
                    clause("d3s1c2", [0, 2], [6, 8], objects=[[8, 10]]),
                    clause("d3s1c3", [0, 2], [11, 13], objects=[[13, 15]]),
                ],
                [
                    mention("d3m1", [0, 2], "American Beauty", "MISC", "American_Beauty"),
                    mention("d3m2", [8, 10], "Alan Ball", "PER", "Alan_Ball"),
                    mention("d3m3", [13, 15], "Sam Mendes", "PER", "Sam_Mendes"),
                ],
            ),
            sent(
                "d3s2",
                "American Beauty prominently starred the actors Kevin Spacey, Annette Bening, and Thora Birch.",
                ["American", "Beauty", "prominently", "starred", "the", "actors",
                 "Kevin", "Spacey", ",", "Annette", "Bening", ",", "and", "Thora",
                 "Birch", "."],
                [clause("d3s2c1", [0, 2], [3, 4], objects=[[4, 15]])],
                [
                    mention("d3m4", [0, 2], "American Beauty", "MISC", "American_Beauty"),
                    mention("d3m5", [6, 8], "Kevin Spacey", "PER", "Kevin_Spacey"),
                    mention("d3m6", [9, 11], "Annette Bening", "PER", "Annette_Bening"),
                    mention("d3m7", [13, 15], "Thora Birch", "PER", "Thora_Birch"),
                ],
            ),
        ],
        "coref_chains": [],
    },
]

DICTIONARY = [
    ("sam mendes", ["Sam_Mendes"]),
    ("samuel alexander mendes", ["Sam_Mendes"]),
    ("american beauty", ["American_Beauty"]),
    ("thora birch", ["Thora_Birch"]),
    ("kevin spacey", ["Kevin_Spacey"]),
    ("annette bening", ["Annette_Bening"]),
    ("jane burnham", ["Jane_Burnham"]),
    ("alan ball", ["Alan_Ball"]),
    ("reading", ["Reading"]),
    ("feature film", ["American_Beauty", "Titanic", "Avatar"]),
    ("stage director", ["Sam_Mendes", "Trevor_Nunn", "Peter_Brook",
                        "Katie_Mitchell", "Declan_Donnellan"]),
]

BENCHMARK = [
    {
        "question": (
            "Which British stage director is best known for his feature-film "
            "directing debut, which starred Kevin Spacey, Annette Bening, and "
            "Thora Birch?"
        ),
        "gold_aliases": ["Sam Mendes", "Samuel Alexander Mendes"],
        "gold_kb_id": "Sam_Mendes",
        "category": "People",
    },
    {
        "question": "Who directed American Beauty?",
        "gold_aliases": ["Sam Mendes"],
        "gold_kb_id": "Sam_Mendes",
        "category": "People",
    },
    {
        "question": "Who was born in the town of Reading?",
        "gold_aliases": ["Sam Mendes", "Samuel Alexander Mendes"],
        "gold_kb_id": "Sam_Mendes",
        "category": "People",
    },
]


def write_fixtures() -> None:
    FIXTURES.mkdir(exist_ok=True)
    with open(FIXTURES / "corpus.jsonl", "w", encoding="utf-8") as handle:
        for doc in DOCS:
            handle.write(json.dumps(doc, ensure_ascii=False) + "\n")
    with open(FIXTURES / "dictionary.tsv", "w", encoding="utf-8") as handle:
        for surface, entities in DICTIONARY:
            handle.write(f"{surface}\t{','.join(entities)}\n")
    with open(FIXTURES / "embeddings.txt", "w", encoding="utf-8") as handle:
        handle.write(f"{len(VECTORS)} {DIM}\n")
        for token in sorted(VECTORS):
            values = " ".join(f"{x:.6f}" for x in VECTORS[token])
            handle.write(f"{token} {values}\n")
    with open(FIXTURES / "benchmark.jsonl", "w", encoding="utf-8") as handle:
        for item in BENCHMARK:
            handle.write(json.dumps(item, ensure_ascii=False) + "\n")


def verify_pipeline() -> None:
    sys.path.insert(0, str(ROOT / "src"))
    from graphqa.answering import answer_question
    from graphqa.retrieval import build_index
    from graphqa.similarity import load_dictionary, load_embeddings
    from graphqa.store import ingest_corpus, read_annotation_file

    graph = ingest_corpus(read_annotation_file(FIXTURES / "corpus.jsonl"))
    index = build_index(graph)
    dictionary = load_dictionary(FIXTURES / "dictionary.tsv")
    embeddings = load_embeddings(FIXTURES / "embeddings.txt")
    for item in BENCHMARK:
        result = answer_question(item["question"], graph, index, dictionary, embeddings)
        top = result.answers[0].label if result.answers else f"<{result.reason}>"
        status = "OK " if top in item["gold_aliases"] else "FAIL"
        print(f"{status} {item['question'][:60]:<62} -> {top}")


if __name__ == "__main__":
    verify_geometry()
    write_fixtures()
    verify_pipeline()
