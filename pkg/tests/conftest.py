from __future__ import annotations

import json
from pathlib import Path

import pytest

from graphqa.retrieval import build_index
from graphqa.similarity import load_dictionary, load_embeddings
from graphqa.store import ingest_corpus, read_annotation_file

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixture_records() -> list[dict]:
    return list(read_annotation_file(FIXTURES / "corpus.jsonl"))


@pytest.fixture(scope="session")
def fixture_graph(fixture_records):
    return ingest_corpus(fixture_records)


@pytest.fixture(scope="session")
def fixture_index(fixture_graph):
    return build_index(fixture_graph)


@pytest.fixture(scope="session")
def fixture_dictionary():
    return load_dictionary(FIXTURES / "dictionary.tsv")


@pytest.fixture(scope="session")
def fixture_embeddings():
    return load_embeddings(FIXTURES / "embeddings.txt")


@pytest.fixture(scope="session")
def fixture_benchmark() -> list[dict]:
    with open(FIXTURES / "benchmark.jsonl", encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


FLAGSHIP_QUESTION = (
    "Which British stage director is best known for his feature-film directing "
    "debut, which starred Kevin Spacey, Annette Bening, and Thora Birch?"
)


@pytest.fixture(scope="session")
def flagship_question() -> str:
    return FLAGSHIP_QUESTION
