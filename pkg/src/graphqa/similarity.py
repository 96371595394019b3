"""Similarity kernels and the lexical resources they run on.

Covers the two similarity families used throughout the engine: Jaccard
(over entity sets from the mention-entity dictionary, with a token-set
fallback for out-of-dictionary strings) and cosine over word embeddings
(with mean-of-vectors phrase composition).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


class ResourceFormatError(ValueError):
    """A dictionary or embedding file does not match its declared format."""


def normalize_text(text: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    return " ".join(_NON_ALNUM.sub(" ", text.lower()).split())


def token_set(text: str) -> frozenset[str]:
    """Normalized tokens of ``text`` as a set."""
    normalized = normalize_text(text)
    return frozenset(normalized.split()) if normalized else frozenset()


def jaccard_sets(a: frozenset | set, b: frozenset | set) -> float:
    """|a ∩ b| / |a ∪ b|; two empty sets score 0 so that empty strings
    never count as similar."""
    if not a and not b:
        return 0.0
    return len(set(a) & set(b)) / len(set(a) | set(b))


@dataclass(frozen=True)
class MentionEntityDictionary:
    """Surface form (normalized) -> set of background-KB entity ids."""

    entries: dict[str, frozenset[str]]

    def __post_init__(self) -> None:
        for surface, entities in self.entries.items():
            if surface != normalize_text(surface):
                raise ValueError(f"dictionary key not normalized: {surface!r}")
            if not entities:
                raise ValueError(f"empty entity set for surface {surface!r}")

    def lookup(self, surface: str) -> frozenset[str] | None:
        return self.entries.get(normalize_text(surface))

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def empty(cls) -> "MentionEntityDictionary":
        return cls(entries={})


def load_dictionary(path: str | Path) -> MentionEntityDictionary:
    """Load a tab-separated ``surface<TAB>entity_id[,entity_id...]`` file.

    Duplicate surfaces are merged by set union.
    """
    entries: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[1].strip():
                raise ResourceFormatError(
                    f"{path}:{lineno}: expected 'surface<TAB>entity,...', got {line!r}"
                )
            surface = normalize_text(parts[0])
            if not surface:
                raise ResourceFormatError(f"{path}:{lineno}: empty surface form")
            ids = {e.strip() for e in parts[1].split(",") if e.strip()}
            if not ids:
                raise ResourceFormatError(f"{path}:{lineno}: empty entity list")
            entries.setdefault(surface, set()).update(ids)
    return MentionEntityDictionary(
        entries={k: frozenset(v) for k, v in entries.items()}
    )


@dataclass(frozen=True)
class EmbeddingTable:
    """Vocabulary term -> dense vector, all of one dimension."""

    vectors: dict[str, np.ndarray]
    dim: int

    def get(self, term: str) -> np.ndarray | None:
        return self.vectors.get(term)

    def __len__(self) -> int:
        return len(self.vectors)

    @classmethod
    def empty(cls, dim: int = 1) -> "EmbeddingTable":
        return cls(vectors={}, dim=dim)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a textual word2vec file: header ``V D``, then ``token v1 .. vD``."""
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ResourceFormatError(f"{path}:1: expected header 'V D'")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ResourceFormatError(f"{path}:1: non-integer header") from exc
        if dim < 1:
            raise ResourceFormatError(f"{path}:1: dimension must be >= 1")
        vectors: dict[str, np.ndarray] = {}
        for lineno, raw in enumerate(handle, start=2):
            if not raw.strip():
                continue
            parts = raw.split()
            if len(parts) != dim + 1:
                raise ResourceFormatError(
                    f"{path}:{lineno}: expected {dim} floats, got {len(parts) - 1}"
                )
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ResourceFormatError(f"{path}:{lineno}: non-numeric value") from exc
            if not np.all(np.isfinite(vec)):
                raise ResourceFormatError(f"{path}:{lineno}: NaN/inf component")
            vectors[parts[0]] = vec
    if len(vectors) != count:
        raise ResourceFormatError(
            f"{path}: header declares {count} rows, found {len(vectors)}"
        )
    return EmbeddingTable(vectors=vectors, dim=dim)


def phrase_vector(phrase: str, table: EmbeddingTable) -> np.ndarray | None:
    """Mean of the vectors of in-vocabulary tokens; None if none are known."""
    found = [table.get(tok) for tok in normalize_text(phrase).split()]
    found = [v for v in found if v is not None]
    if not found:
        return None
    return np.mean(found, axis=0)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """dot(u, v) / (|u| |v|). Raises on dimension mismatch or zero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for zero vectors")
    return float(np.dot(u, v) / (nu * nv))


def clamped_cosine(u: np.ndarray | None, v: np.ndarray | None) -> float:
    """Cosine clamped to [0, 1] for use as a weight; 0 when a vector is absent."""
    if u is None or v is None:
        return 0.0
    return min(1.0, max(0.0, cosine(u, v)))


def mention_similarity(
    term: str, mention_surface: str, dictionary: MentionEntityDictionary
) -> float:
    """Similarity between a question term and a mention surface.

    When both strings are dictionary keys the score is the Jaccard of their
    candidate-entity sets; otherwise it falls back to Jaccard over the
    normalized token sets of the strings themselves.
    """
    term_entities = dictionary.lookup(term)
    surface_entities = dictionary.lookup(mention_surface)
    if term_entities is not None and surface_entities is not None:
        return jaccard_sets(term_entities, surface_entities)
    return jaccard_sets(token_set(term), token_set(mention_surface))
