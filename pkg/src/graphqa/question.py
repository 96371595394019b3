"""Decompose a natural-language question into typed question terms.

A deterministic rule pipeline stands in for a full syntactic parse:
stopword removal, capitalized-sequence chunking for entity phrases, a verb
lexicon (plus -ed/-ing heuristics) for relation phrases, and a wh-word map
for the expected answer type.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .resources import default_stopwords, default_verb_lexicon

ANSWER_TYPE_HINTS = ("PERSON", "PLACE", "TEMPORAL", "OTHER")

_WH_HINTS = {
    "who": "PERSON",
    "whom": "PERSON",
    "where": "PLACE",
    "when": "TEMPORAL",
}
_WH_WORDS = {"who", "whom", "whose", "what", "which", "where", "when", "why", "how"}

# words keep internal hyphens/apostrophes; other punctuation stands alone
_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")


class QuestionParseError(ValueError):
    """The question has no content terms after normalization."""


@dataclass(frozen=True)
class QuestionTerms:
    entity_terms: tuple[str, ...]
    relation_terms: tuple[str, ...]
    answer_type_hint: str

    def all_terms(self) -> tuple[str, ...]:
        return self.entity_terms + self.relation_terms


def _is_word(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


def _inflected_verb(token: str) -> bool:
    lower = token.lower()
    return len(lower) > 4 and (lower.endswith("ed") or lower.endswith("ing"))


def _relation_anchor(run: list[str], verbs: frozenset[str]) -> int | None:
    """Index of the token a relation phrase starts at: the first -ed/-ing
    inflection if the run has one (so noun compounds before the verb stay
    out of the phrase), otherwise the first verb-lexicon token."""
    for idx, token in enumerate(run):
        if _inflected_verb(token):
            return idx
    for idx, token in enumerate(run):
        if token.lower() in verbs:
            return idx
    return None


def parse_question(
    question: str,
    stopwords: frozenset[str] | None = None,
    verbs: frozenset[str] | None = None,
) -> QuestionTerms:
    """Split a question into entity terms, relation terms and a type hint.

    Entity terms are maximal capitalized token sequences plus leftover
    noun-like content runs; relation terms are content runs anchored at a
    verb-lexicon token (the anchor and everything after it in the run).
    The hint depends only on the first wh-token.
    """
    if not question or not question.strip():
        raise QuestionParseError("empty question")
    if stopwords is None:
        stopwords = default_stopwords()
    if verbs is None:
        verbs = default_verb_lexicon()

    tokens = _TOKEN_RE.findall(question)
    if not tokens:
        raise QuestionParseError("no tokens after normalization")

    hint = "OTHER"
    for token in tokens:
        if token.lower() in _WH_WORDS:
            hint = _WH_HINTS.get(token.lower(), "OTHER")
            break

    # capitalized-sequence chunking; stopwords and punctuation never join
    in_chunk = [False] * len(tokens)
    entity_terms: list[str] = []

    def chunkable(idx: int) -> bool:
        token = tokens[idx]
        return _is_word(token) and token[0].isupper() and token.lower() not in stopwords

    i = 0
    while i < len(tokens):
        if chunkable(i):
            j = i
            while j < len(tokens) and chunkable(j):
                in_chunk[j] = True
                j += 1
            entity_terms.append(" ".join(tokens[i:j]))
            i = j
        else:
            i += 1

    # leftover content runs between stopwords/chunks/punctuation
    relation_terms: list[str] = []
    run: list[str] = []

    def close_run() -> None:
        if not run:
            return
        anchor = _relation_anchor(run, verbs)
        if anchor is None:
            entity_terms.append(" ".join(run))
        else:
            if anchor > 0:
                entity_terms.append(" ".join(run[:anchor]))
            relation_terms.append(" ".join(run[anchor:]))
        run.clear()

    for idx, token in enumerate(tokens):
        if in_chunk[idx] or not _is_word(token) or token.lower() in stopwords:
            close_run()
            continue
        run.append(token)
    close_run()

    if not entity_terms and not relation_terms:
        raise QuestionParseError(f"no content terms in question {question!r}")
    return QuestionTerms(
        entity_terms=tuple(dict.fromkeys(entity_terms)),
        relation_terms=tuple(dict.fromkeys(relation_terms)),
        answer_type_hint=hint,
    )
