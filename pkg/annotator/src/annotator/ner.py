"""Rule-based named-entity recognition over token lists.

Two recognizers are available so merge policies can be exercised: the
default capitalized-run recognizer and a stricter multi-token variant.
Configured with both, spans combine by union (recall) or intersection
(precision).
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import GIVEN_NAMES, LOC_CONTEXT_PREPS, ORG_SUFFIXES, STOPWORDS, verb_forms

Span = tuple[int, int]


@dataclass(frozen=True)
class EntitySpan:
    span: Span
    ner_type: str


def _is_word(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


def _capitalized(token: str) -> bool:
    return _is_word(token) and token[0].isupper()


def _capitalized_runs(tokens: list[str]) -> list[Span]:
    runs: list[Span] = []
    i = 0
    while i < len(tokens):
        if _capitalized(tokens[i]) and tokens[i].lower() not in STOPWORDS:
            j = i
            while (
                j < len(tokens)
                and _capitalized(tokens[j])
                and tokens[j].lower() not in STOPWORDS
            ):
                j += 1
            runs.append((i, j))
            i = j
        else:
            i += 1
    return runs


def _drop_sentence_initial_common(tokens: list[str], runs: list[Span]) -> list[Span]:
    """A single capitalized sentence-opener that is a common verb or an
    ordinary lowercase-known word is sentence case, not a name."""
    kept = []
    verbs = verb_forms()
    for start, end in runs:
        if start == 0 and end == 1:
            lower = tokens[0].lower()
            if lower in verbs or lower in STOPWORDS:
                continue
        kept.append((start, end))
    return kept


def _classify(tokens: list[str], span: Span) -> str:
    words = [tokens[i] for i in range(*span)]
    lowered = [w.lower() for w in words]
    if lowered[-1] in ORG_SUFFIXES:
        return "ORG"
    if lowered[0] in GIVEN_NAMES and len(words) >= 2:
        return "PER"
    if span[0] > 0 and tokens[span[0] - 1].lower() in LOC_CONTEXT_PREPS and len(words) == 1:
        return "LOC"
    if len(words) >= 2 and all(w[0].isupper() for w in words) and lowered[0] in GIVEN_NAMES:
        return "PER"
    return "MISC"


def recognize_caps(tokens: list[str]) -> list[EntitySpan]:
    """Maximal capitalized runs, minus lone sentence-case openers."""
    runs = _drop_sentence_initial_common(tokens, _capitalized_runs(tokens))
    return [EntitySpan(span, _classify(tokens, span)) for span in runs]


def recognize_strict(tokens: list[str]) -> list[EntitySpan]:
    """Only multi-token capitalized runs (high precision, lower recall)."""
    runs = [
        span
        for span in _drop_sentence_initial_common(tokens, _capitalized_runs(tokens))
        if span[1] - span[0] >= 2
    ]
    return [EntitySpan(span, _classify(tokens, span)) for span in runs]


RECOGNIZERS = {
    "caps": (recognize_caps,),
    "strict": (recognize_strict,),
    "both": (recognize_caps, recognize_strict),
}


def recognize(tokens: list[str], ner: str, merge: str) -> list[EntitySpan]:
    """Run the configured recognizer(s) and merge by span set."""
    if ner == "none":
        return []
    recognizers = RECOGNIZERS[ner]
    results = [{e.span: e for e in r(tokens)} for r in recognizers]
    if len(results) == 1:
        merged = results[0]
    elif merge == "union":
        merged = {}
        for result in results:
            for span, entity in result.items():
                merged.setdefault(span, entity)
    else:  # intersection
        common = set(results[0])
        for result in results[1:]:
            common &= set(result)
        merged = {span: results[0][span] for span in common}
    return [merged[span] for span in sorted(merged)]
