"""Rule-based open clause extraction: subject | predicate | objects/adverbials.

A predicate is a contiguous verb group (auxiliaries + lexicon verbs,
optionally absorbing the agentive "by" after a participle). The sentence
prefix before the first verb group is the shared subject; each verb group
claims the tokens after it, up to the next verb group or a clause
boundary, as one object or adverbial span.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import AUXILIARIES, PREPOSITIONS, verb_forms

Span = tuple[int, int]


@dataclass(frozen=True)
class Clause:
    subject: Span
    predicate: Span
    objects: tuple[Span, ...]
    adverbials: tuple[Span, ...]


def _is_word(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


def _verb_groups(tokens: list[str]) -> list[Span]:
    verbs = verb_forms()
    groups: list[Span] = []
    i = 0
    while i < len(tokens):
        lower = tokens[i].lower()
        if lower in AUXILIARIES or lower in verbs:
            j = i
            while j < len(tokens) and (
                tokens[j].lower() in AUXILIARIES or tokens[j].lower() in verbs
            ):
                j += 1
            # absorb the agent marker of passives: "written by", "directed by"
            if j < len(tokens) and tokens[j].lower() == "by":
                j += 1
            groups.append((i, j))
            i = j
        else:
            i += 1
    return groups


def _trim(tokens: list[str], start: int, end: int) -> Span | None:
    while start < end and not _is_word(tokens[start]):
        start += 1
    while end > start and not _is_word(tokens[end - 1]):
        end -= 1
    if start >= end:
        return None
    return (start, end)


def extract_clauses(tokens: list[str]) -> list[Clause]:
    groups = _verb_groups(tokens)
    if not groups:
        return []
    subject = _trim(tokens, 0, groups[0][0])
    if subject is None:
        return []
    clauses: list[Clause] = []
    for gi, (pred_start, pred_end) in enumerate(groups):
        boundary = groups[gi + 1][0] if gi + 1 < len(groups) else len(tokens)
        # leave the conjunction/comma before the next verb group outside
        while boundary > pred_end and (
            not _is_word(tokens[boundary - 1]) or tokens[boundary - 1].lower() == "and"
        ):
            boundary -= 1
        remainder = _trim(tokens, pred_end, boundary)
        objects: tuple[Span, ...] = ()
        adverbials: tuple[Span, ...] = ()
        if remainder is not None:
            if tokens[remainder[0]].lower() in PREPOSITIONS:
                adverbials = (remainder,)
            else:
                objects = (remainder,)
        clauses.append(
            Clause(
                subject=subject,
                predicate=(pred_start, pred_end),
                objects=objects,
                adverbials=adverbials,
            )
        )
    return clauses
