"""Coreference rules: pronoun antecedents and apposition pairs.

Pronouns resolve to the nearest preceding mention of a compatible kind
(he/she to people, it to non-people). Appositions of the form
"the <common noun> <Name>" link the common noun to the name as a
two-member chain, the same mechanism the graph uses for implicit links.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import PRONOUNS_PERSON, PRONOUNS_THING, STOPWORDS, verb_forms


@dataclass
class MentionDraft:
    """A mention while the document record is being assembled."""

    mention_id: str
    sentence_index: int
    span: tuple[int, int]
    surface: str
    ner_type: str
    entity_id: str | None = None


def pronoun_mentions(
    tokens: list[str], sentence_index: int, taken: set[tuple[int, int]], next_id
) -> list[MentionDraft]:
    """Emit pronoun tokens as NONE-typed mentions so chains can anchor."""
    drafts = []
    for i, token in enumerate(tokens):
        lower = token.lower()
        if lower in PRONOUNS_PERSON or lower in PRONOUNS_THING:
            if (i, i + 1) not in taken:
                drafts.append(
                    MentionDraft(next_id(), sentence_index, (i, i + 1), token, "NONE")
                )
    return drafts


def resolve_pronouns(mentions: list[MentionDraft]) -> list[list[str]]:
    """Chain each pronoun with the nearest preceding compatible mention."""
    chains: list[list[str]] = []
    ordered = sorted(mentions, key=lambda m: (m.sentence_index, m.span))
    for i, mention in enumerate(ordered):
        lower = mention.surface.lower()
        if lower in PRONOUNS_PERSON:
            wanted = {"PER"}
        elif lower in PRONOUNS_THING:
            wanted = {"ORG", "LOC", "MISC"}
        else:
            continue
        for antecedent in reversed(ordered[:i]):
            if antecedent.ner_type in wanted:
                chains.append([mention.mention_id, antecedent.mention_id])
                if mention.entity_id is None:
                    mention.entity_id = antecedent.entity_id
                break
    return chains


def apposition_chains(
    tokens: list[str],
    sentence_index: int,
    mentions: list[MentionDraft],
    next_id,
) -> tuple[list[MentionDraft], list[list[str]]]:
    """Detect "the <common noun> <Name>": the noun right before a named
    mention, preceded by a determiner chain, refers to the same thing."""
    verbs = verb_forms()
    by_start = {m.span[0]: m for m in mentions if m.sentence_index == sentence_index}
    new_mentions: list[MentionDraft] = []
    chains: list[list[str]] = []
    for start, name_mention in sorted(by_start.items()):
        head = start - 1
        if head < 1:
            continue
        head_token = tokens[head].lower()
        if (
            tokens[head].islower()
            and head_token not in STOPWORDS
            and head_token not in verbs
            and any(tokens[j].lower() in ("the", "a", "an") for j in range(max(0, head - 3), head))
            and name_mention.ner_type in ("ORG", "LOC", "MISC")
        ):
            draft = MentionDraft(
                next_id(), sentence_index, (head, head + 1), tokens[head], "NONE",
                entity_id=name_mention.entity_id,
            )
            new_mentions.append(draft)
            chains.append([draft.mention_id, name_mention.mention_id])
    return new_mentions, chains
