"""Annotation pipeline: raw documents in, graph-ingestable records out.

Stages run in a fixed order per document: tokenization (always on),
clause extraction, NER, entity linking, coreference. Each is pluggable
via the config. A stage failure skips the document with a logged reason and
the stream continues.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .clauses import extract_clauses
from .coref import MentionDraft, apposition_chains, pronoun_mentions, resolve_pronouns
from .linking import make_linker
from .ner import recognize
from .tokenizer import split_sentences, tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnnotatorConfig:
    clause_extractor: str = "rules"  # rules | none
    ner: str = "caps"  # caps | strict | both | none
    ner_merge: str = "union"  # union | intersection
    linker: str = "slug"  # slug | dictionary | none
    linker_dict: str | None = None
    coref: bool = True

    def __post_init__(self) -> None:
        if self.clause_extractor not in ("rules", "none"):
            raise ValueError(f"unknown clause extractor {self.clause_extractor!r}")
        if self.ner not in ("caps", "strict", "both", "none"):
            raise ValueError(f"unknown ner component {self.ner!r}")
        if self.ner_merge not in ("union", "intersection"):
            raise ValueError(f"unknown merge mode {self.ner_merge!r}")


def annotate_document(doc_id: str, title: str, text: str, config: AnnotatorConfig) -> dict:
    linker = make_linker(config.linker, config.linker_dict)
    sentences = []
    all_mentions: list[MentionDraft] = []
    chains: list[list[str]] = []
    counters = {"m": 0}

    def next_mention_id() -> str:
        counters["m"] += 1
        return f"{doc_id}_m{counters['m']}"

    for si, sentence_text in enumerate(split_sentences(text), start=1):
        tokens = tokenize(sentence_text)
        if not tokens:
            continue
        sent_id = f"{doc_id}_s{si}"

        clause_rows = []
        if config.clause_extractor == "rules":
            for ci, clause in enumerate(extract_clauses(tokens), start=1):
                clause_rows.append(
                    {
                        "clause_id": f"{sent_id}_c{ci}",
                        "subject": list(clause.subject),
                        "predicate": list(clause.predicate),
                        "objects": [list(s) for s in clause.objects],
                        "adverbials": [list(s) for s in clause.adverbials],
                    }
                )

        sentence_mentions: list[MentionDraft] = []
        for entity in recognize(tokens, config.ner, config.ner_merge):
            surface = " ".join(tokens[entity.span[0] : entity.span[1]])
            sentence_mentions.append(
                MentionDraft(
                    next_mention_id(), si, entity.span, surface, entity.ner_type,
                    entity_id=linker.link(surface, entity.ner_type),
                )
            )
        if config.coref:
            taken = {m.span for m in sentence_mentions}
            sentence_mentions.extend(
                pronoun_mentions(tokens, si, taken, next_mention_id)
            )
            extra, new_chains = apposition_chains(
                tokens, si, sentence_mentions, next_mention_id
            )
            sentence_mentions.extend(extra)
            chains.extend(new_chains)

        sentence_mentions.sort(key=lambda m: m.span)
        sentences.append(
            {
                "sent_id": sent_id,
                "text": sentence_text,
                "tokens": tokens,
                "clauses": clause_rows,
                "mentions": [
                    {
                        "mention_id": m.mention_id,
                        "span": list(m.span),
                        "surface": m.surface,
                        "ner_type": m.ner_type,
                        **({"entity_id": m.entity_id} if m.entity_id else {}),
                    }
                    for m in sentence_mentions
                ],
            }
        )
        all_mentions.extend(sentence_mentions)

    if config.coref:
        chains.extend(resolve_pronouns(all_mentions))
        # pronoun entity ids settled during resolution: re-emit them
        by_id = {m.mention_id: m for m in all_mentions}
        for sentence in sentences:
            for row in sentence["mentions"]:
                draft = by_id[row["mention_id"]]
                if draft.entity_id and "entity_id" not in row:
                    row["entity_id"] = draft.entity_id

    return {
        "doc_id": doc_id,
        "title": title,
        "sentences": sentences,
        "coref_chains": chains,
    }


def annotate_corpus(
    raw_docs: Iterable[dict], config: AnnotatorConfig | None = None
) -> Iterator[dict]:
    """Yield one annotation record per raw {id, title, text} document;
    documents whose stages fail are skipped with a logged reason."""
    if config is None:
        config = AnnotatorConfig()
    for raw in raw_docs:
        doc_id = str(raw.get("id", "")).strip()
        if not doc_id:
            logger.warning("skipping document without id: %.60r", raw)
            continue
        try:
            yield annotate_document(
                doc_id, str(raw.get("title", "")), str(raw.get("text", "")), config
            )
        except Exception as exc:  # stage failure: skip, keep streaming
            logger.warning("skipping document %s: %s", doc_id, exc)


def read_raw_documents(path: str | Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc}") from exc


def write_records(records: Iterable[dict], path: str | Path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    return count
