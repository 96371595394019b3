"""Deterministic sentence splitting and word tokenization."""

from __future__ import annotations

import re

# words keep internal hyphens/apostrophes; any other mark is its own token
TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")

_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+(?=[\"'(]?[A-Z0-9])")

_ABBREVIATIONS = {"mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "no.", "vs."}


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation followed by an uppercase start, with a
    small abbreviation guard."""
    pieces = _SENTENCE_BREAK.split(text.strip())
    sentences: list[str] = []
    for piece in pieces:
        piece = piece.strip()
        if not piece:
            continue
        if sentences and sentences[-1].split()[-1].lower() in _ABBREVIATIONS:
            sentences[-1] = f"{sentences[-1]} {piece}"
        else:
            sentences.append(piece)
    return sentences


def tokenize(sentence: str) -> list[str]:
    return TOKEN_RE.findall(sentence)
