"""Entity linkers: map mention surfaces to background-KB identifiers.

The dictionary linker resolves a surface only when its candidate set is a
single entity (confident links only); the slug linker deterministically
mints an identifier from the surface and is meant for self-contained
corpora without an external KB.
"""

from __future__ import annotations

import re
from pathlib import Path

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def normalize(surface: str) -> str:
    return " ".join(_NON_ALNUM.sub(" ", surface.lower()).split())


class DictionaryLinker:
    """surface -> entity id, only for unambiguous dictionary rows."""

    def __init__(self, path: str | Path) -> None:
        self.entries: dict[str, set[str]] = {}
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                surface, _, ids = line.partition("\t")
                candidates = {e.strip() for e in ids.split(",") if e.strip()}
                if candidates:
                    self.entries.setdefault(normalize(surface), set()).update(candidates)

    def link(self, surface: str, ner_type: str) -> str | None:
        candidates = self.entries.get(normalize(surface))
        if candidates is not None and len(candidates) == 1:
            return next(iter(candidates))
        return None


class SlugLinker:
    """Mint a stable identifier from the surface itself (PER/ORG/LOC/MISC
    mentions only, so stray common nouns stay unlinked)."""

    def link(self, surface: str, ner_type: str) -> str | None:
        if ner_type == "NONE":
            return None
        normalized = normalize(surface)
        if not normalized:
            return None
        return "_".join(word.capitalize() for word in normalized.split())


class NullLinker:
    def link(self, surface: str, ner_type: str) -> str | None:
        return None


def make_linker(name: str, dict_path: str | None):
    if name == "dictionary":
        if not dict_path:
            raise ValueError("the dictionary linker needs --linker-dict")
        return DictionaryLinker(dict_path)
    if name == "slug":
        return SlugLinker()
    if name == "none":
        return NullLinker()
    raise ValueError(f"unknown linker {name!r}")
