"""Bundled lexical resources: stopword list and verb lexicon.

Both ship as plain-text files (one token per line) and can be overridden
with alternate files via the CLI.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources as importlib_resources
from pathlib import Path


def _load_wordlist_text(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def load_wordlist(path: str | Path) -> frozenset[str]:
    """One lowercase token per line; blank lines and #-comments ignored."""
    return _load_wordlist_text(Path(path).read_text(encoding="utf-8"))


def _bundled(name: str) -> frozenset[str]:
    text = (
        importlib_resources.files("graphqa.resources").joinpath(name).read_text("utf-8")
    )
    return _load_wordlist_text(text)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return _bundled("stopwords.txt")


@lru_cache(maxsize=1)
def default_verb_lexicon() -> frozenset[str]:
    return _bundled("verbs.txt")
