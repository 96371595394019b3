"""Shared wordlists for the rule components."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources as importlib_resources

STOPWORDS = frozenset(
    """a an the and or but if then than this that these those of in on at by for
    with from to into over under about as is are was were be been being has have
    had do does did will would shall should can could may might must not no nor
    its his her their our your my he she it they we you i him them us who whom
    whose which what when where why how such so very most more also once
    after before during while both each few other some any all own same s t just
    don now""".split()
)

PRONOUNS_PERSON = frozenset({"he", "she", "him", "her", "his", "hers"})
PRONOUNS_THING = frozenset({"it", "its"})

PREPOSITIONS = frozenset(
    "in at on during near after before from since until toward towards within across".split()
)

AUXILIARIES = frozenset(
    "is are was were be been being has have had will would can could may might must does do did".split()
)

ORG_SUFFIXES = frozenset(
    "corporation company studios studio pictures inc ltd fund institute university college council committee orchestra".split()
)

LOC_CONTEXT_PREPS = frozenset({"in", "at", "near", "from"})

GIVEN_NAMES = frozenset(
    """alice bob clara david elena felix grace henry iris jack karen liam maya
    noah olive peter quinn rosa sara tomas sam samuel thora kevin annette alan
    jane maria martin john mary james anna paul laura mark sofia""".split()
)


@lru_cache(maxsize=1)
def verb_forms() -> frozenset[str]:
    text = (
        importlib_resources.files("annotator.resources")
        .joinpath("verbs.txt")
        .read_text("utf-8")
    )
    return frozenset(
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )
