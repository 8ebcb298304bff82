from __future__ import annotations

import re
import unicodedata

SUFFIXES = frozenset({"jr", "sr", "ii", "iii", "iv"})
_APOSTROPHE = re.compile(r"['\u2019]")
_PUNCT = re.compile(r"[^\w\s]")
_SPACE = re.compile(r"\s+")


def _tokens(name: str) -> list[str]:
    decomposed = unicodedata.normalize("NFKD", name)
    ascii_ish = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    # O'Neil -> ONeil, while hyphens and dots separate tokens
    cleaned = _PUNCT.sub(" ", _APOSTROPHE.sub("", ascii_ish)).replace("_", " ")
    return [t for t in _SPACE.split(cleaned.strip()) if t]


def _core_tokens(name: str) -> list[str]:
    """Name tokens without generational suffixes or single-letter initials."""
    toks = _tokens(name)
    core = [t for t in toks if t.casefold() not in SUFFIXES and len(t) > 1]
    return core or [t for t in toks if t.casefold() not in SUFFIXES]


def linkage_key(full_name: str) -> str:
    """Case-folded, punctuation- and suffix-stripped key used to link sources.

    >>> linkage_key("John A. Smith Jr.") == linkage_key("john smith")
    True
    """
    return " ".join(t.casefold() for t in _core_tokens(full_name))


def first_last(full_name: str) -> str:
    """First and last name as they would be spoken consecutively on air."""
    core = _core_tokens(full_name)
    if not core:
        return ""
    if len(core) == 1:
        return core[0]
    return f"{core[0]} {core[-1]}"
