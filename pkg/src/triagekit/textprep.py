"""Text preprocessing for issue reports.

The pipeline is deliberately rigid so that the same raw text always yields
the same tokens: clean summary and description separately, join, lowercase,
split on whitespace, drop short tokens, drop stopwords, stem.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional

from .lovins import lovins_stem

_TAG_RE = re.compile(r"<[^>]*>")
_HEX_RE = re.compile(r"\b0[xX][0-9a-fA-F]+\b")
_NUM_RE = re.compile(r"\b\d+(?:\.\d+)?\b")
_SPACE_RE = re.compile(r"\s+")

MIN_TOKEN_LEN = 3


@dataclass(frozen=True)
class StopwordList:
    """Set of lowercase words removed before stemming."""

    words: frozenset[str]

    def __post_init__(self):
        if not self.words:
            raise ValueError("stopword list is empty")
        bad = [w for w in self.words if w != w.lower()]
        if bad:
            raise ValueError(f"stopword entries must be lowercase: {bad[:5]}")

    def __contains__(self, word: str) -> bool:
        return word in self.words

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "StopwordList":
        words = set()
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.add(line.lower())
        return cls(frozenset(words))

    @classmethod
    def from_file(cls, path) -> "StopwordList":
        with open(path, encoding="utf-8", errors="replace") as fh:
            return cls.from_lines(fh)


def rainbow_stopwords() -> StopwordList:
    """The bundled Rainbow-project stopword snapshot."""
    text = (
        resources.files("triagekit.data")
        .joinpath("stopwords_rainbow.txt")
        .read_text(encoding="utf-8")
    )
    return StopwordList.from_lines(text.splitlines())


@dataclass(frozen=True)
class TokenizedDocument:
    issue_key: str
    tokens: tuple[str, ...]
    label: Optional[str] = None


def _strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def clean(text: str) -> str:
    """Reduce text to letters separated by single spaces.

    Removes markup tags, diacritics, hexadecimal then decimal number
    literals, and every remaining non-letter character; collapses runs of
    whitespace. Case is preserved.
    """
    text = _TAG_RE.sub(" ", text)
    text = _strip_diacritics(text)
    text = _HEX_RE.sub(" ", text)
    text = _NUM_RE.sub(" ", text)
    text = "".join(ch if ch.isalpha() else " " for ch in text)
    return _SPACE_RE.sub(" ", text).strip()


def preprocess_text(
    summary: str,
    description: str,
    stopwords: StopwordList,
    stemmer=lovins_stem,
) -> tuple[str, ...]:
    """clean -> join -> lowercase -> tokenize -> length filter -> stopword
    filter -> stem. Token order follows the original text."""
    joined = (clean(summary) + " " + clean(description)).lower()
    tokens = []
    for tok in joined.split():
        if len(tok) < MIN_TOKEN_LEN:
            continue
        if tok in stopwords:
            continue
        tokens.append(stemmer(tok))
    return tuple(tokens)


def preprocess(issue, stopwords: StopwordList, stemmer=lovins_stem) -> TokenizedDocument:
    """Turn one issue record into a TokenizedDocument."""
    return TokenizedDocument(
        issue_key=issue.key,
        tokens=preprocess_text(issue.summary, issue.description, stopwords, stemmer),
        label=issue.subteam,
    )
