"""Query tokenization and stopword handling shared across the pipeline."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

__all__ = ["tokenize", "content_tokens", "query_terms", "load_stopwords", "default_stopwords"]

# Boolean operators users type between query terms; dropped everywhere.
OPERATORS = {"and", "or"}


def tokenize(text: str) -> list[str]:
    """Lowercased whitespace tokens."""
    return text.casefold().split()


def content_tokens(query: str) -> list[str]:
    """Query tokens with AND/OR operators removed, original case kept."""
    return [tok for tok in query.split() if tok.casefold() not in OPERATORS]


def query_terms(query: str, stopwords: frozenset[str]) -> list[str]:
    """Lowercased query tokens minus operators and stopwords."""
    return [tok for tok in tokenize(query) if tok not in OPERATORS and tok not in stopwords]


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one word per line, '#' comments allowed."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().casefold()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The bundled classic IR stopword list (about 570 words)."""
    text = resources.files("wikiqe.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(
        word.strip().casefold()
        for word in text.splitlines()
        if word.strip() and not word.startswith("#")
    )
