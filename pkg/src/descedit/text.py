"""Tokenization, normalization, and punctuation plumbing shared by the pipeline.

Everything downstream (matching, masking, editing, metrics) runs on the same
token scheme: whitespace split with punctuation broken out into standalone
tokens. Intra-word hyphens/apostrophes and decimal points stay attached so
"green-apple" and "1.5" survive as single tokens, and the control markers
("[FILL]", "[SEP]", "[ADD]", "[DEL]") are never split.
"""
from __future__ import annotations

import re
import string
from importlib import resources
from typing import Iterable, Sequence

FILL_TOKEN = "[FILL]"
SEP_TOKEN = "[SEP]"
ADD_TOKEN = "[ADD]"
DEL_TOKEN = "[DEL]"

TERMINALS = frozenset({".", "!", "?"})
SEPARATORS = frozenset({",", ";", ":"})

_TOKEN_RE = re.compile(
    r"\[(?:FILL|SEP|ADD|DEL)\]"  # control markers stay whole
    r"|\d+(?:\.\d+)+"            # decimals: 1.5, 2.4.1
    r"|\w+(?:['’-]\w+)*"    # words incl. green-apple, don't
    r"|[^\w\s]"                  # any other punctuation, one char per token
)

_NO_SPACE_BEFORE = frozenset({",", ".", ";", ":", "!", "?", ")", "]", "}", "%"})
_NO_SPACE_AFTER = frozenset({"(", "[", "{"})

_STRIP_CHARS = string.punctuation + string.whitespace


def tokenize(text: str) -> list[str]:
    """Split into word/punctuation tokens; never returns whitespace tokens."""
    return _TOKEN_RE.findall(text)


def normalize(text: str) -> str:
    """Lowercase and collapse whitespace runs to single spaces (stripped)."""
    return " ".join(text.lower().split())


def is_punct(token: str) -> bool:
    """True for tokens carrying no letters or digits."""
    return not any(ch.isalnum() for ch in token)


def strip_outer_punct(text: str) -> str:
    """Drop leading/trailing punctuation and whitespace, keep the interior."""
    return text.strip(_STRIP_CHARS)


def detokenize(tokens: Iterable[str]) -> str:
    """Join tokens back to a readable string (no space before , . ; : ! ?)."""
    parts: list[str] = []
    prev = ""
    for tok in tokens:
        if parts and tok not in _NO_SPACE_BEFORE and prev not in _NO_SPACE_AFTER:
            parts.append(" ")
        parts.append(tok)
        prev = tok
    return "".join(parts)


def sentence_token_ranges(text: str) -> tuple[list[str], list[tuple[int, int]]]:
    """Tokenize and return (tokens, sentence ranges).

    Sentence boundaries are runs of ``. ! ?`` (kept with the sentence they
    close) and newlines. The ranges partition the token list exactly.
    """
    tokens: list[str] = []
    ranges: list[tuple[int, int]] = []
    for line in text.split("\n"):
        line_tokens = tokenize(line)
        if not line_tokens:
            continue
        base = len(tokens)
        tokens.extend(line_tokens)
        i = base
        n = len(tokens)
        while i < n:
            j = i
            while j < n and tokens[j] not in TERMINALS:
                j += 1
            while j < n and tokens[j] in TERMINALS:
                j += 1
            ranges.append((i, j))
            i = j
    return tokens, ranges


def delete_token_span(tokens: Sequence[str], start: int, end: int) -> list[str]:
    """Delete tokens[start:end] and smooth the junction.

    At most one punctuation token is dropped on each side: a separator left
    dangling against other punctuation (or the end of text), and a separator
    stranded at a sentence start.
    """
    left = list(tokens[:start])
    right = list(tokens[end:])
    if left and left[-1] in SEPARATORS and (not right or is_punct(right[0])):
        left.pop()
    if right and right[0] in SEPARATORS and (not left or left[-1] in TERMINALS):
        right.pop(0)
    return left + right


def splice_tokens(
    tokens: Sequence[str], start: int, end: int, replacement: Sequence[str]
) -> list[str]:
    """Replace tokens[start:end] with the replacement tokens.

    An empty replacement routes through ``delete_token_span`` so the seam is
    smoothed; a non-empty replacement is inserted verbatim.
    """
    if not replacement:
        return delete_token_span(tokens, start, end)
    return list(tokens[:start]) + list(replacement) + list(tokens[end:])


def has_content(tokens: Iterable[str]) -> bool:
    """True when at least one token carries letters or digits."""
    return any(not is_punct(t) for t in tokens)


def load_lexicon(path) -> frozenset[str]:
    """Read a one-token-per-line UTF-8 lexicon, normalized and deduplicated."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(normalize(line) for line in fh if line.strip())


def load_templates(path) -> dict[str, str]:
    """Read a tab-separated category -> phrase table (UTF-8, one per line)."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            category, _, phrase = line.partition("\t")
            table[normalize(category)] = phrase.strip()
    return table


def _data_path(name: str):
    return resources.files("descedit").joinpath("data").joinpath(name)


def default_stopwords() -> frozenset[str]:
    """The stopword lexicon shipped with the package."""
    with resources.as_file(_data_path("stopwords.txt")) as path:
        return load_lexicon(path)


def default_adjectives() -> frozenset[str]:
    """The adjective lexicon shipped with the package."""
    with resources.as_file(_data_path("adjectives.txt")) as path:
        return load_lexicon(path)


def default_templates() -> dict[str, str]:
    """The category -> phrase table shipped with the package."""
    with resources.as_file(_data_path("templates.tsv")) as path:
        return load_templates(path)
