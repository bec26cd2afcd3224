"""Blank filling behind the model-based augmentation strategy.

A masked description carries one "[FILL]" token; a filler proposes
replacement tokens for that position under a vocabulary constraint that
forbids the masked attribute's tokens, so the completed text is free of the
attribute's content. Three deterministic fillers are provided (delete the
blank, insert a category-conditioned template phrase, greedy-decode from a
corpus-trained n-gram model); a learned filler can be attached later behind
the same ``propose`` interface.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

from .text import (
    FILL_TOKEN,
    TERMINALS,
    detokenize,
    is_punct,
    normalize,
    splice_tokens,
    tokenize,
)

BOS = "<s>"
EOS = "</s>"

DEFAULT_MAX_FILL_LEN = 8


@dataclass(frozen=True)
class FillConstraint:
    """Decode-space restriction for one blank.

    ``forbidden_tokens`` holds the normalized tokens of the attribute whose
    content was masked; no proposed token may be one of them.
    """

    forbidden_tokens: frozenset[str]
    max_fill_len: int = DEFAULT_MAX_FILL_LEN

    def __post_init__(self) -> None:
        object.__setattr__(self, "forbidden_tokens", frozenset(self.forbidden_tokens))
        if self.max_fill_len < 0:
            raise ValueError("max_fill_len must be non-negative")


def constraint_for_value(
    attribute_value: str, max_fill_len: int = DEFAULT_MAX_FILL_LEN
) -> FillConstraint:
    """Forbid the value's word tokens (punctuation is not content)."""
    forbidden = frozenset(
        t.lower() for t in tokenize(attribute_value) if not is_punct(t)
    )
    return FillConstraint(forbidden, max_fill_len)


class Filler(Protocol):
    def propose(
        self, masked_text: Sequence[str], fill_index: int,
        constraint: FillConstraint, category: str,
    ) -> tuple[list[str], bool]:
        """Return (replacement tokens, fell_back flag) for the blank."""
        ...


class RemovalFiller:
    """Deletes the blank outright; the splice smoothing handles punctuation."""

    def propose(self, masked_text, fill_index, constraint, category):
        return [], False


class TemplateFiller:
    """Inserts a fixed category-conditioned phrase from a lookup table.

    Tokens colliding with the constraint are dropped from the phrase; if
    nothing survives the blank is deleted instead.
    """

    def __init__(self, phrases: Mapping[str, str], default_key: str = "default"):
        self.phrases = {normalize(k): v for k, v in phrases.items()}
        self.default_key = default_key

    def propose(self, masked_text, fill_index, constraint, category):
        phrase = self.phrases.get(normalize(category))
        if phrase is None:
            phrase = self.phrases.get(self.default_key, "")
        tokens = [
            t for t in tokenize(phrase)
            if t.lower() not in constraint.forbidden_tokens
        ]
        return tokens, False


@dataclass(frozen=True)
class NgramModel:
    """Conditional continuation counts from a description corpus."""

    order: int
    counts: dict

    def continuations(self, context: tuple[str, ...]) -> Mapping[str, int]:
        return self.counts.get(context, {})


def ngram_train(descriptions: Iterable[str], order: int = 3) -> NgramModel:
    """Count order-gram continuations over normalized description tokens.

    Each description is padded with start markers and closed with an end
    marker. Deterministic: the same corpus always yields an equal model.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    counts: dict = defaultdict(dict)
    seen_any = False
    for description in descriptions:
        seen_any = True
        tokens = [BOS] * (order - 1) + normalize(description).split() + [EOS]
        for i in range(order - 1, len(tokens)):
            context = tuple(tokens[i - order + 1:i])
            bucket = counts[context]
            tok = tokens[i]
            bucket[tok] = bucket.get(tok, 0) + 1
    if not seen_any:
        raise ValueError("corpus is empty")
    return NgramModel(order, dict(counts))


class NgramLmFiller:
    """Greedy decoder over a trained n-gram model.

    Forbidden tokens get probability zero. Decoding stops at the length cap,
    at an end-of-text event, or at a sentence-final token (not emitted). When
    the very first step has every observed continuation forbidden, the filler
    falls back to removal and flags the sample.
    """

    def __init__(self, model: NgramModel):
        self.model = model

    def propose(self, masked_text, fill_index, constraint, category):
        order = self.model.order
        left = [t.lower() for t in masked_text[:fill_index]]
        context = tuple(([BOS] * (order - 1) + left)[-(order - 1):])
        out: list[str] = []
        for step in range(constraint.max_fill_len):
            continuations = self.model.continuations(context)
            allowed = {
                tok: cnt for tok, cnt in continuations.items()
                if tok not in constraint.forbidden_tokens
            }
            if not allowed:
                if step == 0 and continuations:
                    return [], True  # constraint emptied the decode space
                break
            tok = min(allowed.items(), key=lambda kv: (-kv[1], kv[0]))[0]
            if tok == EOS or tok in TERMINALS:
                break
            out.append(tok)
            context = context[1:] + (tok,)
        return out, False


def fill(
    masked_text: Sequence[str],
    constraint: FillConstraint,
    filler: Filler,
    *,
    category: str = "",
) -> tuple[str, bool]:
    """Complete the blank in a masked token sequence.

    Returns (completed text, fell_back). The completed text never contains
    the fill marker, and the inserted region never contains a forbidden
    token; it differs from the source only inside the masked region plus at
    most one punctuation token at each boundary.
    """
    masked_text = list(masked_text)
    positions = [i for i, t in enumerate(masked_text) if t == FILL_TOKEN]
    if len(positions) != 1:
        raise ValueError("masked text must contain exactly one fill marker")
    pos = positions[0]
    replacement, fell_back = filler.propose(masked_text, pos, constraint, category)
    bad = [t for t in replacement if t.lower() in constraint.forbidden_tokens]
    if bad:
        raise RuntimeError(f"filler proposed forbidden tokens: {bad}")
    if FILL_TOKEN in replacement:
        raise RuntimeError("filler proposed the fill marker itself")
    tokens = splice_tokens(masked_text, pos, pos + 1, replacement)
    return detokenize(tokens), fell_back
