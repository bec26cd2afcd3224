"""A deterministic rule-based description editor.

Executes an add/delete command for one attribute against a draft. It serves
as the runnable baseline editor and as a direction oracle for the metrics:
deletions lower the attribute's match score or come back flagged as no-ops,
additions are idempotent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .corpus import AttributePair, Command, Grounding
from .text import (
    SEP_TOKEN,
    TERMINALS,
    delete_token_span,
    detokenize,
    has_content,
    sentence_token_ranges,
    tokenize,
)
from .textmetrics import DEFAULT_MIN_SCORE, locate_attribute_span


@dataclass(frozen=True)
class EditResult:
    """The edited text plus a no-op flag (no-ops are results, not errors)."""

    text: str
    noop: bool = False
    reason: str = ""


def apply_command(
    draft: str,
    attribute: AttributePair,
    command: Command,
    grounding: Optional[Grounding] = None,
    min_score: int = DEFAULT_MIN_SCORE,
    *,
    add_position: str = "after_first_sentence",
) -> EditResult:
    """Apply one add/delete command to a draft.

    Deletion locates the attribute's best-matching span, removes it, and
    smooths the punctuation around the cut; when no span clears ``min_score``
    the draft comes back unchanged with the no-op flag set. Addition is
    idempotent: when the attribute already matches, the draft is returned
    unchanged; otherwise "name: value" is inserted as its own clause after
    the first sentence boundary (``add_position="start"`` prepends it), or
    appended after a comma when the draft has no sentence boundary at all.
    The result is never empty: a deletion that would erase everything is a
    flagged no-op instead. ``grounding`` is accepted for interface parity
    with learned editors; the rule editor does not consult it.
    """
    if not draft.strip():
        raise ValueError("draft non-empty")
    if command is Command.DEL:
        return _delete(draft, attribute, min_score)
    return _add(draft, attribute, min_score, add_position)


def _delete(draft: str, attribute: AttributePair, min_score: int) -> EditResult:
    tokens = tokenize(draft)
    span = locate_attribute_span(tokens, attribute.value, min_score)
    if span is None:
        return EditResult(draft, noop=True, reason="attribute not found in draft")
    remaining = delete_token_span(tokens, span.start, span.end)
    if not has_content(remaining):
        return EditResult(draft, noop=True, reason="deletion would empty the description")
    return EditResult(detokenize(remaining))


def _add(
    draft: str, attribute: AttributePair, min_score: int, add_position: str
) -> EditResult:
    tokens = tokenize(draft)
    if locate_attribute_span(tokens, attribute.value, min_score) is not None:
        return EditResult(draft, noop=True, reason="attribute already present")
    clause = tokenize(attribute.render())
    if add_position == "start":
        out = clause + ["."] + tokens
    elif add_position == "after_first_sentence":
        _, ranges = sentence_token_ranges(draft)
        first_end = ranges[0][1]
        if first_end < len(tokens) or tokens[first_end - 1] in TERMINALS:
            out = tokens[:first_end] + clause + ["."] + tokens[first_end:]
        else:
            # Single unterminated sentence: attach mid-sentence after a comma.
            out = tokens + [","] + clause
    else:
        raise ValueError(f"unknown add_position {add_position!r}")
    return EditResult(detokenize(out))


def serialize_model_input(
    attribute: AttributePair,
    command: Command,
    grounding: Grounding,
    draft: str,
) -> str:
    """Concatenate the editor inputs with the separator marker.

    Format: ``name: value [SEP] [ADD|DEL] [SEP] title [SEP] category [SEP]
    draft`` with single spaces around each separator.
    """
    fields = (
        attribute.render(),
        command.value,
        grounding.title,
        grounding.category,
        draft,
    )
    return f" {SEP_TOKEN} ".join(fields)


def parse_model_input(serialized: str) -> tuple[AttributePair, Command, Grounding, str]:
    """Invert ``serialize_model_input`` (fields must not contain the
    separator literal, and the attribute name must not contain ": ")."""
    parts = serialized.split(f" {SEP_TOKEN} ")
    if len(parts) != 5:
        raise ValueError(f"expected 5 separator-delimited fields, got {len(parts)}")
    rendered, command_raw, title, category, draft = parts
    name, sep, value = rendered.partition(": ")
    if not sep:
        raise ValueError("attribute field must look like 'name: value'")
    return (
        AttributePair(name, value),
        Command.parse(command_raw),
        Grounding(title, category),
        draft,
    )
