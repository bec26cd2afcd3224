"""Data model and JSONL I/O for product records and draft-command-edit samples."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Sequence

from .text import tokenize
from .textmetrics import DEFAULT_MIN_SCORE, match_score_drops


class Command(enum.Enum):
    """The user's editing signal: add or delete an attribute's content."""

    ADD = "[ADD]"
    DEL = "[DEL]"

    @classmethod
    def parse(cls, raw: str) -> "Command":
        for member in cls:
            if member.value == raw:
                return member
        raise ValueError(f"command must be [ADD] or [DEL], got {raw!r}")


class Provenance(enum.Enum):
    HUMAN = "human"
    MODEL_BASED = "model_based"
    RULE_SENTENCE = "rule_sentence"
    RULE_ADJECTIVE = "rule_adjective"

    @classmethod
    def parse(cls, raw: str) -> "Provenance":
        for member in cls:
            if member.value == raw:
                return member
        raise ValueError(f"unknown provenance {raw!r}")


@dataclass(frozen=True)
class AttributePair:
    """A selling point as a name/value pair; the value is what gets matched."""

    name: str
    value: str

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("attribute name non-empty")
        if not self.value.strip():
            raise ValueError("attribute value non-empty")

    def render(self) -> str:
        """The single-string form used in model inputs, e.g. "shape: column"."""
        return f"{self.name}: {self.value}"


@dataclass(frozen=True)
class Grounding:
    """Supplementary product context fed alongside a command."""

    title: str
    category: str = ""

    def __post_init__(self) -> None:
        if not self.title.strip():
            raise ValueError("title non-empty")


@dataclass(frozen=True)
class ProductRecord:
    """One crawled product: the augmentation input."""

    id: str
    title: str
    category: str
    attributes: tuple[AttributePair, ...]
    description: str

    def __post_init__(self) -> None:
        if not self.title.strip():
            raise ValueError("title non-empty")
        if not self.description.strip():
            raise ValueError("description non-empty")
        object.__setattr__(self, "attributes", tuple(self.attributes))


@dataclass(frozen=True)
class EditSample:
    """The dataset row: (attribute, command, grounding, draft, edit).

    A deletion sample must carry the attribute's content in the draft and
    lose it in the edit; an addition sample is the mirror image. That
    directional condition is validated by ``check_direction`` (and by
    ``read_jsonl`` in strict mode); construction enforces the structural
    invariants only.
    """

    attribute: AttributePair
    command: Command
    grounding: Grounding
    draft: str
    edit: str
    provenance: Provenance = Provenance.HUMAN

    def __post_init__(self) -> None:
        if not self.draft.strip():
            raise ValueError("draft non-empty")
        if not self.edit.strip():
            raise ValueError("edit non-empty")
        if self.draft == self.edit:
            raise ValueError("draft and edit must differ")


@dataclass(frozen=True)
class EditRequest:
    """An editing job without a gold edit: input to the rule editor."""

    attribute: AttributePair
    command: Command
    grounding: Grounding
    draft: str

    def __post_init__(self) -> None:
        if not self.draft.strip():
            raise ValueError("draft non-empty")


@dataclass(frozen=True)
class CorpusStats:
    sample_count: int
    mean_draft_len: float
    mean_edit_len: float
    category_count: int
    mean_title_len: float
    mean_attribute_len: float

    def as_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "mean_draft_len": self.mean_draft_len,
            "mean_edit_len": self.mean_edit_len,
            "category_count": self.category_count,
            "mean_title_len": self.mean_title_len,
            "mean_attribute_len": self.mean_attribute_len,
        }


SAMPLE_KEYS = (
    "attribute_name",
    "attribute_value",
    "command",
    "title",
    "category",
    "draft",
    "edit",
    "provenance",
)

RECORD_KEYS = ("id", "title", "category", "attributes", "description")


class CorpusFormatError(ValueError):
    """A malformed or invariant-violating JSONL record, with its location."""


def check_direction(sample: EditSample, min_score: int = DEFAULT_MIN_SCORE) -> bool:
    """True when the sample satisfies the directional attribute invariant."""
    draft_tokens = tokenize(sample.draft)
    edit_tokens = tokenize(sample.edit)
    value = sample.attribute.value
    if sample.command is Command.DEL:
        return match_score_drops(draft_tokens, edit_tokens, value, min_score)
    return match_score_drops(edit_tokens, draft_tokens, value, min_score)


def sample_to_obj(sample: EditSample) -> dict:
    return {
        "attribute_name": sample.attribute.name,
        "attribute_value": sample.attribute.value,
        "command": sample.command.value,
        "title": sample.grounding.title,
        "category": sample.grounding.category,
        "draft": sample.draft,
        "edit": sample.edit,
        "provenance": sample.provenance.value,
    }


def record_to_obj(record: ProductRecord) -> dict:
    return {
        "id": record.id,
        "title": record.title,
        "category": record.category,
        "attributes": [{"name": a.name, "value": a.value} for a in record.attributes],
        "description": record.description,
    }


def _require(obj: dict, key: str, where: str) -> object:
    if key not in obj:
        raise CorpusFormatError(f"{where}: missing field {key!r}")
    return obj[key]


def _require_str(obj: dict, key: str, where: str) -> str:
    value = _require(obj, key, where)
    if not isinstance(value, str):
        raise CorpusFormatError(f"{where}: field {key!r} must be a string")
    return value


def sample_from_obj(obj: dict, where: str = "record") -> EditSample:
    try:
        attribute = AttributePair(
            _require_str(obj, "attribute_name", where),
            _require_str(obj, "attribute_value", where),
        )
        command = Command.parse(_require_str(obj, "command", where))
        grounding = Grounding(
            _require_str(obj, "title", where),
            _require_str(obj, "category", where),
        )
        provenance = Provenance.parse(_require_str(obj, "provenance", where))
        return EditSample(
            attribute,
            command,
            grounding,
            _require_str(obj, "draft", where),
            _require_str(obj, "edit", where),
            provenance,
        )
    except CorpusFormatError:
        raise
    except ValueError as exc:
        raise CorpusFormatError(f"{where}: {exc}") from exc


def record_from_obj(obj: dict, where: str = "record") -> ProductRecord:
    try:
        raw_attributes = _require(obj, "attributes", where)
        if not isinstance(raw_attributes, list):
            raise CorpusFormatError(f"{where}: field 'attributes' must be a list")
        attributes = []
        for entry in raw_attributes:
            if not isinstance(entry, dict):
                raise CorpusFormatError(f"{where}: attribute entries must be objects")
            attributes.append(
                AttributePair(
                    _require_str(entry, "name", where),
                    _require_str(entry, "value", where),
                )
            )
        return ProductRecord(
            _require_str(obj, "id", where),
            _require_str(obj, "title", where),
            _require_str(obj, "category", where),
            tuple(attributes),
            _require_str(obj, "description", where),
        )
    except CorpusFormatError:
        raise
    except ValueError as exc:
        raise CorpusFormatError(f"{where}: {exc}") from exc


def request_from_obj(obj: dict, where: str = "record") -> EditRequest:
    try:
        return EditRequest(
            AttributePair(
                _require_str(obj, "attribute_name", where),
                _require_str(obj, "attribute_value", where),
            ),
            Command.parse(_require_str(obj, "command", where)),
            Grounding(
                _require_str(obj, "title", where),
                _require_str(obj, "category", where),
            ),
            _require_str(obj, "draft", where),
        )
    except CorpusFormatError:
        raise
    except ValueError as exc:
        raise CorpusFormatError(f"{where}: {exc}") from exc


def iter_jsonl_objects(path) -> Iterator[tuple[int, dict]]:
    """Stream (line number, parsed object) pairs from a JSONL file."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped:
                raise CorpusFormatError(f"{path}: line {line_no}: empty line")
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(
                    f"{path}: line {line_no}: invalid JSON ({exc.msg})"
                ) from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError(f"{path}: line {line_no}: expected an object")
            yield line_no, obj


def read_jsonl(path, schema: str = "samples", strict: bool = True) -> list:
    """Read a JSONL corpus, preserving order and validating invariants.

    ``schema`` selects "samples" (EditSample rows) or "records"
    (ProductRecord rows). In strict samples mode the directional attribute
    invariant is also enforced.
    """
    if schema == "samples":
        out_samples: list[EditSample] = []
        for line_no, obj in iter_jsonl_objects(path):
            where = f"{path}: line {line_no}"
            sample = sample_from_obj(obj, where)
            if strict and not check_direction(sample):
                kind = "deletion" if sample.command is Command.DEL else "addition"
                raise CorpusFormatError(
                    f"{where}: {kind} sample must move the attribute match in "
                    f"the commanded direction"
                )
            out_samples.append(sample)
        return out_samples
    if schema == "records":
        out_records: list[ProductRecord] = []
        for line_no, obj in iter_jsonl_objects(path):
            out_records.append(record_from_obj(obj, f"{path}: line {line_no}"))
        return out_records
    raise ValueError(f"unknown schema {schema!r} (expected 'samples' or 'records')")


def read_requests_jsonl(path) -> list[EditRequest]:
    """Read editing jobs: sample rows without the edit/provenance fields."""
    out: list[EditRequest] = []
    for line_no, obj in iter_jsonl_objects(path):
        out.append(request_from_obj(obj, f"{path}: line {line_no}"))
    return out


def write_jsonl(items: Iterable, path) -> None:
    """Write samples or records one JSON object per line (UTF-8, LF)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for item in items:
            if isinstance(item, EditSample):
                obj = sample_to_obj(item)
            elif isinstance(item, ProductRecord):
                obj = record_to_obj(item)
            elif isinstance(item, dict):
                obj = item
            else:
                raise TypeError(f"cannot serialize {type(item).__name__}")
            fh.write(json.dumps(obj, ensure_ascii=False))
            fh.write("\n")


def _token_len(text: str) -> int:
    return len(tokenize(text))


def compute_stats(samples: Sequence[EditSample]) -> CorpusStats:
    """Corpus summary: token-length means and the distinct category count.

    Attribute length counts the name's tokens plus the value's tokens. Empty
    input yields all-zero stats.
    """
    n = len(samples)
    if n == 0:
        return CorpusStats(0, 0.0, 0.0, 0, 0.0, 0.0)
    draft_total = sum(_token_len(s.draft) for s in samples)
    edit_total = sum(_token_len(s.edit) for s in samples)
    title_total = sum(_token_len(s.grounding.title) for s in samples)
    attr_total = sum(
        _token_len(s.attribute.name) + _token_len(s.attribute.value) for s in samples
    )
    categories = {s.grounding.category for s in samples}
    return CorpusStats(
        sample_count=n,
        mean_draft_len=draft_total / n,
        mean_edit_len=edit_total / n,
        category_count=len(categories),
        mean_title_len=title_total / n,
        mean_attribute_len=attr_total / n,
    )


def swap_to_add(sample: EditSample) -> EditSample:
    """Turn a deletion sample into its mirrored addition sample.

    The draft and edit are exchanged and the command flipped to ADD; every
    other field (including provenance) is unchanged.
    """
    if sample.command is not Command.DEL:
        raise ValueError("swap requires a deletion sample")
    return replace(sample, command=Command.ADD, draft=sample.edit, edit=sample.draft)
