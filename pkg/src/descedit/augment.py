"""Draft-edit pair synthesis: masking policies, rule-based deletions, and
the pair builder.

Every record flows through one of four masking policies (an important token
by TF-IDF, the located attribute phrase, a conjunction-joined clause, or a
random 2-5 token phrase). Model-based policies route the masked description
through a filler to produce attribute-free text; rule-based deletions (whole
single-attribute sentences, adjective spans) are used directly. Each
deletion sample is mirrored into an addition sample by swapping draft and
edit.

Determinism: every record's random state derives from (mix seed, record id),
so outputs are reproducible and records can be processed in parallel.
"""
from __future__ import annotations

import enum
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .corpus import (
    AttributePair,
    Command,
    EditSample,
    Grounding,
    ProductRecord,
    Provenance,
    swap_to_add,
)
from .filler import FillConstraint, Filler, constraint_for_value, fill
from .text import (
    FILL_TOKEN,
    TERMINALS,
    default_adjectives,
    default_stopwords,
    delete_token_span,
    detokenize,
    has_content,
    is_punct,
    sentence_token_ranges,
    tokenize,
)
from .textmetrics import (
    DEFAULT_MIN_SCORE,
    locate_attribute_span,
    match_score_drops,
)

COORDINATING_CONJUNCTIONS = frozenset({"and", "or", "but", "nor", "yet", "so"})

# Pseudo-attribute names for masks that are not anchored to a real attribute;
# the removed span's text becomes the value so the pair invariants still hold.
_POLICY_ATTRIBUTE_NAMES = {
    "token_level": "keyword",
    "conjunction_based": "clause",
    "random": "phrase",
}


class MaskPolicy(enum.Enum):
    TFIDF_TOKEN = "token_level"
    ATTRIBUTE_PHRASE = "attribute_based"
    CONJUNCTION_CLAUSE = "conjunction_based"
    RANDOM_PHRASE = "random"


# Retry order when the sampled policy cannot produce a pair for a record.
FALLBACK_ORDER = (
    MaskPolicy.ATTRIBUTE_PHRASE,
    MaskPolicy.TFIDF_TOKEN,
    MaskPolicy.CONJUNCTION_CLAUSE,
    MaskPolicy.RANDOM_PHRASE,
)


@dataclass(frozen=True)
class MaskedInstance:
    """A description with exactly one span replaced by the fill marker.

    Splicing ``removed_span`` back at the marker reproduces the source
    description's token sequence exactly.
    """

    masked_text: tuple[str, ...]
    removed_span: tuple[str, ...]
    policy: MaskPolicy
    source_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "masked_text", tuple(self.masked_text))
        object.__setattr__(self, "removed_span", tuple(self.removed_span))
        if self.masked_text.count(FILL_TOKEN) != 1:
            raise ValueError("masked text must contain exactly one fill marker")
        if not self.removed_span:
            raise ValueError("removed span non-empty")
        if FILL_TOKEN in self.removed_span:
            raise ValueError("removed span cannot contain the fill marker")

    @property
    def fill_index(self) -> int:
        return self.masked_text.index(FILL_TOKEN)

    def reconstruct(self) -> tuple[str, ...]:
        i = self.fill_index
        return self.masked_text[:i] + self.removed_span + self.masked_text[i + 1:]


@dataclass(frozen=True)
class PolicyMix:
    """Sampling proportions for the four masking policies, plus the seed."""

    token_level: float = 0.50
    attribute_based: float = 0.25
    conjunction_based: float = 0.15
    random: float = 0.10
    seed: int = 0

    def __post_init__(self) -> None:
        fractions = (
            self.token_level,
            self.attribute_based,
            self.conjunction_based,
            self.random,
        )
        if any(f < 0 for f in fractions):
            raise ValueError("policy mix fractions must be non-negative")
        if abs(sum(fractions) - 1.0) > 1e-9:
            raise ValueError("policy mix fractions must sum to 1.0")

    def ordered(self) -> tuple[tuple[MaskPolicy, float], ...]:
        """Fixed sampling order; the cumulative scan below depends on it."""
        return (
            (MaskPolicy.TFIDF_TOKEN, self.token_level),
            (MaskPolicy.ATTRIBUTE_PHRASE, self.attribute_based),
            (MaskPolicy.CONJUNCTION_CLAUSE, self.conjunction_based),
            (MaskPolicy.RANDOM_PHRASE, self.random),
        )


@dataclass(frozen=True)
class TfidfModel:
    """Document frequencies over normalized tokens of a record corpus."""

    document_frequency: dict
    document_count: int


def tfidf_fit(corpus: Sequence[ProductRecord]) -> TfidfModel:
    """Count, per token, how many descriptions contain it at least once."""
    corpus = list(corpus)
    if not corpus:
        raise ValueError("corpus is empty")
    df: Counter = Counter()
    for record in corpus:
        df.update({t.lower() for t in tokenize(record.description)})
    return TfidfModel(dict(df), len(corpus))


def tfidf_top_token(
    tokens: Sequence[str],
    model: TfidfModel,
    stopwords: frozenset[str],
) -> int:
    """Index of the most corpus-distinctive token in the description.

    Score is tf * ln(N / df) with tf counted inside the description and
    unseen tokens given df = 1; stopwords and punctuation are ineligible.
    Ties go to the smallest index.
    """
    lowered = [t.lower() for t in tokens]
    tf = Counter(lowered)
    best_idx = -1
    best_score = -1.0
    n_docs = model.document_count
    for i, tok in enumerate(lowered):
        if tok in stopwords or is_punct(tokens[i]):
            continue
        df = model.document_frequency.get(tok, 1)
        score = tf[tok] * math.log(n_docs / df)
        if score > best_score:
            best_score = score
            best_idx = i
    if best_idx < 0:
        raise ValueError("no maskable token")
    return best_idx


def _mask_span(
    tokens: Sequence[str], start: int, end: int, policy: MaskPolicy, source_id: str
) -> MaskedInstance:
    masked = tuple(tokens[:start]) + (FILL_TOKEN,) + tuple(tokens[end:])
    return MaskedInstance(masked, tuple(tokens[start:end]), policy, source_id)


def mask_token_level(
    record: ProductRecord,
    model: TfidfModel,
    stopwords: frozenset[str],
) -> MaskedInstance:
    """Mask the single highest-scoring TF-IDF token of the description."""
    tokens = tokenize(record.description)
    idx = tfidf_top_token(tokens, model, stopwords)
    return _mask_span(tokens, idx, idx + 1, MaskPolicy.TFIDF_TOKEN, record.id)


def mask_random_phrase(record: ProductRecord, rng: random.Random) -> MaskedInstance:
    """Mask a uniformly placed phrase of 2-5 tokens.

    The span length is drawn first, then the start position; both come from
    ``rng``, so the instance is fully determined by the generator state.
    """
    tokens = tokenize(record.description)
    if len(tokens) < 6:
        raise ValueError("too short for phrase masking")
    span_len = rng.randint(2, 5)
    start = rng.randint(0, len(tokens) - span_len)
    return _mask_span(tokens, start, start + span_len, MaskPolicy.RANDOM_PHRASE, record.id)


def _clause_candidates(
    tokens: Sequence[str], ranges: Sequence[tuple[int, int]]
) -> list[tuple[int, int]]:
    """(span start, span end) for removable conjunction-led clauses.

    Within each sentence, clauses are maximal runs between coordinating
    conjunctions. A candidate is a non-initial clause taken together with its
    leading conjunction; the sentence-final terminal run stays in place.
    """
    candidates: list[tuple[int, int]] = []
    for s, e in ranges:
        conj_positions = [
            i for i in range(s, e) if tokens[i].lower() in COORDINATING_CONJUNCTIONS
        ]
        if not conj_positions:
            continue
        first_clause_end = conj_positions[0]
        has_initial = any(not is_punct(tokens[i]) for i in range(s, first_clause_end))
        if not has_initial:
            continue
        bounds = conj_positions + [e]
        for ci, conj in enumerate(conj_positions):
            clause_start = conj + 1
            clause_end = bounds[ci + 1]
            while clause_end > clause_start and tokens[clause_end - 1] in TERMINALS:
                clause_end -= 1
            if clause_end > clause_start and any(
                not is_punct(tokens[i]) for i in range(clause_start, clause_end)
            ):
                candidates.append((conj, clause_end))
    return candidates


def mask_conjunction_clause(
    record: ProductRecord, rng: random.Random
) -> Optional[MaskedInstance]:
    """Mask one conjunction-led clause, chosen uniformly; None when no
    sentence carries at least two clauses."""
    tokens, ranges = sentence_token_ranges(record.description)
    candidates = _clause_candidates(tokens, ranges)
    if not candidates:
        return None
    start, end = candidates[rng.randrange(len(candidates))]
    return _mask_span(tokens, start, end, MaskPolicy.CONJUNCTION_CLAUSE, record.id)


def mask_attribute_phrase(
    record: ProductRecord,
    attribute: AttributePair,
    min_score: int = DEFAULT_MIN_SCORE,
) -> Optional[MaskedInstance]:
    """Mask the span best matching the attribute value; None below min_score."""
    tokens = tokenize(record.description)
    span = locate_attribute_span(tokens, attribute.value, min_score)
    if span is None:
        return None
    return _mask_span(tokens, span.start, span.end, MaskPolicy.ATTRIBUTE_PHRASE, record.id)


def _grounding(record: ProductRecord) -> Grounding:
    return Grounding(record.title, record.category)


def _finish_deletion(
    record: ProductRecord,
    attribute: AttributePair,
    edit_tokens: Sequence[str],
    provenance: Provenance,
    min_score: int,
) -> Optional[EditSample]:
    """Assemble a deletion sample, or None when the guards reject it."""
    if not has_content(edit_tokens):
        return None
    draft = record.description
    edit = detokenize(edit_tokens)
    if edit == draft:
        return None
    if not match_score_drops(tokenize(draft), edit_tokens, attribute.value, min_score):
        return None
    return EditSample(attribute, Command.DEL, _grounding(record), draft, edit, provenance)


def rule_delete_sentence(
    record: ProductRecord,
    attribute: AttributePair,
    min_score: int = DEFAULT_MIN_SCORE,
) -> Optional[EditSample]:
    """Delete the sentence holding the attribute when no other attribute of
    the record matches inside it; None when the conditions fail."""
    tokens, ranges = sentence_token_ranges(record.description)
    span = locate_attribute_span(tokens, attribute.value, min_score)
    if span is None:
        return None
    sentence = next(
        ((s, e) for s, e in ranges if s <= span.start and span.end <= e), None
    )
    if sentence is None:
        return None
    s, e = sentence
    sentence_tokens = tokens[s:e]
    for other in record.attributes:
        if other == attribute:
            continue
        if locate_attribute_span(sentence_tokens, other.value, min_score) is not None:
            return None
    remaining = delete_token_span(tokens, s, e)
    return _finish_deletion(record, attribute, remaining, Provenance.RULE_SENTENCE, min_score)


def rule_delete_adjective(
    record: ProductRecord,
    attribute: AttributePair,
    adjective_lexicon: frozenset[str],
    min_score: int = DEFAULT_MIN_SCORE,
) -> Optional[EditSample]:
    """Delete the matched span when it is made of adjectives only.

    A standalone comma immediately before the span is absorbed so list-style
    enumerations stay well formed ("soft, comfortable pillow" minus
    "comfortable" reads "soft pillow").
    """
    tokens = tokenize(record.description)
    span = locate_attribute_span(tokens, attribute.value, min_score)
    if span is None:
        return None
    span_tokens = tokens[span.start:span.end]
    if not all(t.lower() in adjective_lexicon for t in span_tokens):
        return None
    start = span.start
    if start > 0 and tokens[start - 1] == ",":
        start -= 1
    remaining = delete_token_span(tokens, start, span.end)
    return _finish_deletion(record, attribute, remaining, Provenance.RULE_ADJECTIVE, min_score)


def _pseudo_attribute(instance: MaskedInstance) -> Optional[AttributePair]:
    """Attribute stand-in for masks not anchored to a real attribute.

    The value is the removed span with boundary punctuation trimmed; None
    when nothing content-like was removed.
    """
    span = list(instance.removed_span)
    while span and is_punct(span[0]):
        span.pop(0)
    while span and is_punct(span[-1]):
        span.pop()
    if not span:
        return None
    name = _POLICY_ATTRIBUTE_NAMES[instance.policy.value]
    return AttributePair(name, detokenize(span))


def _model_based_deletion(
    record: ProductRecord,
    attribute: AttributePair,
    instance: MaskedInstance,
    filler: Filler,
    min_score: int,
    max_fill_len: int,
) -> tuple[Optional[EditSample], bool]:
    constraint = constraint_for_value(attribute.value, max_fill_len)
    if not constraint.forbidden_tokens:
        return None, False
    edit_text, fell_back = fill(
        instance.masked_text, constraint, filler, category=record.category
    )
    edit_tokens = tokenize(edit_text)
    sample = _finish_deletion(record, attribute, edit_tokens, Provenance.MODEL_BASED, min_score)
    return sample, fell_back


@dataclass
class AugmentReport:
    """Counters for one augmentation run (counts are emitted samples)."""

    records_read: int = 0
    skipped_no_attributes: int = 0
    skipped_infeasible: int = 0
    fallback_count: int = 0
    flagged_fills: int = 0
    samples_written: int = 0
    policy_counts: dict = field(default_factory=dict)
    provenance_counts: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "records_read": self.records_read,
            "skipped_no_attributes": self.skipped_no_attributes,
            "skipped_infeasible": self.skipped_infeasible,
            "fallback_count": self.fallback_count,
            "flagged_fills": self.flagged_fills,
            "samples_written": self.samples_written,
            "policy_counts": dict(sorted(self.policy_counts.items())),
            "provenance_counts": dict(sorted(self.provenance_counts.items())),
        }


@dataclass
class AugmentResult:
    samples: list
    report: AugmentReport


@dataclass(frozen=True)
class _PipelineContext:
    mix: PolicyMix
    filler: Filler
    min_score: int
    model: TfidfModel
    stopwords: frozenset[str]
    adjectives: frozenset[str]
    max_fill_len: int
    use_rules: bool


def record_rng(seed: int, record_id: str) -> random.Random:
    """Per-record generator state, stable across runs and worker layouts."""
    return random.Random(f"{seed}:{record_id}")


def _sample_policy(mix: PolicyMix, rng: random.Random) -> MaskPolicy:
    r = rng.random()
    cumulative = 0.0
    ordered = mix.ordered()
    for policy, fraction in ordered:
        cumulative += fraction
        if r < cumulative:
            return policy
    return ordered[-1][0]


def _try_policy(
    policy: MaskPolicy,
    record: ProductRecord,
    attribute: AttributePair,
    ctx: _PipelineContext,
    rng: random.Random,
) -> tuple[Optional[EditSample], bool]:
    if policy is MaskPolicy.ATTRIBUTE_PHRASE:
        if ctx.use_rules:
            sample = rule_delete_sentence(record, attribute, ctx.min_score)
            if sample is not None:
                return sample, False
            sample = rule_delete_adjective(record, attribute, ctx.adjectives, ctx.min_score)
            if sample is not None:
                return sample, False
        instance = mask_attribute_phrase(record, attribute, ctx.min_score)
        if instance is None:
            return None, False
        return _model_based_deletion(
            record, attribute, instance, ctx.filler, ctx.min_score, ctx.max_fill_len
        )
    if policy is MaskPolicy.TFIDF_TOKEN:
        try:
            instance = mask_token_level(record, ctx.model, ctx.stopwords)
        except ValueError:
            return None, False
    elif policy is MaskPolicy.CONJUNCTION_CLAUSE:
        instance = mask_conjunction_clause(record, rng)
    else:
        try:
            instance = mask_random_phrase(record, rng)
        except ValueError:
            return None, False
    if instance is None:
        return None, False
    pseudo = _pseudo_attribute(instance)
    if pseudo is None:
        return None, False
    return _model_based_deletion(
        record, pseudo, instance, ctx.filler, ctx.min_score, ctx.max_fill_len
    )


def _augment_one(record: ProductRecord, ctx: _PipelineContext):
    """Per-record pipeline step; returns (status, sample, policy, flagged,
    used_fallback) where status is 'ok', 'no_attributes', or 'infeasible'."""
    if not record.attributes:
        return "no_attributes", None, None, False, False
    if FILL_TOKEN in record.description:
        return "infeasible", None, None, False, False
    rng = record_rng(ctx.mix.seed, record.id)
    attribute = record.attributes[rng.randrange(len(record.attributes))]
    sampled = _sample_policy(ctx.mix, rng)
    chain = [sampled] + [p for p in FALLBACK_ORDER if p is not sampled]
    flagged_any = False
    for position, policy in enumerate(chain):
        sample, flagged = _try_policy(policy, record, attribute, ctx, rng)
        flagged_any = flagged_any or flagged
        if sample is not None:
            return "ok", sample, policy, flagged_any, position > 0
    return "infeasible", None, None, flagged_any, True


def augment_corpus(
    records: Iterable[ProductRecord],
    mix: PolicyMix,
    filler: Filler,
    min_score: int = DEFAULT_MIN_SCORE,
    *,
    stopwords: Optional[frozenset[str]] = None,
    adjectives: Optional[frozenset[str]] = None,
    max_fill_len: int = 8,
    use_rules: bool = True,
    workers: int = 1,
) -> AugmentResult:
    """Run the full pair builder and return samples plus run counters.

    Every produced deletion sample is immediately followed by its swapped
    addition sample. Output order follows input order regardless of the
    worker count.
    """
    records = list(records)
    report = AugmentReport(records_read=len(records))
    if not records:
        return AugmentResult([], report)
    ctx = _PipelineContext(
        mix=mix,
        filler=filler,
        min_score=min_score,
        model=tfidf_fit(records),
        stopwords=stopwords if stopwords is not None else default_stopwords(),
        adjectives=adjectives if adjectives is not None else default_adjectives(),
        max_fill_len=max_fill_len,
        use_rules=use_rules,
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(records) // (workers * 8))
            outcomes = list(
                pool.map(_augment_one, records, [ctx] * len(records), chunksize=chunk)
            )
    else:
        outcomes = [_augment_one(record, ctx) for record in records]

    samples: list[EditSample] = []
    policy_counts: Counter = Counter()
    provenance_counts: Counter = Counter()
    for status, sample, policy, flagged, used_fallback in outcomes:
        if flagged:
            report.flagged_fills += 1
        if status == "no_attributes":
            report.skipped_no_attributes += 1
            continue
        if status == "infeasible":
            report.skipped_infeasible += 1
            continue
        if used_fallback:
            report.fallback_count += 1
        added = swap_to_add(sample)
        samples.append(sample)
        samples.append(added)
        policy_counts[policy.value] += 2
        provenance_counts[sample.provenance.value] += 2
    report.samples_written = len(samples)
    report.policy_counts = dict(policy_counts)
    report.provenance_counts = dict(provenance_counts)
    return AugmentResult(samples, report)


def build_pairs(
    records: Iterable[ProductRecord],
    mix: PolicyMix,
    filler: Filler,
    min_score: int = DEFAULT_MIN_SCORE,
    **kwargs,
) -> list:
    """The pair builder's plain surface: just the sample list."""
    return augment_corpus(records, mix, filler, min_score, **kwargs).samples
