"""Metric suite: attribute-aware edit scoring, BLEU-4, ROUGE-1/2/L, a raw
character-distance baseline, and the Pearson harness for metric validation.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .corpus import Command, EditSample
from .text import tokenize
from .textmetrics import levenshtein, partial_ratio


def attribute_edit_score(output: str, attribute_value: str) -> int:
    """Fuzzy 0-100 match between an attribute value and a system output.

    High means the attribute's content is present (good after an add, bad
    after a delete); the best character window of the output is scored.
    """
    if not attribute_value.strip():
        raise ValueError("attribute value non-empty")
    return partial_ratio(attribute_value, output)


def combine_all(add_mean: float, del_mean: float) -> float:
    """Overall attribute-edit score: deletions count negatively.

    Returns (add_mean - del_mean) / 2, so a system that reliably adds on add
    commands and removes on delete commands scores high.
    """
    return (add_mean - del_mean) / 2


def char_levenshtein_baseline(output: str, attribute_value: str) -> int:
    """Raw character-level edit distance (no normalization to 0-100)."""
    return levenshtein(output, attribute_value)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu4(
    hypotheses: Sequence[str],
    references: Sequence[str],
    *,
    max_order: int = 4,
    smooth_eps: float = 0.0,
) -> float:
    """Corpus-level BLEU with uniform weights up to 4-grams, scaled to 0-100.

    Brevity penalty is exp(1 - r/c) when the hypothesis corpus is shorter
    than the reference corpus. Any zero n-gram precision makes the score 0
    unless ``smooth_eps`` adds a floor to every precision.
    """
    if len(hypotheses) != len(references):
        raise ValueError(
            f"hypotheses ({len(hypotheses)}) and references ({len(references)}) "
            f"must align one-to-one"
        )
    if not hypotheses:
        raise ValueError("empty corpus")
    matches = [0] * max_order
    totals = [0] * max_order
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = tokenize(hyp)
        ref_tokens = tokenize(ref)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, max_order + 1):
            hyp_counts = _ngram_counts(hyp_tokens, n)
            if not hyp_counts:
                continue
            ref_counts = _ngram_counts(ref_tokens, n)
            totals[n - 1] += sum(hyp_counts.values())
            matches[n - 1] += sum(
                min(count, ref_counts[gram]) for gram, count in hyp_counts.items()
            )
    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for match, total in zip(matches, totals):
        numerator = match + smooth_eps
        denominator = total + smooth_eps
        if numerator <= 0 or denominator <= 0:
            return 0.0
        log_sum += math.log(numerator / denominator)
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_sum / max_order)


def _overlap_f1(hyp_counts: Counter, ref_counts: Counter) -> float:
    hyp_total = sum(hyp_counts.values())
    ref_total = sum(ref_counts.values())
    if hyp_total == 0 and ref_total == 0:
        return 1.0
    if hyp_total == 0 or ref_total == 0:
        return 0.0
    overlap = sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items())
    return 2 * overlap / (hyp_total + ref_total)


def _lcs_len(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        append = cur.append
        for j, y in enumerate(b, 1):
            if x == y:
                append(prev[j - 1] + 1)
            else:
                append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def _lcs_f1(hyp_tokens: Sequence[str], ref_tokens: Sequence[str]) -> float:
    if not hyp_tokens and not ref_tokens:
        return 1.0
    if not hyp_tokens or not ref_tokens:
        return 0.0
    lcs = _lcs_len(hyp_tokens, ref_tokens)
    return 2 * lcs / (len(hyp_tokens) + len(ref_tokens))


def rouge_scores(
    hypotheses: Sequence[str], references: Sequence[str]
) -> tuple[float, float, float]:
    """Mean per-sample F1 of unigram overlap, bigram overlap, and longest
    common subsequence, each scaled to 0-100."""
    if len(hypotheses) != len(references):
        raise ValueError(
            f"hypotheses ({len(hypotheses)}) and references ({len(references)}) "
            f"must align one-to-one"
        )
    if not hypotheses:
        raise ValueError("empty corpus")
    r1_sum = r2_sum = rl_sum = 0.0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = tokenize(hyp)
        ref_tokens = tokenize(ref)
        r1_sum += _overlap_f1(_ngram_counts(hyp_tokens, 1), _ngram_counts(ref_tokens, 1))
        r2_sum += _overlap_f1(_ngram_counts(hyp_tokens, 2), _ngram_counts(ref_tokens, 2))
        rl_sum += _lcs_f1(hyp_tokens, ref_tokens)
    n = len(hypotheses)
    return 100 * r1_sum / n, 100 * r2_sum / n, 100 * rl_sum / n


def pearson(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Product-moment correlation and its two-sided p-value.

    The p-value comes from the t-distribution with n-2 degrees of freedom.
    Raises for mismatched lengths, fewer than 3 pairs, or zero variance.
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("x and y must be equal-length 1-d sequences")
    n = xs.size
    if n < 3:
        raise ValueError("need at least 3 paired values")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("undefined correlation: an input has zero variance")
    r = float(np.sum(dx * dy) / (sx * sy))
    r = max(-1.0, min(1.0, r))
    df = n - 2
    denom = 1.0 - r * r
    if denom <= 0.0:
        return r, 0.0
    t = abs(r) * math.sqrt(df / denom)
    p = 2.0 * float(special.stdtr(df, -t))
    return r, p


@dataclass(frozen=True)
class MetricReport:
    """Scores for one evaluation run; command means are None when a run has
    no sample of that command."""

    add_score: Optional[float]
    del_score: Optional[float]
    all_score: Optional[float]
    bleu4: float
    rouge1: float
    rouge2: float
    rougeL: float
    sample_counts: dict

    def as_dict(self) -> dict:
        return {
            "attribute_edit": {
                "add": self.add_score,
                "del": self.del_score,
                "all": self.all_score,
            },
            "bleu4": self.bleu4,
            "rouge1": self.rouge1,
            "rouge2": self.rouge2,
            "rougeL": self.rougeL,
            "sample_counts": dict(self.sample_counts),
        }

    def format_table(self) -> str:
        def fmt(value: Optional[float]) -> str:
            return "  n/a" if value is None else f"{value:7.2f}"

        rows = [
            ("attribute edit (ADD)", self.add_score),
            ("attribute edit (DEL)", self.del_score),
            ("attribute edit (ALL)", self.all_score),
            ("BLEU-4", self.bleu4),
            ("ROUGE-1", self.rouge1),
            ("ROUGE-2", self.rouge2),
            ("ROUGE-L", self.rougeL),
        ]
        width = max(len(label) for label, _ in rows)
        lines = [f"{label:<{width}}  {fmt(value)}" for label, value in rows]
        counts = ", ".join(f"{k}: {v}" for k, v in sorted(self.sample_counts.items()))
        lines.append(f"{'samples':<{width}}  {counts or '0'}")
        return "\n".join(lines)


def evaluate(
    samples: Sequence[EditSample], system_outputs: Sequence[str]
) -> MetricReport:
    """Score aligned system outputs against gold samples.

    ADD/DEL are the per-sample means of ``attribute_edit_score`` over the
    respective command classes (micro average), ALL combines them, and
    BLEU/ROUGE compare every output against its gold edit.
    """
    if len(samples) != len(system_outputs):
        raise ValueError(
            f"gold has {len(samples)} samples, outputs has {len(system_outputs)}"
        )
    if not samples:
        raise ValueError("empty corpus")
    add_scores: list[int] = []
    del_scores: list[int] = []
    for sample, output in zip(samples, system_outputs):
        score = attribute_edit_score(output, sample.attribute.value)
        if sample.command is Command.ADD:
            add_scores.append(score)
        else:
            del_scores.append(score)
    add_mean = float(np.mean(add_scores)) if add_scores else None
    del_mean = float(np.mean(del_scores)) if del_scores else None
    all_score = (
        combine_all(add_mean, del_mean)
        if add_mean is not None and del_mean is not None
        else None
    )
    references = [s.edit for s in samples]
    r1, r2, rl = rouge_scores(system_outputs, references)
    return MetricReport(
        add_score=add_mean,
        del_score=del_mean,
        all_score=all_score,
        bleu4=bleu4(system_outputs, references),
        rouge1=r1,
        rouge2=r2,
        rougeL=rl,
        sample_counts={
            Command.ADD.value: len(add_scores),
            Command.DEL.value: len(del_scores),
        },
    )
