"""Edit-distance and fuzzy-matching primitives.

These back both attribute localization (finding where an attribute's value
sits inside a description) and the attribute-aware evaluation metric. All
functions are pure and safe to call from any number of workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .text import normalize, strip_outer_punct, tokenize

DEFAULT_MIN_SCORE = 60

# A 0-100 ratio of 100 implies edit distance 0 whenever the longer string is
# shorter than 200 chars; values above this length take the slow path.
_EXACT_SCORE_MAX_LEN = 150


def _trim_common(a: str, b: str) -> tuple[str, str]:
    lo = 0
    ha, hb = len(a), len(b)
    while lo < ha and lo < hb and a[lo] == b[lo]:
        lo += 1
    while ha > lo and hb > lo and a[ha - 1] == b[hb - 1]:
        ha -= 1
        hb -= 1
    return a[lo:ha], b[lo:hb]


def levenshtein(a: str, b: str) -> int:
    """Minimal number of single-character insertions, deletions, and
    substitutions turning ``a`` into ``b``. Symmetric; 0 for equal inputs."""
    if a == b:
        return 0
    a, b = _trim_common(a, b)
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        append = cur.append
        for j, cb in enumerate(b, 1):
            append(min(cur[j - 1] + 1, prev[j] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def levenshtein_limited(a: str, b: str, limit: int) -> int:
    """Exact distance when it is below ``limit``, else ``limit``.

    Used by the window scans to abandon candidates that cannot beat the best
    score so far; ``min(levenshtein(a, b), limit)`` is the contract.
    """
    if limit <= 0:
        return 0
    a, b = _trim_common(a, b)
    if len(a) < len(b):
        a, b = b, a
    if len(a) - len(b) >= limit:
        return limit
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        append = cur.append
        for j, cb in enumerate(b, 1):
            append(min(cur[j - 1] + 1, prev[j] + 1, prev[j - 1] + (ca != cb)))
        if min(cur) >= limit:
            return limit
        prev = cur
    return min(prev[-1], limit)


def _ratio_normalized(na: str, nb: str) -> int:
    m = max(len(na), len(nb), 1)
    return round(100 * (1 - levenshtein(na, nb) / m))


def similarity_ratio(a: str, b: str) -> int:
    """Normalized-Levenshtein similarity on 0-100.

    100 means equal after lowercasing and whitespace collapsing; 0 means the
    edit distance equals the longer length (nothing in common).
    """
    return _ratio_normalized(normalize(a), normalize(b))


def _ratio_capped(na: str, nb: str, best: int) -> int:
    """Like ``_ratio_normalized`` but may return any value <= ``best`` when
    the true score cannot exceed ``best`` (both inputs pre-normalized)."""
    if best >= 100:
        return 0
    m = max(len(na), len(nb), 1)
    # Beating `best` needs d < m*(99.5-best)/100; anything at or past `limit`
    # rounds to at most `best`, so a capped distance is safe to discard.
    limit = m * (199 - 2 * best) // 200 + 1
    if limit <= 0:
        return 0
    d = levenshtein_limited(na, nb, limit)
    if d >= limit:
        return 0
    return round(100 * (1 - d / m))


def partial_ratio(needle: str, haystack: str) -> int:
    """Best ``similarity_ratio`` between the needle and any character window
    of the haystack of width ``min(len(needle), len(haystack))``.

    Windows slide over the normalized haystack, and the full haystack is one
    more candidate, so the result never falls below the plain ratio. Equals
    ``similarity_ratio`` when the haystack is no longer than the needle.
    """
    nn, nh = normalize(needle), normalize(haystack)
    if len(nh) <= len(nn):
        return _ratio_normalized(nn, nh)
    if nn and nn in nh:
        return 100
    width = len(nn)
    best = _ratio_normalized(nn, nh)
    for i in range(len(nh) - width + 1):
        window = nh[i:i + width].strip()
        score = _ratio_capped(nn, window, best)
        if score > best:
            best = score
            if best == 100:
                break
    return best


@dataclass(frozen=True)
class MatchSpan:
    """Best-matching token window [start, end) with its 0-100 score."""

    start: int
    end: int
    score: int

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValueError("span must satisfy 0 <= start < end")
        if not 0 <= self.score <= 100:
            raise ValueError("score must be within 0-100")


def _window_candidates(tokens: Sequence[str]) -> list[str]:
    return [t.lower() for t in tokens]


def locate_attribute_span(
    tokens: Sequence[str],
    attribute_value: str,
    min_score: int = DEFAULT_MIN_SCORE,
) -> Optional[MatchSpan]:
    """Best fuzzy-matching token window for an attribute value, or None.

    Scans windows of width 1 to ``min(2k + 2, len(tokens))`` where k is the
    value's token count, scoring the punctuation-stripped window join against
    the value with ``similarity_ratio``. Ties prefer the higher score, then
    the narrower window, then the smaller start index. Returns None when the
    maximum falls below ``min_score`` (absence, not an error).
    """
    target = normalize(attribute_value)
    if not tokens or not target:
        return None
    k = len(tokenize(attribute_value))
    max_width = min(2 * k + 2, len(tokens))
    lowered = _window_candidates(tokens)
    best_score = -1
    best_span: Optional[tuple[int, int]] = None
    for width in range(1, max_width + 1):
        for start in range(0, len(tokens) - width + 1):
            joined = strip_outer_punct(" ".join(lowered[start:start + width]))
            if joined == target:
                score = 100
            else:
                score = _ratio_capped(target, joined, best_score)
            if score > best_score:
                best_score = score
                best_span = (start, start + width)
                if best_score == 100:
                    break
        if best_score == 100:
            break
    if best_span is None or best_score < min_score:
        return None
    return MatchSpan(best_span[0], best_span[1], best_score)


def best_match_score(tokens: Sequence[str], attribute_value: str) -> int:
    """Maximum window score for the value over the text (0 when empty)."""
    span = locate_attribute_span(tokens, attribute_value, min_score=0)
    return span.score if span is not None else 0


def has_exact_window(tokens: Sequence[str], attribute_value: str) -> bool:
    """True when some window join equals the normalized value exactly.

    For values shorter than ~150 characters this is equivalent to a window
    score of 100.
    """
    target = normalize(attribute_value)
    if not tokens or not target:
        return False
    k = len(tokenize(attribute_value))
    max_width = min(2 * k + 2, len(tokens))
    lowered = _window_candidates(tokens)
    for width in range(1, max_width + 1):
        for start in range(0, len(tokens) - width + 1):
            if strip_outer_punct(" ".join(lowered[start:start + width])) == target:
                return True
    return False


def match_score_drops(
    high_tokens: Sequence[str],
    low_tokens: Sequence[str],
    attribute_value: str,
    min_score: int = DEFAULT_MIN_SCORE,
) -> bool:
    """True when the value matches in ``high_tokens`` at or above
    ``min_score`` and strictly worse (or not at all) in ``low_tokens``.

    This is the directional check behind deletion samples (high = draft,
    low = edit) and, mirrored, behind addition samples.
    """
    high = locate_attribute_span(high_tokens, attribute_value, min_score)
    if high is None:
        return False
    if high.score == 100 and len(normalize(attribute_value)) <= _EXACT_SCORE_MAX_LEN:
        # A 100 on the low side would require an exact window; scanning for
        # one is much cheaper than scoring every window.
        return not has_exact_window(low_tokens, attribute_value)
    low = locate_attribute_span(low_tokens, attribute_value, min_score)
    return low is None or low.score < high.score
