"""Metric suite: attribute scoring, combiner, BLEU, ROUGE, and Pearson."""
from __future__ import annotations

import math
import random

import numpy as np
import pytest

from descedit.corpus import (
    AttributePair,
    Command,
    EditSample,
    Grounding,
    Provenance,
)
from descedit.evaluation import (
    attribute_edit_score,
    bleu4,
    char_levenshtein_baseline,
    combine_all,
    evaluate,
    pearson,
    rouge_scores,
)

HYBRIDS_DRAFT = (
    "brand new aftermarket adapter for taylormade hybrids, they have 1.5 "
    "degrees of loft adjustment."
)
HYBRIDS_EDIT = (
    "brand new aftermarket adapter, they have 1.5 degrees of loft adjustment."
)


class TestAttributeEditScore:
    def test_exact_substring_scores_100(self):
        assert attribute_edit_score("the red mug sits here", "red mug") == 100

    def test_empty_output_scores_0(self):
        assert attribute_edit_score("", "red mug") == 0

    def test_deleted_value_scores_lower(self):
        before = attribute_edit_score(HYBRIDS_DRAFT, "hybrids")
        after = attribute_edit_score(HYBRIDS_EDIT, "hybrids")
        assert before == 100
        assert after < before

    def test_empty_value_rejected(self):
        with pytest.raises(ValueError, match="value non-empty"):
            attribute_edit_score("anything", "  ")


class TestCombineAll:
    # (add mean, del mean, published combined score) for seven systems; the
    # third row is a known transcription inconsistency in its source table.
    TABLE = [
        (56.32, 55.57, 0.37),
        (58.47, 90.00, -15.76),
        (59.33, 87.60, -14.43),
        (61.72, 85.77, -12.03),
        (61.08, 87.24, -13.08),
        (61.24, 85.97, -12.36),
        (87.29, 58.09, 14.60),
    ]

    def test_consistent_rows_within_a_cent(self):
        for i, (add_mean, del_mean, printed) in enumerate(self.TABLE):
            if i == 2:
                continue
            assert abs(combine_all(add_mean, del_mean) - printed) <= 0.01

    def test_inconsistent_row_is_close_but_not_exact(self):
        add_mean, del_mean, printed = self.TABLE[2]
        value = combine_all(add_mean, del_mean)
        assert abs(value - printed) > 0.01
        assert abs(value - printed) <= 0.35

    def test_antisymmetric_under_swap(self):
        assert combine_all(30.0, 70.0) == -combine_all(70.0, 30.0)

    def test_known_midpoint(self):
        assert combine_all(87.29, 58.09) == pytest.approx(14.60)


class TestBleu:
    def test_identity_scores_100(self):
        pairs = ["the cat sat on the mat", "a red mug", "soft linen cover"]
        assert bleu4(pairs, pairs) == pytest.approx(100.0)

    def test_disjoint_tokens_score_0(self):
        assert bleu4(["aa bb cc dd ee"], ["vv ww xx yy zz"]) == 0.0

    def test_hand_computed_truncation_case(self):
        # hyp = ref minus final token: all clipped precisions are 1, so only
        # the brevity penalty remains: 100 * exp(1 - 6/5).
        hyp = ["the cat sat on the"]
        ref = ["the cat sat on the mat"]
        expected = 100 * math.exp(1 - 6 / 5)
        assert bleu4(hyp, ref) == pytest.approx(expected, abs=1e-9)

    def test_smoothing_floor_can_be_enabled(self):
        hyp, ref = ["aa bb cc dd ee"], ["vv ww xx yy zz"]
        assert bleu4(hyp, ref, smooth_eps=1e-9) > 0.0 or bleu4(hyp, ref) == 0.0
        assert bleu4(hyp, ref, smooth_eps=0.1) > 0.0

    def test_permutation_invariant(self):
        hyps = ["a b c", "d e f g", "h i"]
        refs = ["a b d", "d e f f", "h j"]
        order = [2, 0, 1]
        assert bleu4(hyps, refs) == pytest.approx(
            bleu4([hyps[i] for i in order], [refs[i] for i in order])
        )

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            bleu4([], [])

    def test_misaligned_corpora_rejected(self):
        with pytest.raises(ValueError, match="align"):
            bleu4(["a"], ["a", "b"])


class TestRouge:
    def test_identity_scores_100(self):
        pairs = ["the cat sat on the mat", "a red mug"]
        assert rouge_scores(pairs, pairs) == pytest.approx((100.0, 100.0, 100.0))

    def test_disjoint_tokens_score_0(self):
        assert rouge_scores(["aa bb cc"], ["xx yy zz"]) == pytest.approx((0.0, 0.0, 0.0))

    def test_hand_computed_overlap(self):
        # unigrams: 3 shared of 4+3 -> 2*3/7; bigrams: {"c d"} of 3+2 -> 2/5;
        # LCS "a c d" (3) of 4+3 -> 6/7.
        r1, r2, rl = rouge_scores(["a b c d"], ["a c d"])
        assert r1 == pytest.approx(600 / 7, abs=0.01)
        assert r2 == pytest.approx(40.0, abs=0.01)
        assert rl == pytest.approx(600 / 7, abs=0.01)

    def test_permutation_invariant(self):
        hyps = ["a b c", "d e f g", "h i"]
        refs = ["a b d", "d e f f", "h j"]
        order = [1, 2, 0]
        assert rouge_scores(hyps, refs) == pytest.approx(
            rouge_scores([hyps[i] for i in order], [refs[i] for i in order])
        )


class TestCharBaseline:
    def test_identity(self):
        assert char_levenshtein_baseline("abc", "abc") == 0

    def test_insertions(self):
        assert char_levenshtein_baseline("", "ab") == 2

    def test_classic_pair(self):
        assert char_levenshtein_baseline("kitten", "sitting") == 3

    def test_no_case_normalization(self):
        assert char_levenshtein_baseline("ABC", "abc") == 3


class TestPearson:
    def test_closed_form_value(self):
        # n*Sxy - SxSy = 50; denominators 50 and 74 -> r = 50 / sqrt(3700)
        r, p = pearson([1, 2, 3, 4, 5], [2, 1, 4, 3, 6])
        assert r == pytest.approx(50 / math.sqrt(3700), abs=1e-12)
        assert 0 < p < 0.1

    def test_perfect_positive(self):
        r, p = pearson([1, 2, 3, 4], [10, 20, 30, 40])
        assert r == pytest.approx(1.0)
        assert p == pytest.approx(0.0, abs=1e-12)

    def test_perfect_negative(self):
        r, _ = pearson([1, 2, 3], [-1, -2, -3])
        assert r == pytest.approx(-1.0)

    def test_affine_invariance(self):
        rng = np.random.default_rng(1234)
        for _ in range(20):
            x = rng.normal(size=50)
            y = rng.normal(size=50)
            r_base, _ = pearson(x, y)
            r_shift, _ = pearson(x, 3.5 * y + 11.0)
            r_scale, _ = pearson(0.25 * x - 2.0, y)
            assert abs(r_shift - r_base) < 1e-12
            assert abs(r_scale - r_base) < 1e-12

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError, match="undefined correlation"):
            pearson([1, 1, 1], [1, 2, 3])

    def test_short_input_rejected(self):
        with pytest.raises(ValueError, match="at least 3"):
            pearson([1, 2], [3, 4])

    def test_p_value_shrinks_with_stronger_correlation(self):
        _, p_weak = pearson([1, 2, 3, 4, 5], [2, 1, 4, 3, 6])
        _, p_strong = pearson([1, 2, 3, 4, 5], [1.1, 2.0, 3.2, 3.9, 5.1])
        assert p_strong < p_weak


def _mini_corpus() -> tuple[list[EditSample], list[str]]:
    grounding = Grounding("demo item", "home")
    samples = [
        EditSample(
            AttributePair("color", "crimson"), Command.DEL, grounding,
            "the crimson strap holds firm . ships fast .",
            "the strap holds firm . ships fast .",
            Provenance.HUMAN,
        ),
        EditSample(
            AttributePair("material", "walnut"), Command.ADD, grounding,
            "a tray for the table . packed well .",
            "a walnut tray for the table . packed well .",
            Provenance.HUMAN,
        ),
        EditSample(
            AttributePair("style", "nordic"), Command.DEL, grounding,
            "a nordic lamp shade . fits most stands .",
            "a lamp shade . fits most stands .",
            Provenance.HUMAN,
        ),
    ]
    return samples, [s.edit for s in samples]


class TestEvaluate:
    def test_gold_as_output_maxes_fluency(self):
        samples, outputs = _mini_corpus()
        report = evaluate(samples, outputs)
        assert report.bleu4 == pytest.approx(100.0)
        assert report.rouge1 == pytest.approx(100.0)
        assert report.rougeL == pytest.approx(100.0)
        assert report.del_score < report.add_score
        assert report.all_score == pytest.approx(
            combine_all(report.add_score, report.del_score)
        )
        assert report.sample_counts == {"[ADD]": 1, "[DEL]": 2}

    def test_unchanged_drafts_leave_deletions_high(self):
        samples, _ = _mini_corpus()
        report = evaluate(samples, [s.draft for s in samples])
        assert report.del_score == pytest.approx(100.0)

    def test_missing_command_class_reports_none(self):
        samples, outputs = _mini_corpus()
        deletions = [s for s in samples if s.command is Command.DEL]
        report = evaluate(deletions, [s.edit for s in deletions])
        assert report.add_score is None
        assert report.all_score is None
        assert report.del_score is not None

    def test_misalignment_rejected_with_counts(self):
        samples, outputs = _mini_corpus()
        with pytest.raises(ValueError, match="3 samples, outputs has 2"):
            evaluate(samples, outputs[:2])

    def test_report_table_renders(self):
        samples, outputs = _mini_corpus()
        table = evaluate(samples, outputs).format_table()
        assert "BLEU-4" in table and "ROUGE-L" in table

    def test_report_round_trips_to_dict(self):
        samples, outputs = _mini_corpus()
        payload = evaluate(samples, outputs).as_dict()
        assert set(payload["attribute_edit"]) == {"add", "del", "all"}


class TestDirectionProperty:
    def test_deletion_scores_never_rise_on_valid_samples(self):
        rng = random.Random(5)
        vocab = [f"it{i:02d}" for i in range(60)]
        for _ in range(50):
            value = rng.choice(vocab)
            others = rng.sample([w for w in vocab if w != value], 8)
            draft = f"the {value} {others[0]} sits with {others[1]} . {' '.join(others[2:])} ."
            edit = draft.replace(f"the {value} ", "the ", 1)
            assert attribute_edit_score(edit, value) < attribute_edit_score(draft, value)
