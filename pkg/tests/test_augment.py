"""Masking policies, rule-based deletions, and the pair builder."""
from __future__ import annotations

import math
import random
from collections import Counter

import pytest

from descedit.augment import (
    COORDINATING_CONJUNCTIONS,
    MaskPolicy,
    PolicyMix,
    augment_corpus,
    build_pairs,
    mask_attribute_phrase,
    mask_conjunction_clause,
    mask_random_phrase,
    mask_token_level,
    rule_delete_adjective,
    rule_delete_sentence,
    tfidf_fit,
    tfidf_top_token,
)
from descedit.corpus import (
    AttributePair,
    Command,
    ProductRecord,
    Provenance,
    check_direction,
    swap_to_add,
    write_jsonl,
)
from descedit.filler import RemovalFiller
from descedit.text import FILL_TOKEN, default_adjectives, default_stopwords, tokenize
from synthdata import make_records

STOPWORDS = default_stopwords()
ADJECTIVES = default_adjectives()


def record(description: str, attributes=(), record_id="r1") -> ProductRecord:
    return ProductRecord(record_id, "test item", "home", tuple(attributes), description)


class TestTfidf:
    def test_single_document_counts_presence_once(self):
        model = tfidf_fit([record("a b b")])
        assert model.document_frequency == {"a": 1, "b": 1}
        assert model.document_count == 1

    def test_token_in_every_document(self):
        model = tfidf_fit([record(f"common w{i}") for i in range(4)])
        assert model.document_frequency["common"] == 4

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            tfidf_fit([])

    def test_matches_brute_force_on_toy_corpus(self):
        rng = random.Random(3)
        vocab = [f"tok{i}" for i in range(30)]
        docs = [record(" ".join(rng.choice(vocab) for _ in range(12)), record_id=f"d{i}")
                for i in range(20)]
        model = tfidf_fit(docs)
        for doc in docs:
            tokens = tokenize(doc.description)
            counts = Counter(t.lower() for t in tokens)
            scores = [
                counts[t.lower()] * math.log(20 / model.document_frequency[t.lower()])
                for t in tokens
            ]
            expected = max(range(len(tokens)), key=lambda i: (scores[i], -i))
            assert tfidf_top_token(tokens, model, STOPWORDS) == expected

    def test_rare_token_wins(self):
        docs = [record("shared words here", record_id=f"d{i}") for i in range(4)]
        docs.append(record("shared words unique", record_id="d4"))
        model = tfidf_fit(docs)
        tokens = tokenize(docs[-1].description)
        assert tokens[tfidf_top_token(tokens, model, STOPWORDS)] == "unique"

    def test_all_stopwords_is_an_error(self):
        model = tfidf_fit([record("the of and")])
        with pytest.raises(ValueError, match="no maskable token"):
            tfidf_top_token(tokenize("the of and"), model, STOPWORDS)

    def test_document_frequencies_stay_in_range(self):
        records = make_records(25, seed=19)
        model = tfidf_fit(records)
        assert all(
            1 <= df <= model.document_count
            for df in model.document_frequency.values()
        )


class TestMaskOps:
    def test_token_level_masks_one_token(self):
        docs = [record("shared words here", record_id=f"d{i}") for i in range(3)]
        target = record("shared words sparkle", record_id="d3")
        instance = mask_token_level(target, tfidf_fit(docs + [target]), STOPWORDS)
        assert instance.removed_span == ("sparkle",)
        assert instance.policy is MaskPolicy.TFIDF_TOKEN
        assert list(instance.reconstruct()) == tokenize(target.description)

    def test_random_phrase_needs_six_tokens(self):
        with pytest.raises(ValueError, match="too short"):
            mask_random_phrase(record("one two three four five"), random.Random(0))

    def test_random_phrase_deterministic(self):
        target = record(" ".join(f"w{i}" for i in range(20)))
        first = mask_random_phrase(target, random.Random(99))
        second = mask_random_phrase(target, random.Random(99))
        assert first == second
        assert 2 <= len(first.removed_span) <= 5
        assert list(first.reconstruct()) == tokenize(target.description)

    def test_random_phrase_length_distribution_uniform(self):
        target = record(" ".join(f"w{i}" for i in range(20)))
        counts = Counter(
            len(mask_random_phrase(target, random.Random(i)).removed_span)
            for i in range(10_000)
        )
        for length in (2, 3, 4, 5):
            assert abs(counts[length] / 10_000 - 0.25) < 0.02

    def test_conjunction_clause_simple(self):
        instance = mask_conjunction_clause(record("waterproof and durable ."), random.Random(0))
        assert instance.removed_span == ("and", "durable")
        assert instance.masked_text == ("waterproof", FILL_TOKEN, ".")

    def test_no_conjunction_is_absent(self):
        assert mask_conjunction_clause(record("great quality ."), random.Random(0)) is None

    def test_conjunction_choice_deterministic(self):
        target = record("light and warm and cozy for winter .")
        picks = {mask_conjunction_clause(target, random.Random(5)).removed_span
                 for _ in range(10)}
        assert len(picks) == 1

    def test_conjunction_never_removes_first_clause(self):
        target = record("light and warm and cozy .")
        for seed in range(30):
            instance = mask_conjunction_clause(target, random.Random(seed))
            assert instance.masked_text[0] == "light"
            assert instance.removed_span[0].lower() in COORDINATING_CONJUNCTIONS

    def test_attribute_phrase_single_word(self):
        target = record(
            "brass magnetic clasps, column, silver size:about 8mm wide, just add "
            "to the end of your diy bracelets crimp in the hole."
        )
        instance = mask_attribute_phrase(target, AttributePair("shape", "column"))
        assert instance.removed_span == ("column",)
        assert list(instance.reconstruct()) == tokenize(target.description)

    def test_attribute_phrase_two_words(self):
        target = record(
            "you will receive green-apple flavor a must have for braces, package "
            "including : 10 boxes ortho wax."
        )
        instance = mask_attribute_phrase(target, AttributePair("flavor", "green-apple flavor"))
        assert instance.removed_span == ("green-apple", "flavor")

    def test_attribute_absent_gives_none(self):
        assert mask_attribute_phrase(record("plain words only ."), AttributePair("x", "zzzzz")) is None

    def test_reconstruction_across_policies(self):
        records = make_records(40, seed=21)
        model = tfidf_fit(records)
        for rec in records:
            tokens = tokenize(rec.description)
            instances = [
                mask_token_level(rec, model, STOPWORDS),
                mask_conjunction_clause(rec, random.Random(rec.id)),
                mask_attribute_phrase(rec, rec.attributes[0]),
                mask_random_phrase(rec, random.Random(rec.id)),
            ]
            for instance in instances:
                if instance is None:
                    continue
                assert instance.masked_text.count(FILL_TOKEN) == 1
                assert list(instance.reconstruct()) == tokens


class TestRuleDeletions:
    def test_deletes_single_attribute_sentence(self):
        target = record(
            "we have our own button factory to produce all kinds of buttons. "
            "bulk order have more discount. "
            "item description: plastic stoppers: 24mm width * 23mm height.",
            attributes=[
                AttributePair("product type", "stopper"),
                AttributePair("material", "button"),
            ],
        )
        sample = rule_delete_sentence(target, target.attributes[0])
        assert sample is not None
        assert sample.command is Command.DEL
        assert sample.provenance is Provenance.RULE_SENTENCE
        assert tokenize(sample.edit) == tokenize(
            "we have our own button factory to produce all kinds of buttons. "
            "bulk order have more discount."
        )

    def test_blocked_when_sentence_shares_attributes(self):
        target = record(
            "the crimson strap holds the walnut case . ships fast .",
            attributes=[
                AttributePair("color", "crimson"),
                AttributePair("material", "walnut"),
            ],
        )
        assert rule_delete_sentence(target, target.attributes[0]) is None

    def test_single_sentence_description_never_emptied(self):
        target = record(
            "the crimson strap .",
            attributes=[AttributePair("color", "crimson")],
        )
        assert rule_delete_sentence(target, target.attributes[0]) is None

    def test_adjective_span_deleted(self):
        target = record(
            "a waterproof case for hiking trips .",
            attributes=[AttributePair("feature", "waterproof")],
        )
        sample = rule_delete_adjective(target, target.attributes[0], ADJECTIVES)
        assert sample is not None
        assert sample.provenance is Provenance.RULE_ADJECTIVE
        assert tokenize(sample.edit) == tokenize("a case for hiking trips .")

    def test_non_adjective_value_is_absent(self):
        target = record(
            "a usb charger for travel .",
            attributes=[AttributePair("item", "usb charger")],
        )
        assert rule_delete_adjective(target, target.attributes[0], ADJECTIVES) is None

    def test_preceding_comma_absorbed(self):
        target = record(
            "soft , comfortable pillow for your sofa .",
            attributes=[AttributePair("feel", "comfortable")],
        )
        sample = rule_delete_adjective(target, target.attributes[0], ADJECTIVES)
        assert sample is not None
        assert tokenize(sample.edit) == tokenize("soft pillow for your sofa .")


class TestPolicyMix:
    def test_fractions_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum to 1"):
            PolicyMix(0.5, 0.5, 0.5, 0.5)

    def test_fractions_must_be_non_negative(self):
        with pytest.raises(ValueError, match="non-negative"):
            PolicyMix(1.5, -0.5, 0.0, 0.0)


class TestBuildPairs:
    def test_forced_attribute_policy_builds_deletion_pairs(self):
        records = make_records(30, seed=4, dual_fraction=0.0)
        mix = PolicyMix(0.0, 1.0, 0.0, 0.0, seed=17)
        result = augment_corpus(records, mix, RemovalFiller())
        deletions = [s for s in result.samples if s.command is Command.DEL]
        assert deletions
        for sample in deletions:
            value = sample.attribute.value.lower()
            assert value in sample.draft.lower()
            assert value not in sample.edit.lower()
            assert check_direction(sample)

    def test_every_deletion_is_followed_by_its_swap(self):
        records = make_records(25, seed=12)
        samples = build_pairs(records, PolicyMix(seed=3), RemovalFiller())
        assert len(samples) % 2 == 0
        for deletion, addition in zip(samples[::2], samples[1::2]):
            assert deletion.command is Command.DEL
            assert addition == swap_to_add(deletion)

    def test_records_without_attributes_are_skipped(self):
        records = [
            record("a plain tray for the table . simple and sturdy .", record_id="bare"),
            record(
                "the walnut tray for the table . light and sturdy .",
                attributes=[AttributePair("material", "walnut")],
                record_id="ok",
            ),
        ]
        result = augment_corpus(records, PolicyMix(seed=1), RemovalFiller())
        assert result.report.skipped_no_attributes == 1
        assert result.report.samples_written == len(result.samples) == 2

    def test_same_seed_twice_is_byte_identical(self, tmp_path):
        records = make_records(40, seed=9)
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_jsonl(build_pairs(records, PolicyMix(seed=5), RemovalFiller()), first)
        write_jsonl(build_pairs(records, PolicyMix(seed=5), RemovalFiller()), second)
        assert first.read_bytes() == second.read_bytes()

    def test_policy_fractions_converge(self):
        records = make_records(3000, seed=6)
        result = augment_corpus(records, PolicyMix(seed=2), RemovalFiller())
        total = result.report.samples_written
        expected = {
            "token_level": 0.50,
            "attribute_based": 0.25,
            "conjunction_based": 0.15,
            "random": 0.10,
        }
        for policy, fraction in expected.items():
            realized = result.report.policy_counts.get(policy, 0) / total
            assert abs(realized - fraction) < 0.03, (policy, realized)

    def test_counts_sum_to_samples(self):
        records = make_records(60, seed=13)
        result = augment_corpus(records, PolicyMix(seed=8), RemovalFiller())
        assert sum(result.report.policy_counts.values()) == result.report.samples_written
        assert sum(result.report.provenance_counts.values()) == result.report.samples_written

    def test_workers_do_not_change_output(self):
        records = make_records(30, seed=14)
        serial = build_pairs(records, PolicyMix(seed=4), RemovalFiller())
        parallel = build_pairs(records, PolicyMix(seed=4), RemovalFiller(), workers=2)
        assert serial == parallel
