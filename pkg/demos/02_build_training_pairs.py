"""Synthesizing draft-command-edit pairs from a handful of product records.

Shows the four masking policies, blank filling, and the full pair builder
with its run counters.

Run:  python demos/02_build_training_pairs.py
"""
import random

from descedit import (
    AttributePair,
    PolicyMix,
    ProductRecord,
    augment_corpus,
    mask_attribute_phrase,
    mask_conjunction_clause,
    mask_random_phrase,
    mask_token_level,
    tfidf_fit,
)
from descedit.filler import NgramLmFiller, RemovalFiller, ngram_train
from descedit.text import default_stopwords

RECORDS = [
    ProductRecord(
        "demo-001",
        "brass magnetic clasps",
        "jewelry",
        (AttributePair("shape", "column"), AttributePair("color", "silver")),
        "brass magnetic clasps, column, silver size:about 8mm wide. just add "
        "to the end of your diy bracelets. lightweight and sturdy for daily wear.",
    ),
    ProductRecord(
        "demo-002",
        "ortho wax pack",
        "health",
        (AttributePair("flavor", "green-apple flavor"),),
        "you will receive green-apple flavor a must have for braces. package "
        "including : 10 boxes ortho wax. smooth and gentle on brackets.",
    ),
    ProductRecord(
        "demo-003",
        "charging data cable",
        "electronics",
        (AttributePair("model", "nintendo switch"),),
        "charging data cable for nintendo switch type c usb charger. braided "
        "cover resists tangles and fraying. 1pcs x charging cable.",
    ),
]

print("=== masking policies on one record ===")
record = RECORDS[0]
model = tfidf_fit(RECORDS)
rng = random.Random(7)
shown = [
    ("attribute phrase", mask_attribute_phrase(record, record.attributes[0])),
    ("top tf-idf token", mask_token_level(record, model, default_stopwords())),
    ("conjunction clause", mask_conjunction_clause(record, rng)),
    ("random phrase", mask_random_phrase(record, rng)),
]
for label, instance in shown:
    if instance is None:
        print(f"{label:>18}: not applicable")
        continue
    print(f"{label:>18}: removed {' '.join(instance.removed_span)!r}")

print()
print("=== the full pair builder ===")
mix = PolicyMix(token_level=0.25, attribute_based=0.45, conjunction_based=0.15,
                random=0.15, seed=42)
ngram_filler = NgramLmFiller(ngram_train([r.description for r in RECORDS], order=3))
result = augment_corpus(RECORDS, mix, ngram_filler)
print(f"emitted {result.report.samples_written} samples "
      f"(policy counts: {result.report.policy_counts})")
for sample in result.samples:
    print()
    print(f"[{sample.command.value}] {sample.attribute.render()}  "
          f"({sample.provenance.value})")
    print(f"  draft: {sample.draft}")
    print(f"  edit : {sample.edit}")

print()
print("=== determinism: the same seed reproduces the run ===")
again = augment_corpus(RECORDS, mix, ngram_filler)
print("identical outputs:", result.samples == again.samples)

print()
print("=== removal filler as a comparison ===")
removal = augment_corpus(RECORDS, mix, RemovalFiller())
print(f"removal-filler run emitted {removal.report.samples_written} samples")
