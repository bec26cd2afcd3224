"""Fuzzy matching basics: edit distance, similarity ratios, and locating an
attribute's value inside a product description.

Run:  python demos/01_fuzzy_matching.py
"""
from descedit import (
    levenshtein,
    locate_attribute_span,
    partial_ratio,
    similarity_ratio,
    tokenize,
)

print("=== character-level edit distance ===")
for a, b in [("kitten", "sitting"), ("column", "colum"), ("brass", "brass")]:
    print(f"levenshtein({a!r}, {b!r}) = {levenshtein(a, b)}")

print()
print("=== similarity on 0-100 ===")
pairs = [
    ("column", "column"),
    ("Green-Apple", "green-apple"),
    ("stopper", "stoppers"),
    ("abcd", "wxyz"),
]
for a, b in pairs:
    print(f"similarity_ratio({a!r}, {b!r}) = {similarity_ratio(a, b)}")

print()
print("=== short needle inside a long description ===")
description = "you will receive green-apple flavor a must have for braces"
for needle in ["green-apple", "green apple flavor", "strawberry"]:
    print(f"partial_ratio({needle!r}, description) = {partial_ratio(needle, description)}")

print()
print("=== locating the best token span for an attribute ===")
text = "brass magnetic clasps, column, silver size:about 8mm wide"
tokens = tokenize(text)
print("tokens:", tokens)
for value in ["column", "silver 8mm", "gold"]:
    span = locate_attribute_span(tokens, value, min_score=60)
    if span is None:
        print(f"{value!r}: no span clears the threshold")
    else:
        window = " ".join(tokens[span.start:span.end])
        print(f"{value!r}: tokens[{span.start}:{span.end}] = {window!r} (score {span.score})")
