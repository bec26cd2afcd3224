"""Validating the attribute-aware metric against (synthetic) human scores.

Correlates metric scores with noisy human-style judgments via Pearson, with
raw character edit distance as the weak baseline it should beat.

Run:  python demos/05_metric_validation.py
"""
import random

from descedit import attribute_edit_score, char_levenshtein_baseline, pearson

rng = random.Random(3)

# Simulated editing outcomes for an "add the attribute" command: the human
# score tracks how much of the attribute actually made it into the output.
CASES = [
    ("walnut tray", "a walnut tray for the hallway", 5),
    ("walnut tray", "a walnut stand for the hallway", 3),
    ("walnut tray", "a tray for the hallway", 2),
    ("walnut tray", "a stand for the hallway", 1),
    ("crimson strap", "the crimson strap clips on", 5),
    ("crimson strap", "the crimson cord clips on", 3),
    ("crimson strap", "the strap clips on", 2),
    ("crimson strap", "the cord clips on", 1),
    ("silk cover", "a silk cover for the couch", 5),
    ("silk cover", "a soft cover for the couch", 2),
    ("silk cover", "a soft wrap for the couch", 1),
    ("silk cover", "silk cover , fits snugly", 5),
]

human, metric, baseline = [], [], []
for value, output, judgment in CASES:
    human.append(judgment + rng.uniform(-0.3, 0.3))
    metric.append(attribute_edit_score(output, value))
    baseline.append(char_levenshtein_baseline(output, value))

print("value, output -> metric / baseline / human")
for (value, output, _), m, b, h in zip(CASES, metric, baseline, human):
    print(f"  {value!r:18} {output!r:38} -> {m:3d} / {b:3d} / {h:.1f}")

r_metric, p_metric = pearson(human, metric)
r_base, p_base = pearson(human, baseline)
print()
print(f"attribute metric vs human: r = {r_metric:+.3f} (p = {p_metric:.4f})")
print(f"char distance vs human  : r = {r_base:+.3f} (p = {p_base:.4f})")
print()
print("the attribute-aware metric should correlate strongly and positively;")
print("raw character distance has no such alignment.")
