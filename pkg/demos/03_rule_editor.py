"""The deterministic rule editor: deleting and adding attribute content.

Run:  python demos/03_rule_editor.py
"""
from descedit import (
    AttributePair,
    Command,
    Grounding,
    apply_command,
    serialize_model_input,
)

DRAFT = (
    "brass magnetic clasps, column, silver size:about 8mm wide, just add to "
    "the end of your diy bracelets crimp in the hole."
)
SHAPE = AttributePair("shape", "column")
GROUNDING = Grounding("brass magnetic clasps", "jewelry")

print("=== deleting an attribute's content ===")
print("draft:", DRAFT)
deleted = apply_command(DRAFT, SHAPE, Command.DEL, GROUNDING)
print("edit :", deleted.text)

print()
print("=== adding it back ===")
re_added = apply_command(deleted.text, SHAPE, Command.ADD, GROUNDING)
print("edit :", re_added.text)

print()
print("=== additions are idempotent ===")
second = apply_command(re_added.text, SHAPE, Command.ADD, GROUNDING)
print("no-op:", second.noop, f"({second.reason})")

print()
print("=== deleting something that is not there is a flagged no-op ===")
missing = apply_command(DRAFT, AttributePair("material", "titanium"), Command.DEL)
print("no-op:", missing.noop, f"({missing.reason})")

print()
print("=== the flat input form used by sequence models ===")
print(serialize_model_input(SHAPE, Command.DEL, GROUNDING, DRAFT))
