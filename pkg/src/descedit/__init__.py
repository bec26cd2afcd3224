"""descedit: a corpus toolkit for command-driven product-description editing.

Synthesizes draft-command-edit training pairs from product records (masking
plus blank filling, or rule-based deletions), executes add/delete commands
with a deterministic editor, and scores any editor's outputs with an
attribute-aware metric alongside BLEU and ROUGE.
"""
from .augment import (
    AugmentReport,
    AugmentResult,
    MaskedInstance,
    MaskPolicy,
    PolicyMix,
    TfidfModel,
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
from .corpus import (
    AttributePair,
    Command,
    CorpusFormatError,
    CorpusStats,
    EditRequest,
    EditSample,
    Grounding,
    ProductRecord,
    Provenance,
    check_direction,
    compute_stats,
    read_jsonl,
    read_requests_jsonl,
    swap_to_add,
    write_jsonl,
)
from .editor import EditResult, apply_command, parse_model_input, serialize_model_input
from .evaluation import (
    MetricReport,
    attribute_edit_score,
    bleu4,
    char_levenshtein_baseline,
    combine_all,
    evaluate,
    pearson,
    rouge_scores,
)
from .filler import (
    FillConstraint,
    NgramLmFiller,
    NgramModel,
    RemovalFiller,
    TemplateFiller,
    constraint_for_value,
    fill,
    ngram_train,
)
from .text import FILL_TOKEN, SEP_TOKEN, detokenize, normalize, tokenize
from .textmetrics import (
    MatchSpan,
    levenshtein,
    locate_attribute_span,
    partial_ratio,
    similarity_ratio,
)

__version__ = "0.1.0"
