"""Noun phrase extraction for Ukrainian dependency treebanks.

Parses CoNLL-U, walks each sentence tree to assemble contiguous noun
phrase spans, optionally merges gazetteer and NER entity spans into them,
and scores predictions against gold annotations in full and partial
matching modes.
"""

from .conllu import (
    ConlluParseError,
    DependencyTree,
    Document,
    Sentence,
    Token,
    TreeStructureError,
    build_tree,
    document_trees,
    parse_conllu,
    parse_documents,
    read_documents,
    to_conllu,
)
from .entities import (
    EntitySpan,
    Gazetteer,
    NerConfig,
    SpanRecordError,
    filter_spans,
    load_external_spans,
    load_gazetteer,
    load_gazetteer_dir,
    match_gazetteer,
    merge_spans,
)
from .evaluation import (
    ConfusionCounts,
    EvaluationError,
    EvaluationRow,
    GoldAnnotation,
    MetricsReport,
    Span,
    baseline_extract,
    evaluate_variants,
    load_gold,
    match_full,
    match_partial,
    metrics,
    predict_variant,
    score,
)
from .extractor import (
    DEFAULT_CONFIG,
    ExtractionConfig,
    NounPhrase,
    extract_document,
    extract_sentence,
    is_potential_head,
    kernel_backend,
    may_join,
)

__version__ = "0.1.0"

__all__ = [
    "ConlluParseError",
    "ConfusionCounts",
    "DEFAULT_CONFIG",
    "DependencyTree",
    "Document",
    "EntitySpan",
    "EvaluationError",
    "EvaluationRow",
    "ExtractionConfig",
    "Gazetteer",
    "GoldAnnotation",
    "MetricsReport",
    "NerConfig",
    "NounPhrase",
    "Sentence",
    "Span",
    "SpanRecordError",
    "Token",
    "TreeStructureError",
    "baseline_extract",
    "build_tree",
    "document_trees",
    "evaluate_variants",
    "extract_document",
    "extract_sentence",
    "filter_spans",
    "is_potential_head",
    "kernel_backend",
    "load_external_spans",
    "load_gazetteer",
    "load_gazetteer_dir",
    "load_gold",
    "match_full",
    "match_gazetteer",
    "match_partial",
    "may_join",
    "merge_spans",
    "metrics",
    "parse_conllu",
    "parse_documents",
    "predict_variant",
    "read_documents",
    "score",
    "to_conllu",
]
