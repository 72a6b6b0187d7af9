"""adescope: scope-aware filtering and evaluation for adverse event extraction.

The package combines a rule-based negation/speculation scope detector with
span-level filtering of extractor predictions, relaxed precision/recall
scoring with per-class false positive accounting, and corpus tooling for
the four-class (A/X/N/S) sample format.
"""

from __future__ import annotations

from .baseline import (
    AdeLexicon,
    LexiconExtractor,
    PredictionExtractor,
    default_ade_lexicon,
    extract,
    from_predictions,
    load_ade_lexicon,
)
from .cli import PipelineConfig, main
from .combine import (
    DiscardedSpan,
    EntitySet,
    FilterReport,
    combine,
    filter_by_scopes,
    overlap_length,
    overlaps,
)
from .corpus import (
    CORPUS_HEADER,
    CorpusPartition,
    DistributionReport,
    PredictionFile,
    compose_training_set,
    distribution_report,
    load_corpus,
    load_predictions,
    write_corpus,
    write_predictions,
)
from .errors import AdescopeError, ParseError, ValidationError
from .metrics import (
    MatchKind,
    MatchOutcome,
    MatchReport,
    SampleOutcomes,
    Scores,
    evaluate_corpus,
    match_spans,
    merge_reports,
    relaxed_scores,
    report_to_dict,
    write_report,
)
from .scope import (
    Cue,
    CueCategory,
    CueLexicon,
    CueMatch,
    Phenomenon,
    ScopeConfig,
    ScopeSpan,
    default_negation_lexicon,
    default_speculation_lexicon,
    detect_negation,
    detect_speculation,
    find_cues,
    load_lexicon,
    parse_lexicon,
    prefilter,
    resolve_scopes,
    save_lexicon,
)
from .text import (
    REPORT_CLASS_ORDER,
    LabeledSample,
    RawText,
    SampleClass,
    Span,
    TagSequence,
    Token,
    bio_to_spans,
    spans_to_bio,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "AdeLexicon",
    "AdescopeError",
    "CORPUS_HEADER",
    "CorpusPartition",
    "Cue",
    "CueCategory",
    "CueLexicon",
    "CueMatch",
    "DiscardedSpan",
    "DistributionReport",
    "EntitySet",
    "FilterReport",
    "LabeledSample",
    "LexiconExtractor",
    "MatchKind",
    "MatchOutcome",
    "MatchReport",
    "ParseError",
    "Phenomenon",
    "PipelineConfig",
    "PredictionExtractor",
    "PredictionFile",
    "REPORT_CLASS_ORDER",
    "RawText",
    "SampleClass",
    "SampleOutcomes",
    "ScopeConfig",
    "ScopeSpan",
    "Scores",
    "Span",
    "TagSequence",
    "Token",
    "ValidationError",
    "bio_to_spans",
    "combine",
    "compose_training_set",
    "default_ade_lexicon",
    "default_negation_lexicon",
    "default_speculation_lexicon",
    "detect_negation",
    "detect_speculation",
    "distribution_report",
    "evaluate_corpus",
    "extract",
    "filter_by_scopes",
    "find_cues",
    "from_predictions",
    "load_ade_lexicon",
    "load_corpus",
    "load_lexicon",
    "load_predictions",
    "main",
    "match_spans",
    "merge_reports",
    "overlap_length",
    "overlaps",
    "parse_lexicon",
    "prefilter",
    "relaxed_scores",
    "report_to_dict",
    "resolve_scopes",
    "save_lexicon",
    "spans_to_bio",
    "tokenize",
    "write_corpus",
    "write_predictions",
    "write_report",
]
