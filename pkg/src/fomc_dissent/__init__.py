"""Hawk/dove sentiment and dissent measures for FOMC meeting documents."""

from fomc_dissent.labels import Label
from fomc_dissent.corpus import Corpus, DocumentKind, RawDocument, load_corpus, validate_alignment
from fomc_dissent.textparse import aggregate_by_speaker, partition_transcript, segment_sentences
from fomc_dissent.classify import (
    Granularity,
    ScoredUnit,
    Unit,
    build_prompt,
    classify_units,
    parse_label,
)
from fomc_dissent.backends import MockBackend, HttpBackend, mock_classify
from fomc_dissent.cache import Cache
from fomc_dissent.score import logit_score, mean_score, meeting_series
from fomc_dissent.dissent import detect_dissent, dissent_report
from fomc_dissent.negativity import negativity_score, negative_fraction_by_topic
from fomc_dissent.evaluation import f1_macro

__version__ = "0.1.0"

__all__ = [
    "Label",
    "Corpus",
    "DocumentKind",
    "RawDocument",
    "load_corpus",
    "validate_alignment",
    "partition_transcript",
    "aggregate_by_speaker",
    "segment_sentences",
    "Granularity",
    "Unit",
    "ScoredUnit",
    "build_prompt",
    "parse_label",
    "classify_units",
    "MockBackend",
    "HttpBackend",
    "mock_classify",
    "Cache",
    "mean_score",
    "logit_score",
    "meeting_series",
    "detect_dissent",
    "dissent_report",
    "negativity_score",
    "negative_fraction_by_topic",
    "f1_macro",
]
