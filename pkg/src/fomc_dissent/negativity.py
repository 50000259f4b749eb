"""Lexicon-based negativity of transcript sentences, per topic span.

The score of a sentence is the share of its valence mass that is
negative: the sum of |valence| over negative tokens divided by the sum of
|valence| over all tokens found in the lexicon. Tokens not in the lexicon
count for nothing; a sentence with no lexicon tokens scores 0.

This deliberately leaves out VADER's heuristics (negation flips, boosters,
capitalisation), so any valence lexicon in VADER's file layout can be used
while scores stay a pure function of (sentence, lexicon).
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from fomc_dissent.corpus import DocumentKind, RawDocument
from fomc_dissent.textparse import split_sentences, split_turns

DEFAULT_THRESHOLD = 0.1
DEFAULT_SWEEP = (0.05, 0.1, 0.15)
ALL_TOPICS = "ALL"

_TOKEN = re.compile(r"[a-z]+(?:'[a-z]+)?")


class SpanError(ValueError):
    pass


def parse_lexicon(text: str) -> dict[str, float]:
    lex = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        lex[parts[0].strip().lower()] = float(parts[1])
    return lex


def load_lexicon(path: str | Path | None = None) -> dict[str, float]:
    """Load ``token<TAB>valence`` lines; defaults to the shipped mini-lexicon."""
    if path is None:
        text = resources.files("fomc_dissent").joinpath("data/negativity_lexicon.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_lexicon(text)


DEFAULT_LEXICON = load_lexicon()


def negativity_score(sentence: str, lexicon: Mapping[str, float] | None = None) -> float:
    lexicon = DEFAULT_LEXICON if lexicon is None else lexicon
    neg = total = 0.0
    for tok in _TOKEN.findall(sentence.lower()):
        v = lexicon.get(tok)
        if not v:
            continue
        total += abs(v)
        if v < 0:
            neg += -v
    if total == 0:
        return 0.0
    return min(1.0, neg / total)


@dataclass(frozen=True)
class TopicSpan:
    """Lines ``[start_line, end_line)`` of a transcript, 0-based."""

    topic: str
    start_line: int
    end_line: int


def load_spans(path: str | Path) -> list[TopicSpan]:
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    return [TopicSpan(r["topic"], int(r["start_line"]), int(r["end_line"])) for r in rows]


def check_spans(spans: Sequence[TopicSpan], n_lines: int) -> None:
    seen = set()
    for s in spans:
        if s.topic in seen:
            raise SpanError(f"duplicate topic name {s.topic!r}")
        seen.add(s.topic)
        if not 0 <= s.start_line <= s.end_line <= n_lines:
            raise SpanError(
                f"topic {s.topic!r}: lines [{s.start_line}, {s.end_line}) outside document of {n_lines} lines"
            )
    ordered = sorted(spans, key=lambda s: s.start_line)
    for a, b in zip(ordered, ordered[1:]):
        if b.start_line < a.end_line:
            raise SpanError(f"topics {a.topic!r} and {b.topic!r} overlap")


@dataclass(frozen=True)
class NegativityResult:
    topic: str
    n_sentences: int
    n_negative: int
    n_speakers: int
    threshold: float
    speakers: frozenset = field(default=frozenset(), compare=False)

    @property
    def fraction_negative(self) -> float | None:
        return self.n_negative / self.n_sentences if self.n_sentences else None


@dataclass(frozen=True)
class _SpanText:
    sentences: tuple[str, ...]
    speakers: frozenset


def _span_texts(doc: RawDocument, spans: Sequence[TopicSpan]) -> dict[str, _SpanText]:
    """Sentences and speakers of each span, with speaker tags removed."""
    text = doc.text
    lines = text.split("\n")
    check_spans(spans, len(lines))
    offsets = [0]
    for line in lines:
        offsets.append(offsets[-1] + len(line) + 1)
    offsets[-1] = len(text)

    turns = split_turns(text)
    # Pieces of text with their speaker (None for front matter).
    regions = []
    if not turns:
        regions.append((0, len(text), 0, None))
    else:
        if turns[0].start:
            regions.append((0, turns[0].start, 0, None))
        for t in turns:
            regions.append((t.start, t.end, len(t.tag), t.speaker))

    out = {}
    for span in spans:
        lo, hi = offsets[span.start_line], offsets[span.end_line]
        sentences: list[str] = []
        speakers = set()
        for start, end, tag_len, speaker in regions:
            a = max(lo, start)
            if start >= lo:
                a = max(a, start + tag_len)
            b = min(hi, end)
            if a >= b:
                continue
            piece = text[a:b]
            if not piece.strip():
                continue
            if speaker is not None:
                speakers.add(speaker)
            sentences.extend(split_sentences(piece))
        out[span.topic] = _SpanText(tuple(sentences), frozenset(speakers))
    return out


def _result(topic, sentences, speakers, threshold, lexicon) -> NegativityResult:
    n_neg = sum(1 for s in sentences if negativity_score(s, lexicon) >= threshold)
    return NegativityResult(topic, len(sentences), n_neg, len(speakers), threshold, frozenset(speakers))


def negative_fraction_by_topic(
    doc: RawDocument,
    spans: Sequence[TopicSpan],
    threshold: float = DEFAULT_THRESHOLD,
    lexicon: Mapping[str, float] | None = None,
) -> list[NegativityResult]:
    """Count sentences scoring at or above ``threshold`` in each topic span.

    ``n_speakers`` is the number of distinct speakers with text in the span,
    including one whose turn began before the span.
    """
    if doc.kind is not DocumentKind.TRANSCRIPT:
        raise ValueError(f"expected a transcript, got {doc.kind.value}")
    lexicon = DEFAULT_LEXICON if lexicon is None else lexicon
    texts = _span_texts(doc, spans)
    return [
        _result(s.topic, texts[s.topic].sentences, texts[s.topic].speakers, threshold, lexicon)
        for s in spans
    ]


def overall(results: Sequence[NegativityResult]) -> NegativityResult:
    """The all-topics row: pooled sentence counts and the union of speakers."""
    if len({r.threshold for r in results}) > 1:
        raise ValueError("results mix thresholds")
    speakers = frozenset().union(*(r.speakers for r in results))
    return NegativityResult(
        ALL_TOPICS,
        sum(r.n_sentences for r in results),
        sum(r.n_negative for r in results),
        len(speakers),
        results[0].threshold if results else DEFAULT_THRESHOLD,
        speakers,
    )


def threshold_sweep(
    doc: RawDocument,
    spans: Sequence[TopicSpan],
    thresholds: Iterable[float] = DEFAULT_SWEEP,
    lexicon: Mapping[str, float] | None = None,
) -> list[NegativityResult]:
    """Per-topic rows plus an ``ALL`` row for every threshold."""
    rows = []
    for th in thresholds:
        res = negative_fraction_by_topic(doc, spans, th, lexicon)
        rows.extend(res)
        rows.append(overall(res))
    return rows


NEGATIVITY_FIELDS = ["topic", "n_sentences", "n_negative", "fraction_negative", "n_speakers", "threshold"]


def write_negativity_csv(rows: Iterable[NegativityResult], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(NEGATIVITY_FIELDS)
        for r in rows:
            frac = r.fraction_negative
            w.writerow([
                r.topic, r.n_sentences, r.n_negative,
                "" if frac is None else repr(frac), r.n_speakers, repr(r.threshold),
            ])
    return path
