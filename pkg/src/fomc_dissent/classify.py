"""Build prompts, parse answers and classify batches of text units."""

from __future__ import annotations

import csv
import datetime as dt
import enum
import json
import logging
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from fomc_dissent.backends import TransportError
from fomc_dissent.cache import Cache, cache_key
from fomc_dissent.corpus import DocumentKind, RawDocument
from fomc_dissent.labels import Label
from fomc_dissent.textparse import aggregate_by_speaker, partition_transcript, segment_sentences

log = logging.getLogger(__name__)

# Reproduced as published, including its line breaks and the doubled "applies".
PROMPT_TEMPLATE = """
<statement>
INPUT
</statement>
<labels>
Dovish: Strongly expresses a belief that the economy may be
growing too slowly and may need stimulus through mon-
etary policy.
Mostly dovish: Overall message expresses a belief that the economy may
be growing too slowly and may need stimulus through
monetary policy.
Neutral: Expresses neither a hawkish nor dovish view and is
mostly objective.
Mostly hawkish: Overall message expresses a belief that the economy is
growing too quickly and may need to be slowed down
through monetary policy.
Hawkish: Strongly expresses a belief that the economy is growing
too quickly and may need to be slowed down through monetary policy.
</labels>
Which label best applies applies to the statement (Dovish, Mostly Dovish, Neutral, Mostly Hawkish, Hawkish)?
"""

DEFAULT_RETRIES = 2
DEFAULT_PARALLELISM = 4
DEFAULT_BACKOFF = 1.0


class Granularity(enum.Enum):
    SENTENCE = "sentence"
    SPEAKER = "speaker"
    DOCUMENT = "document"


# (kind, granularity) pairs the pipeline knows how to build units for.
SUPPORTED = {
    (DocumentKind.STATEMENT, Granularity.SENTENCE),
    (DocumentKind.STATEMENT, Granularity.DOCUMENT),
    (DocumentKind.TRANSCRIPT, Granularity.SPEAKER),
    (DocumentKind.MINUTES, Granularity.DOCUMENT),
}


class UnparseableLabel(ValueError):
    def __init__(self, raw: str, reason: str = "no label found"):
        super().__init__(f"{reason}: {raw!r}")
        self.raw = raw


@dataclass(frozen=True)
class Unit:
    meeting: dt.date
    kind: DocumentKind
    granularity: Granularity
    key: str
    text: str

    @property
    def id(self) -> tuple:
        return (self.meeting, self.kind, self.granularity, self.key)


@dataclass(frozen=True)
class ScoredUnit:
    unit: Unit
    label: Label
    model_id: str = ""
    cached: bool = False


@dataclass(frozen=True)
class FewShotExample:
    text: str
    label: Label

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("few-shot example text is empty")


class Backend(Protocol):
    model_id: str
    params: dict

    def complete(self, prompt: str) -> str: ...


# -- units -------------------------------------------------------------------


def make_units(doc: RawDocument, granularity: Granularity) -> list[Unit]:
    """Cut a document into classification units of the given granularity."""
    if (doc.kind, granularity) not in SUPPORTED:
        raise ValueError(f"unsupported combination: {doc.kind.value}/{granularity.value}")
    if granularity is Granularity.DOCUMENT:
        return [Unit(doc.meeting, doc.kind, granularity, "doc", doc.text.strip())]
    if granularity is Granularity.SENTENCE:
        return [Unit(doc.meeting, doc.kind, granularity, str(s.index), s.text) for s in segment_sentences(doc)]
    aggregates = aggregate_by_speaker(partition_transcript(doc))
    return [Unit(doc.meeting, doc.kind, granularity, a.speaker, a.text) for a in aggregates]


# -- prompt ------------------------------------------------------------------


def _region(doc_word: str, text: str) -> str:
    return f"<{doc_word}>\n{text}\n</{doc_word}>"


def build_prompt(
    unit: Unit | str,
    few_shot: Sequence[FewShotExample] = (),
    doc_word: str | None = None,
) -> str:
    """Fill the label prompt with the unit text.

    ``doc_word`` replaces the word "statement" in the template and defaults
    to the unit's document kind. Few-shot examples are prepended as tagged
    text followed by their label.
    """
    if isinstance(unit, Unit):
        text = unit.text
        doc_word = doc_word or unit.kind.value
    else:
        text = unit
        doc_word = doc_word or "statement"
    body = PROMPT_TEMPLATE.replace("statement", doc_word).replace("\nINPUT\n", f"\n{text}\n", 1)
    if not few_shot:
        return body
    shots = "\n\n".join(f"{_region(doc_word, ex.text)}\nLabel: {ex.label.value}" for ex in few_shot)
    return shots + "\n" + body


def load_few_shot(path: str | Path) -> list[FewShotExample]:
    """Read JSON Lines of ``{"text": ..., "label": ...}``."""
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                row = json.loads(line)
                out.append(FewShotExample(row["text"], Label.from_name(row["label"])))
    return out


# -- parsing -----------------------------------------------------------------

_LABEL_RE = re.compile(r"\b(mostly hawkish|mostly dovish|hawkish|dovish|neutral)\b")


def parse_label(raw: str) -> Label:
    """Find the label named in a free-text answer.

    Matching is case-insensitive and ignores punctuation. When several
    labels are named, the one with the most words wins ("Mostly Hawkish"
    over "Hawkish"); a tie between different labels is ambiguous.
    """
    norm = " ".join(re.sub(r"[^a-z]+", " ", raw.lower()).split())
    found = {m.group(1) for m in _LABEL_RE.finditer(norm)}
    if not found:
        raise UnparseableLabel(raw)
    longest = max(len(name.split()) for name in found)
    top = [name for name in found if len(name.split()) == longest]
    if len(top) > 1:
        raise UnparseableLabel(raw, reason=f"ambiguous labels {sorted(top)}")
    return Label.from_name(top[0])


# -- batch -------------------------------------------------------------------


@dataclass(frozen=True)
class UnitError:
    unit: Unit
    error: str  # "TransportError" or "LabelError"
    message: str
    raw: str | None = None

    def to_dict(self) -> dict:
        return {
            "date": self.unit.meeting.isoformat(),
            "kind": self.unit.kind.value,
            "granularity": self.unit.granularity.value,
            "key": self.unit.key,
            "error": self.error,
            "message": self.message,
            "raw": self.raw,
        }


@dataclass
class ClassificationResult:
    scored: list[ScoredUnit] = field(default_factory=list)
    errors: list[UnitError] = field(default_factory=list)
    backend_calls: int = 0
    cache_hits: int = 0

    @property
    def n_units(self) -> int:
        return len(self.scored) + len(self.errors)


def truncate(text: str, max_chars: int | None) -> str:
    if max_chars is None or len(text) <= max_chars:
        return text
    return text[:max_chars]


def classify_units(
    units: Sequence[Unit],
    backend: Backend,
    cache: Cache | None = None,
    few_shot: Sequence[FewShotExample] = (),
    retries: int = DEFAULT_RETRIES,
    parallelism: int = DEFAULT_PARALLELISM,
    backoff: float = DEFAULT_BACKOFF,
    max_input_chars: int | None = None,
) -> ClassificationResult:
    """Label every unit, consulting ``cache`` before calling ``backend``.

    A unit whose call fails or whose answer cannot be parsed is retried up
    to ``retries`` more times with exponential backoff, then recorded in
    ``errors`` instead of aborting the batch. ``scored`` keeps input order.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    ids = [u.id for u in units]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate units in batch")
    cache = cache if cache is not None else Cache()
    if max_input_chars is None:
        max_input_chars = getattr(backend, "max_input_chars", None)
    counter_lock = threading.Lock()
    counts = {"calls": 0, "hits": 0}

    def run(unit: Unit) -> ScoredUnit | UnitError:
        text = truncate(unit.text, max_input_chars)
        if text is not unit.text:
            log.warning(
                "%s %s %s: truncated from %d to %d characters",
                unit.meeting, unit.kind.value, unit.key, len(unit.text), len(text),
            )
        prompt = build_prompt(text, few_shot, unit.kind.value)
        key = cache_key(prompt, backend.model_id, backend.params)
        rec = cache.get(key)
        if rec is not None:
            with counter_lock:
                counts["hits"] += 1
            return ScoredUnit(unit, Label.from_name(rec["label"]), backend.model_id, cached=True)

        failure = None
        for attempt in range(retries + 1):
            if attempt and backoff > 0:
                time.sleep(backoff * 2 ** (attempt - 1))
            with counter_lock:
                counts["calls"] += 1
            try:
                raw = backend.complete(prompt)
            except TransportError as exc:
                failure = UnitError(unit, "TransportError", str(exc))
                continue
            try:
                label = parse_label(raw)
            except UnparseableLabel as exc:
                failure = UnitError(unit, "LabelError", str(exc), raw)
                continue
            cache.put(key, prompt, backend.model_id, backend.params, raw, label.value)
            return ScoredUnit(unit, label, backend.model_id, cached=False)
        log.warning("%s %s %s: %s", unit.meeting, unit.kind.value, unit.key, failure.message)
        return failure

    if parallelism == 1 or len(units) <= 1:
        outcomes = [run(u) for u in units]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(run, units))

    result = ClassificationResult(backend_calls=counts["calls"], cache_hits=counts["hits"])
    for item in outcomes:
        if isinstance(item, ScoredUnit):
            result.scored.append(item)
        else:
            result.errors.append(item)
    return result


# -- files -------------------------------------------------------------------

SCORED_FIELDS = ["date", "kind", "granularity", "key", "category", "score", "cached"]


def write_scored_csv(scored: Iterable[ScoredUnit], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCORED_FIELDS)
        for s in scored:
            u = s.unit
            writer.writerow([
                u.meeting.isoformat(), u.kind.value, u.granularity.value, u.key,
                s.label.value, repr(s.label.score), "true" if s.cached else "false",
            ])
    return path


def read_scored_csv(path: str | Path) -> list[ScoredUnit]:
    """Read scored units back. Unit text is not stored, so it comes back empty."""
    out = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            unit = Unit(
                dt.date.fromisoformat(row["date"]),
                DocumentKind(row["kind"]),
                Granularity(row["granularity"]),
                row["key"],
                "",
            )
            out.append(ScoredUnit(unit, Label.from_name(row["category"]), "", row["cached"] == "true"))
    return out


def write_errors_json(errors: Iterable[UnitError], path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps([e.to_dict() for e in errors], indent=2) + "\n", encoding="utf-8")
    return path


def read_errors_json(path: str | Path) -> list[Unit]:
    """Return the units listed in an error manifest."""
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        Unit(
            dt.date.fromisoformat(r["date"]), DocumentKind(r["kind"]),
            Granularity(r["granularity"]), r["key"], "",
        )
        for r in rows
    ]
