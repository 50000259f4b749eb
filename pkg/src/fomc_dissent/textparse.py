"""Speaker turns from transcripts and sentences from statements."""

from __future__ import annotations

import datetime as dt
import json
import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from fomc_dissent.corpus import DocumentKind, RawDocument

log = logging.getLogger(__name__)


class ParseError(ValueError):
    pass


# Line-initial tag such as "CHAIRMAN GREENSPAN." or "MR. KOHN."; the
# trailing period closes the tag.
SPEAKER_TAG = re.compile(
    r"^(?P<title>VICE CHAIRMAN|VICE CHAIR|CHAIRMAN|CHAIR|MRS|MR|MS|GOVERNOR|PRESIDENT|SECRETARY)\.? "
    r"(?P<name>[A-Z][A-Z'’-]+)\.",
    re.MULTILINE,
)


@dataclass(frozen=True)
class SpeakerTurn:
    speaker: str
    index: int
    text: str
    # Raw span [start, end) of tag plus utterance within the document text.
    start: int = 0
    end: int = 0
    tag: str = ""


@dataclass(frozen=True)
class SpeakerAggregate:
    speaker: str
    text: str
    turn_count: int


@dataclass(frozen=True)
class Sentence:
    meeting: dt.date | None
    index: int
    text: str


def canonical_speaker(tag: str) -> str:
    """Map a raw tag like ``"MR. GREENSPAN."`` to ``"GREENSPAN"``."""
    m = SPEAKER_TAG.match(tag.strip())
    if m is None:
        raise ParseError(f"not a speaker tag: {tag!r}")
    return m.group("name").upper()


def split_turns(text: str) -> list[SpeakerTurn]:
    """Partition ``text`` at speaker tags. Returns [] when there are none."""
    matches = list(SPEAKER_TAG.finditer(text))
    turns = []
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        turns.append(
            SpeakerTurn(
                speaker=m.group("name").upper(),
                index=i,
                text=text[m.end():end].strip(),
                start=m.start(),
                end=end,
                tag=m.group(0),
            )
        )
    return turns


def partition_transcript(doc: RawDocument) -> list[SpeakerTurn]:
    """Split a transcript into speaker turns in document order.

    Everything before the first tag (title page, attendance) is front
    matter: it is dropped and its size logged. Interjections such as
    ``[Laughter]`` stay inside the enclosing turn.
    """
    if doc.kind is not DocumentKind.TRANSCRIPT:
        raise ParseError(f"no speakers detected: expected a transcript, got {doc.kind.value}")
    turns = split_turns(doc.text)
    if not turns:
        raise ParseError(f"no speakers detected in {doc.source or doc.meeting}")
    if turns[0].start:
        log.info(
            "%s: dropped %d characters of front matter before first speaker",
            doc.meeting, turns[0].start,
        )
    return turns


def front_matter(doc: RawDocument, turns: list[SpeakerTurn]) -> str:
    return doc.text[: turns[0].start] if turns else doc.text


def aggregate_by_speaker(turns: Iterable[SpeakerTurn]) -> list[SpeakerAggregate]:
    texts: dict[str, list[str]] = {}
    for turn in turns:
        texts.setdefault(turn.speaker, []).append(turn.text)
    return [SpeakerAggregate(name, "\n\n".join(parts), len(parts)) for name, parts in texts.items()]


def turns_to_jsonl(turns: Iterable[SpeakerTurn], meeting: dt.date, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for t in turns:
            row = {"date": meeting.isoformat(), "speaker": t.speaker, "index": t.index, "text": t.text}
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


# -- sentences ---------------------------------------------------------------

_BOUNDARY = re.compile(r"[.?!][\"'”’)\]]*(?=\s+[\"'“‘(\[]*[A-Z])")
_LEADING = "\"'“‘(["
_INITIAL = re.compile(r"[A-Z]\.")


def load_abbreviations(path: str | Path | None = None) -> frozenset[str]:
    """Read one abbreviation per line; ``#`` starts a comment line."""
    if path is None:
        text = resources.files("fomc_dissent").joinpath("data/abbreviations.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")
    )


DEFAULT_ABBREVIATIONS = load_abbreviations()


def split_sentences(text: str, abbreviations: Iterable[str] | None = None) -> list[str]:
    """Split on ``. ? !`` followed by whitespace and an uppercase letter.

    A period that closes a listed abbreviation ("U.S.", "Mr.") or a single
    capital initial ("Timothy F. Geithner") is not a boundary.
    """
    abbrevs = DEFAULT_ABBREVIATIONS if abbreviations is None else frozenset(abbreviations)
    out = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        if text[m.start()] == ".":
            token_start = max(text.rfind(" ", 0, m.start()), text.rfind("\n", 0, m.start())) + 1
            token = text[token_start : m.start() + 1].lstrip(_LEADING)
            if token in abbrevs or _INITIAL.fullmatch(token):
                continue
        piece = text[start : m.end()].strip()
        if piece:
            out.append(piece)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        out.append(tail)
    return out


def segment_sentences(
    doc: RawDocument, abbreviations: Iterable[str] | None = None
) -> list[Sentence]:
    if doc.kind is not DocumentKind.STATEMENT:
        raise ParseError(f"sentence segmentation expects a statement, got {doc.kind.value}")
    return [Sentence(doc.meeting, i, s) for i, s in enumerate(split_sentences(doc.text, abbreviations))]
