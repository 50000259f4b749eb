"""Aligned corpus of FOMC statements, minutes and transcripts on disk.

Layout::

    root/
      19940204/statement.txt
      20160127/statement.txt
      20160127/minutes.txt
      20160127/transcript.txt

One directory per meeting, named by the meeting's final day. Files other
than the three document kinds (and ``manifest.json`` at the root) are
ignored.
"""

from __future__ import annotations

import datetime as dt
import enum
import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

import requests

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
_DATE_DIR = re.compile(r"^\d{8}$")


class CorpusError(Exception):
    pass


class CorpusFormatError(CorpusError):
    pass


class DuplicateDocumentError(CorpusError):
    pass


class TransportError(CorpusError):
    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class ContentError(CorpusError):
    pass


class DocumentKind(enum.Enum):
    STATEMENT = "statement"
    MINUTES = "minutes"
    TRANSCRIPT = "transcript"

    @property
    def filename(self) -> str:
        return f"{self.value}.txt"


_KIND_ORDER = {k: i for i, k in enumerate(DocumentKind)}


def parse_meeting_id(text: str) -> dt.date:
    """Parse ``YYYYMMDD`` or ISO ``YYYY-MM-DD`` into a date."""
    text = text.strip()
    for fmt in ("%Y%m%d", "%Y-%m-%d"):
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise CorpusFormatError(f"not a meeting date: {text!r}")


def meeting_dirname(meeting: dt.date) -> str:
    return meeting.strftime("%Y%m%d")


def normalize_text(raw: bytes) -> str:
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError:
        # Older Fed text extractions are often cp1252.
        text = raw.decode("cp1252", errors="replace")
    return text.replace("\r\n", "\n").replace("\r", "\n")


@dataclass(frozen=True)
class RawDocument:
    meeting: dt.date
    kind: DocumentKind
    text: str
    source: str = ""

    def __post_init__(self):
        if not self.text:
            raise ContentError(f"empty {self.kind.value} for {self.meeting} ({self.source})")

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Corpus:
    documents: tuple[RawDocument, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        docs = tuple(sorted(self.documents, key=lambda d: (d.meeting, _KIND_ORDER[d.kind])))
        index = {}
        for doc in docs:
            key = (doc.meeting, doc.kind)
            if key in index:
                raise DuplicateDocumentError(
                    f"duplicate {doc.kind.value} for {doc.meeting}: "
                    f"{index[key].source} and {doc.source}"
                )
            index[key] = doc
        object.__setattr__(self, "documents", docs)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def span(self) -> tuple[dt.date, dt.date] | None:
        if not self.documents:
            return None
        return self.documents[0].meeting, self.documents[-1].meeting

    @property
    def meetings(self) -> list[dt.date]:
        return sorted({d.meeting for d in self.documents})

    def get(self, meeting: dt.date, kind: DocumentKind) -> RawDocument | None:
        return self._index.get((meeting, kind))

    def of_kind(self, kind: DocumentKind) -> list[RawDocument]:
        return [d for d in self.documents if d.kind is kind]

    def manifest(self) -> list[dict]:
        return [
            {
                "date": d.meeting.isoformat(),
                "kind": d.kind.value,
                "sha256": d.sha256,
                "bytes": len(d.text.encode("utf-8")),
            }
            for d in self.documents
        ]


def _kind_for(path: Path) -> DocumentKind | None:
    if path.suffix.lower() != ".txt":
        return None
    try:
        return DocumentKind(path.stem.lower())
    except ValueError:
        return None


def load_corpus(root: str | Path, write_manifest: bool = False) -> Corpus:
    """Read every ``<YYYYMMDD>/<kind>.txt`` under ``root``.

    File names are matched case-insensitively, so ``Statement.TXT`` and
    ``statement.txt`` in one directory collide and raise
    :class:`DuplicateDocumentError`.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root is not a readable directory: {root}")

    docs = []
    for entry in sorted(root.iterdir()):
        if not entry.is_dir() or entry.name.startswith("."):
            continue
        if not _DATE_DIR.match(entry.name):
            raise CorpusFormatError(f"malformed meeting directory name: {entry}")
        try:
            meeting = parse_meeting_id(entry.name)
        except CorpusFormatError:
            raise CorpusFormatError(f"malformed meeting directory name: {entry}") from None
        for path in sorted(entry.iterdir()):
            kind = _kind_for(path)
            if kind is None or not path.is_file():
                continue
            text = normalize_text(path.read_bytes())
            if not text:
                raise ContentError(f"empty document: {path}")
            docs.append(RawDocument(meeting, kind, text, str(path)))

    corpus = Corpus(tuple(docs))
    if write_manifest:
        save_manifest(corpus, root / MANIFEST_NAME)
    return corpus


def save_manifest(corpus: Corpus, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(corpus.manifest(), indent=2) + "\n", encoding="utf-8")
    return path


def save_corpus(corpus: Corpus, root: str | Path) -> Path:
    """Write ``corpus`` in the on-disk layout that :func:`load_corpus` reads."""
    root = Path(root)
    for doc in corpus:
        write_document(doc, root)
    return root


def write_document(doc: RawDocument, root: str | Path) -> Path:
    target = Path(root) / meeting_dirname(doc.meeting) / doc.kind.filename
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(doc.text.encode("utf-8"))
    return target


# -- alignment ---------------------------------------------------------------

INFO = "INFO"
WARN = "WARN"


@dataclass(frozen=True)
class AlignmentFlag:
    level: str
    kind: DocumentKind
    message: str


@dataclass(frozen=True)
class MeetingAlignment:
    meeting: dt.date
    present: frozenset
    flags: tuple[AlignmentFlag, ...]

    @property
    def missing(self) -> frozenset:
        return frozenset(DocumentKind) - self.present


@dataclass(frozen=True)
class AlignmentReport:
    meetings: tuple[MeetingAlignment, ...]

    @property
    def flags(self) -> list[tuple[dt.date, AlignmentFlag]]:
        return [(m.meeting, f) for m in self.meetings for f in m.flags]

    def lines(self) -> list[str]:
        return [f"{day.isoformat()} {f.level} {f.message}" for day, f in self.flags]


def validate_alignment(corpus: Corpus) -> AlignmentReport:
    """Report present and missing document kinds per meeting.

    A missing transcript is a WARN; missing statements or minutes are INFO,
    since early statements were not consistently released.
    """
    present: dict[dt.date, set] = {}
    for doc in corpus:
        present.setdefault(doc.meeting, set()).add(doc.kind)

    out = []
    for meeting in sorted(present):
        kinds = present[meeting]
        flags = []
        for kind in DocumentKind:
            if kind in kinds:
                continue
            level = WARN if kind is DocumentKind.TRANSCRIPT else INFO
            flags.append(AlignmentFlag(level, kind, f"missing {kind.value}"))
        out.append(MeetingAlignment(meeting, frozenset(kinds), tuple(flags)))
    return AlignmentReport(tuple(out))


# -- remote ------------------------------------------------------------------


def fetch_remote(
    meeting: dt.date,
    kind: DocumentKind,
    base_url: str,
    root: str | Path | None = None,
    timeout: float = 30.0,
) -> RawDocument:
    """GET ``<base_url>/<YYYYMMDD>/<kind>.txt`` and optionally store it under ``root``.

    The server is expected to serve plain text in the corpus layout; no
    HTML or PDF extraction is attempted.
    """
    url = f"{base_url.rstrip('/')}/{meeting_dirname(meeting)}/{kind.filename}"
    try:
        resp = requests.get(url, timeout=timeout)
    except requests.RequestException as exc:
        raise TransportError(f"GET {url} failed: {exc}") from exc
    if resp.status_code != 200:
        raise TransportError(f"GET {url} returned {resp.status_code}", status=resp.status_code)
    text = normalize_text(resp.content)
    if not text.strip():
        raise ContentError(f"GET {url} returned an empty body")

    doc = RawDocument(meeting, kind, text, url)
    if root is not None:
        write_document(doc, root)
    return doc
