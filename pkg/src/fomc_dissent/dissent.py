"""Binary dissent per meeting and corpus-level dissent rates.

A meeting's document shows dissent when its scored units include at least
one hawkish-side label (Hawkish, Mostly Hawkish) and at least one
dovish-side label (Dovish, Mostly Dovish).
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from fomc_dissent.classify import Granularity, ScoredUnit
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.labels import Label

# Statements are judged sentence by sentence, transcripts speaker by speaker.
DEFAULT_GRANULARITY = {
    DocumentKind.STATEMENT: Granularity.SENTENCE,
    DocumentKind.TRANSCRIPT: Granularity.SPEAKER,
}


class GroupingError(ValueError):
    pass


@dataclass(frozen=True)
class DissentRecord:
    meeting: dt.date
    kind: DocumentKind
    n_hawkish_side: int
    n_dovish_side: int

    @property
    def dissent(self) -> int:
        return int(self.n_hawkish_side >= 1 and self.n_dovish_side >= 1)


def count_sides(labels: Iterable[Label]) -> tuple[int, int]:
    hawk = dove = 0
    for lab in labels:
        if lab.is_hawkish_side:
            hawk += 1
        elif lab.is_dovish_side:
            dove += 1
    return hawk, dove


def detect_dissent(
    units: Sequence[ScoredUnit],
    meeting: dt.date | None = None,
    kind: DocumentKind | None = None,
) -> DissentRecord:
    """Dissent record for units from a single (meeting, kind).

    ``meeting`` and ``kind`` are only needed when ``units`` is empty.
    """
    keys = {(s.unit.meeting, s.unit.kind) for s in units}
    if len(keys) > 1:
        raise GroupingError(f"units span several meetings or kinds: {sorted(keys, key=str)}")
    if keys:
        meeting, kind = keys.pop()
    elif meeting is None or kind is None:
        raise GroupingError("empty unit list needs an explicit meeting and kind")
    hawk, dove = count_sides(s.label for s in units)
    return DissentRecord(meeting, kind, hawk, dove)


def dissent_records(
    scored: Iterable[ScoredUnit],
    granularity: Mapping[DocumentKind, Granularity] = DEFAULT_GRANULARITY,
) -> list[DissentRecord]:
    """Group scored units by (meeting, kind) and detect dissent in each.

    Only units at the granularity configured for their kind are used;
    kinds absent from ``granularity`` are skipped.
    """
    groups: dict[tuple, list[ScoredUnit]] = {}
    for s in scored:
        if granularity.get(s.unit.kind) is not s.unit.granularity:
            continue
        groups.setdefault((s.unit.meeting, s.unit.kind), []).append(s)
    order = {k: i for i, k in enumerate(DocumentKind)}
    return [detect_dissent(groups[k]) for k in sorted(groups, key=lambda k: (k[0], order[k[1]]))]


@dataclass(frozen=True)
class Rate:
    numerator: int
    denominator: int

    @property
    def fraction(self) -> Fraction | None:
        return Fraction(self.numerator, self.denominator) if self.denominator else None

    @property
    def value(self) -> float | None:
        return self.numerator / self.denominator if self.denominator else None

    def to_dict(self) -> dict:
        return {"value": self.value, "numerator": self.numerator, "denominator": self.denominator}


@dataclass(frozen=True)
class DissentReport:
    records: tuple[DissentRecord, ...]
    statement_rate: Rate
    transcript_rate: Rate
    p_t_given_s1: Rate
    p_t_given_s0: Rate
    # over meetings that have both a statement and a transcript record
    n_pairs: int
    paired_statement_rate: Rate
    paired_transcript_rate: Rate

    def to_dict(self) -> dict:
        return {
            "statement_rate": self.statement_rate.to_dict(),
            "transcript_rate": self.transcript_rate.to_dict(),
            "p_t_given_s1": self.p_t_given_s1.to_dict(),
            "p_t_given_s0": self.p_t_given_s0.to_dict(),
            "n_pairs": self.n_pairs,
            "paired_statement_rate": self.paired_statement_rate.to_dict(),
            "paired_transcript_rate": self.paired_transcript_rate.to_dict(),
            "records": [
                {
                    "date": r.meeting.isoformat(),
                    "kind": r.kind.value,
                    "n_hawkish_side": r.n_hawkish_side,
                    "n_dovish_side": r.n_dovish_side,
                    "dissent": r.dissent,
                }
                for r in self.records
            ],
        }


def dissent_report(records: Iterable[DissentRecord]) -> DissentReport:
    records = tuple(records)
    by_kind: dict[DocumentKind, dict[dt.date, int]] = {k: {} for k in DocumentKind}
    for r in records:
        if r.meeting in by_kind[r.kind]:
            raise GroupingError(f"two {r.kind.value} records for {r.meeting}")
        by_kind[r.kind][r.meeting] = r.dissent

    s = by_kind[DocumentKind.STATEMENT]
    t = by_kind[DocumentKind.TRANSCRIPT]
    paired = sorted(set(s) & set(t))
    s1 = [m for m in paired if s[m]]
    s0 = [m for m in paired if not s[m]]
    return DissentReport(
        records=records,
        statement_rate=Rate(sum(s.values()), len(s)),
        transcript_rate=Rate(sum(t.values()), len(t)),
        p_t_given_s1=Rate(sum(t[m] for m in s1), len(s1)),
        p_t_given_s0=Rate(sum(t[m] for m in s0), len(s0)),
        n_pairs=len(paired),
        paired_statement_rate=Rate(len(s1), len(paired)),
        paired_transcript_rate=Rate(sum(t[m] for m in paired), len(paired)),
    )


def write_report_json(report: DissentReport, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path


def write_records_csv(records: Iterable[DissentRecord], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "kind", "n_hawkish_side", "n_dovish_side", "dissent"])
        for r in records:
            w.writerow([r.meeting.isoformat(), r.kind.value, r.n_hawkish_side, r.n_dovish_side, r.dissent])
    return path
