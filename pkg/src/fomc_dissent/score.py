"""Per-meeting aggregates: unweighted mean score and logit-scaled position."""

from __future__ import annotations

import csv
import datetime as dt
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from fomc_dissent.classify import Granularity, ScoredUnit, Unit
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.labels import ORDERED, Label


class EmptyMeeting(ValueError):
    pass


def _labels(items: Iterable[ScoredUnit | Label]) -> list[Label]:
    return [x.label if isinstance(x, ScoredUnit) else x for x in items]


def mean_score(units: Iterable[ScoredUnit | Label]) -> float:
    labels = _labels(units)
    if not labels:
        raise EmptyMeeting("mean of zero units")
    return sum(lab.score for lab in labels) / len(labels)


def hawk_dove_sums(units: Iterable[ScoredUnit | Label]) -> tuple[float, float]:
    """Sum of positive scores and sum of magnitudes of negative scores."""
    hawk = dove = 0.0
    for lab in _labels(units):
        if lab.score > 0:
            hawk += lab.score
        elif lab.score < 0:
            dove -= lab.score
    return hawk, dove


def logit_score(units: Iterable[ScoredUnit | Label]) -> float:
    """``ln((hawk + 0.5) / (dove + 0.5))``; Neutral units contribute nothing.

    Evaluated as a difference of logs so that mirroring every label negates
    the result exactly.
    """
    hawk, dove = hawk_dove_sums(units)
    return math.log(hawk + 0.5) - math.log(dove + 0.5)


@dataclass(frozen=True)
class MeetingScores:
    meeting: dt.date
    kind: DocumentKind
    granularity: Granularity
    n_units: int
    counts: dict
    mean_score: float | None
    hawk_sum: float
    dove_sum: float
    logit_score: float
    excluded_n: int = 0


def meeting_series(
    scored: Iterable[ScoredUnit],
    excluded: Iterable[Unit] = (),
) -> list[MeetingScores]:
    """One row per (meeting, kind, granularity), in chronological order.

    ``excluded`` lists units that failed classification; they only feed the
    ``excluded_n`` column. A group made only of excluded units gets
    ``mean_score=None``.
    """
    groups: dict[tuple, list[Label]] = {}
    n_excluded: Counter = Counter()
    for s in scored:
        u = s.unit
        groups.setdefault((u.meeting, u.kind, u.granularity), []).append(s.label)
    for u in excluded:
        key = (u.meeting, u.kind, u.granularity)
        groups.setdefault(key, [])
        n_excluded[key] += 1

    kind_order = {k: i for i, k in enumerate(DocumentKind)}
    gran_order = {g: i for i, g in enumerate(Granularity)}
    rows = []
    for key in sorted(groups, key=lambda k: (k[0], kind_order[k[1]], gran_order[k[2]])):
        labels = groups[key]
        hawk, dove = hawk_dove_sums(labels)
        counts = Counter(labels)
        rows.append(
            MeetingScores(
                meeting=key[0],
                kind=key[1],
                granularity=key[2],
                n_units=len(labels),
                counts={lab: counts.get(lab, 0) for lab in ORDERED},
                mean_score=mean_score(labels) if labels else None,
                hawk_sum=hawk,
                dove_sum=dove,
                logit_score=logit_score(labels),
                excluded_n=n_excluded[key],
            )
        )
    return rows


SCORES_FIELDS = [
    "date", "kind", "granularity", "n_units",
    "n_dovish", "n_mostly_dovish", "n_neutral", "n_mostly_hawkish", "n_hawkish",
    "mean_score", "hawk_sum", "dove_sum", "logit_score", "excluded_n",
]


def _num(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def write_scores_csv(rows: Sequence[MeetingScores], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCORES_FIELDS)
        for r in rows:
            w.writerow([
                r.meeting.isoformat(), r.kind.value, r.granularity.value, r.n_units,
                *(r.counts[lab] for lab in ORDERED),
                _num(r.mean_score), _num(r.hawk_sum), _num(r.dove_sum), _num(r.logit_score), r.excluded_n,
            ])
    return path
