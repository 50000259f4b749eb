"""Agreement between predicted and gold meeting labels."""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from fomc_dissent.corpus import parse_meeting_id
from fomc_dissent.labels import ORDERED, Label

_POS = {lab: i for i, lab in enumerate(ORDERED)}


class DuplicateLabelError(ValueError):
    pass


class EmptyComparison(ValueError):
    pass


@dataclass(frozen=True)
class GoldLabel:
    meeting: dt.date
    label: Label


@dataclass(frozen=True)
class EvalReport:
    n: int
    f1_macro: float
    per_class_f1: dict
    # rows gold, columns predicted; both ordered Dovish .. Hawkish
    confusion: np.ndarray
    n_disagree: int
    adjacent_rate: float
    flip_rate: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "f1_macro": self.f1_macro,
            "per_class_f1": {lab.value: f for lab, f in self.per_class_f1.items()},
            "labels": [lab.value for lab in ORDERED],
            "confusion": self.confusion.tolist(),
            "n_disagree": self.n_disagree,
            "adjacent_rate": self.adjacent_rate,
            "flip_rate": self.flip_rate,
        }


def _as_map(pairs, what: str) -> dict[dt.date, Label]:
    if isinstance(pairs, Mapping):
        return dict(pairs)
    out = {}
    for item in pairs:
        meeting, label = (item.meeting, item.label) if isinstance(item, GoldLabel) else item
        if meeting in out:
            raise DuplicateLabelError(f"two {what} labels for {meeting}")
        out[meeting] = label
    return out


def f1_macro(
    gold: Iterable[GoldLabel] | Mapping[dt.date, Label],
    pred: Iterable[tuple[dt.date, Label]] | Mapping[dt.date, Label],
) -> EvalReport:
    """Macro-averaged F1 over the categories seen in gold or predictions.

    Only meetings present in both inputs are compared. Disagreements one
    step apart on the scale count as adjacent; those with opposite signs
    count as flips.
    """
    g = _as_map(gold, "gold")
    p = _as_map(pred, "predicted")
    common = sorted(set(g) & set(p))
    if not common:
        raise EmptyComparison("no meeting has both a gold and a predicted label")

    conf = np.zeros((len(ORDERED), len(ORDERED)), dtype=np.int64)
    for m in common:
        conf[_POS[g[m]], _POS[p[m]]] += 1

    tp = np.diag(conf)
    fp = conf.sum(axis=0) - tp
    fn = conf.sum(axis=1) - tp
    seen = (conf.sum(axis=0) + conf.sum(axis=1)) > 0
    per_class = {}
    for i, lab in enumerate(ORDERED):
        if seen[i]:
            denom = 2 * tp[i] + fp[i] + fn[i]
            per_class[lab] = float(2 * tp[i] / denom) if denom else 0.0

    disagree = [(g[m], p[m]) for m in common if g[m] is not p[m]]
    adjacent = sum(1 for a, b in disagree if abs(a.score - b.score) == 0.5)
    flips = sum(1 for a, b in disagree if a.score * b.score < 0)
    nd = len(disagree)
    return EvalReport(
        n=len(common),
        f1_macro=sum(per_class.values()) / len(per_class),
        per_class_f1=per_class,
        confusion=conf,
        n_disagree=nd,
        adjacent_rate=adjacent / nd if nd else 0.0,
        flip_rate=flips / nd if nd else 0.0,
    )


def load_gold_csv(path: str | Path) -> list[GoldLabel]:
    """Read ``date,label`` rows; dates as YYYY-MM-DD or YYYYMMDD."""
    out = []
    seen = set()
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            meeting = parse_meeting_id(row["date"])
            if meeting in seen:
                raise DuplicateLabelError(f"two gold labels for {meeting} in {path}")
            seen.add(meeting)
            out.append(GoldLabel(meeting, Label.from_name(row["label"])))
    return out


def write_eval_json(report: EvalReport, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path


def write_confusion_csv(report: EvalReport, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gold\\pred", *(lab.value for lab in ORDERED)])
        for lab, row in zip(ORDERED, report.confusion):
            w.writerow([lab.value, *row.tolist()])
    return path
