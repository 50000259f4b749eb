"""The five-point hawk/dove scale."""

from __future__ import annotations

import enum
import re


class Label(enum.Enum):
    """Hawk/dove category. The value is the display name used in prompts and files."""

    DOVISH = "Dovish"
    MOSTLY_DOVISH = "Mostly Dovish"
    NEUTRAL = "Neutral"
    MOSTLY_HAWKISH = "Mostly Hawkish"
    HAWKISH = "Hawkish"

    @property
    def score(self) -> float:
        return _SCORES[self]

    @property
    def is_hawkish_side(self) -> bool:
        return _SCORES[self] > 0

    @property
    def is_dovish_side(self) -> bool:
        return _SCORES[self] < 0

    def mirror(self) -> Label:
        """Swap hawkish and dovish sides; Neutral maps to itself."""
        return _BY_SCORE[-_SCORES[self]]

    @classmethod
    def from_score(cls, score: float) -> Label:
        try:
            return _BY_SCORE[float(score)]
        except KeyError:
            raise ValueError(f"no label has score {score!r}") from None

    @classmethod
    def from_name(cls, name: str) -> Label:
        """Accept "Mostly Hawkish", "MostlyHawkish", "mostly_hawkish" and the like."""
        key = re.sub(r"[\s_-]+", "", name.strip()).lower()
        for label in cls:
            if label.value.replace(" ", "").lower() == key:
                return label
        raise ValueError(f"unknown label name {name!r}")


_SCORES = {
    Label.DOVISH: -1.0,
    Label.MOSTLY_DOVISH: -0.5,
    Label.NEUTRAL: 0.0,
    Label.MOSTLY_HAWKISH: 0.5,
    Label.HAWKISH: 1.0,
}
_BY_SCORE = {v: k for k, v in _SCORES.items()}

# Ordered dovish to hawkish; used for confusion-matrix axes.
ORDERED = tuple(sorted(Label, key=lambda lab: lab.score))
