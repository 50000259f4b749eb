"""Classifier backends: a deterministic keyword mock and an HTTP chat-completion client."""

from __future__ import annotations

import os
import re
import threading

import requests

from fomc_dissent.labels import Label

API_KEY_ENV = "FOMC_DISSENT_API_KEY"


class TransportError(RuntimeError):
    """The backend could not be reached or returned a non-success response."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


MOCK_VERSION = "1"

# Stems matched at a word start, case-insensitively. Keep in sync with README.
HAWKISH_TERMS = (
    "raise",
    "raising",
    "tighten",
    "hike",
    "inflation pressure",
    "overheat",
    "restrictive",
    "firming",
    "upside risk",
)
DOVISH_TERMS = (
    "cut",
    "stimul",
    "accommodat",
    "weak",
    "easing",
    "slack",
    "downside risk",
)


def _term_pattern(terms):
    alts = "|".join(re.escape(t).replace(r"\ ", r"\s+") for t in terms)
    return re.compile(rf"\b(?:{alts})\w*", re.IGNORECASE)


_HAWK_RE = _term_pattern(HAWKISH_TERMS)
_DOVE_RE = _term_pattern(DOVISH_TERMS)


def keyword_counts(text: str) -> tuple[int, int]:
    """Return (hawkish hits, dovish hits) in ``text``."""
    return len(_HAWK_RE.findall(text)), len(_DOVE_RE.findall(text))


def mock_classify(text: str) -> Label:
    """Label text by the sign and size of (hawkish hits - dovish hits).

    0 is Neutral, a margin of one gives a "Mostly" label and two or more the
    full label.
    """
    hawk, dove = keyword_counts(text)
    diff = hawk - dove
    if diff == 0:
        return Label.NEUTRAL
    if diff >= 2:
        return Label.HAWKISH
    if diff == 1:
        return Label.MOSTLY_HAWKISH
    if diff == -1:
        return Label.MOSTLY_DOVISH
    return Label.DOVISH


_INPUT_REGION = re.compile(r"<(statement|minutes|transcript)>\n(.*?)\n</\1>", re.DOTALL)


class MockBackend:
    """Offline backend answering with :func:`mock_classify` on the prompt's input region.

    Only the last tagged region is classified, so few-shot examples and
    label definitions in the prompt do not leak into the count.
    """

    def __init__(self):
        self.model_id = f"mock-keyword-v{MOCK_VERSION}"
        self.params: dict = {}
        self.calls = 0
        self._lock = threading.Lock()

    def complete(self, prompt: str) -> str:
        with self._lock:
            self.calls += 1
        regions = _INPUT_REGION.findall(prompt)
        text = regions[-1][1] if regions else prompt
        return mock_classify(text).value


class HttpBackend:
    """POSTs ``{model, messages}`` to ``<api_base>/chat/completions``.

    No sampling parameters are sent unless given, so the server defaults
    apply and are recorded as ``{}`` in the cache.
    """

    def __init__(
        self,
        api_base: str,
        model_id: str,
        api_key: str | None = None,
        params: dict | None = None,
        timeout: float = 120.0,
        max_input_chars: int | None = None,
    ):
        self.url = api_base.rstrip("/") + "/chat/completions"
        self.model_id = model_id
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.params = dict(params or {})
        self.timeout = timeout
        self.max_input_chars = max_input_chars
        self.calls = 0
        self._lock = threading.Lock()
        self._session = requests.Session()

    def complete(self, prompt: str) -> str:
        with self._lock:
            self.calls += 1
        body = {"model": self.model_id, "messages": [{"role": "user", "content": prompt}], **self.params}
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = self._session.post(self.url, json=body, headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"POST {self.url} failed: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(f"POST {self.url} returned {resp.status_code}", status=resp.status_code)
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed response from {self.url}: {resp.text[:200]!r}") from exc
