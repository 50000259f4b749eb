"""Append-only JSON Lines cache of classifier responses."""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import logging
import threading
from pathlib import Path

log = logging.getLogger(__name__)


def cache_key(prompt: str, model_id: str, params: dict) -> str:
    blob = "\x1f".join([prompt, model_id, json.dumps(params, sort_keys=True)])
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class Cache:
    """Maps ``cache_key(prompt, model, params)`` to a stored response record.

    Records are loaded once at construction and appended on ``put``. With
    ``path=None`` the cache lives in memory only. Lookups and appends share
    a lock, so one instance can be used from many worker threads.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._records: dict[str, dict] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    self._records[rec["key"]] = rec
                except (ValueError, KeyError):
                    # a torn final write is the usual cause
                    log.warning("%s:%d: skipping unreadable cache line", self.path, lineno)

    def __len__(self) -> int:
        return len(self._records)

    def get(self, key: str) -> dict | None:
        with self._lock:
            return self._records.get(key)

    def put(self, key: str, prompt: str, model_id: str, params: dict, raw_response: str, label: str) -> dict:
        rec = {
            "key": key,
            "prompt_sha256": hashlib.sha256(prompt.encode("utf-8")).hexdigest(),
            "model_id": model_id,
            "params": params,
            "raw_response": raw_response,
            "label": label,
            "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        }
        with self._lock:
            self._records[key] = rec
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        return rec
