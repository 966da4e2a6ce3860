"""Persistent favorites: a JSON-backed set of doc_ids with added-at times.

Writes go through an atomic replace (temp file + rename) and are flushed to
disk before the call returns, so favorites survive a process restart.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
from pathlib import Path


class FavoritesStore:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, float] = {}
        if self.path.is_file():
            data = json.loads(self.path.read_text("utf-8"))
            self._entries = {str(e["doc_id"]): float(e["added_at"])
                             for e in data.get("favorites", [])}

    def add(self, doc_id: str) -> None:
        """Idempotent: re-adding keeps the original added-at time."""
        with self._lock:
            if doc_id in self._entries:
                return
            self._entries[doc_id] = time.time()
            self._flush()

    def remove(self, doc_id: str) -> None:
        """Removing an absent id is a successful no-op."""
        with self._lock:
            if doc_id not in self._entries:
                return
            del self._entries[doc_id]
            self._flush()

    def list(self) -> list[tuple[str, float]]:
        """(doc_id, added_at) pairs, most recently added first."""
        with self._lock:
            return sorted(self._entries.items(), key=lambda kv: (-kv[1], kv[0]))

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def _flush(self) -> None:
        payload = {
            "version": 1,
            "favorites": [{"doc_id": d, "added_at": t}
                          for d, t in sorted(self._entries.items())],
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".favorites-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
