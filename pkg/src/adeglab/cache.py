"""On-disk certificate cache.

Composition experiments re-query the same small functions thousands of
times, so degree certificates are cached keyed by (measure, table hash,
epsilon, mode).  Values are deterministic, so concurrent last-writer-wins
is safe; writes go through a temp file + os.replace to stay atomic.

The directory comes from $ADEGLAB_CACHE_DIR, defaulting to
~/.cache/adeglab.  Set $ADEGLAB_CACHE_DIR to an empty string to disable
persistence (an in-process dict is still used).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

_ENV_VAR = "ADEGLAB_CACHE_DIR"
_SCHEMA = "adeglab-cert-v1"


def cache_dir() -> Optional[Path]:
    raw = os.environ.get(_ENV_VAR)
    if raw is not None:
        return Path(raw) if raw else None
    return Path.home() / ".cache" / "adeglab"


class CertificateCache:
    def __init__(self, directory: Optional[Path] = "unset"):
        self.directory = cache_dir() if directory == "unset" else directory
        self._mem: dict = {}

    @staticmethod
    def key(*parts) -> str:
        blob = "|".join(str(p) for p in parts)
        return hashlib.sha256(f"{_SCHEMA}|{blob}".encode()).hexdigest()

    def get(self, key: str) -> Optional[dict]:
        if key in self._mem:
            return self._mem[key]
        if self.directory is None:
            return None
        path = self.directory / f"{key}.json"
        try:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None
        if obj.get("schema") != _SCHEMA:
            return None
        self._mem[key] = obj["value"]
        return obj["value"]

    def put(self, key: str, value: dict):
        self._mem[key] = value
        if self.directory is None:
            return
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"schema": _SCHEMA, "value": value}, fh)
            os.replace(tmp, self.directory / f"{key}.json")
        except OSError:
            pass  # cache is best-effort; never fail the computation

    def gc(self) -> int:
        """Delete all persisted entries; returns the number removed."""
        self._mem.clear()
        if self.directory is None or not self.directory.is_dir():
            return 0
        removed = 0
        for path in self.directory.glob("*.json"):
            try:
                path.unlink()
                removed += 1
            except OSError:
                pass
        return removed

    def stats(self) -> dict:
        count = size = 0
        if self.directory is not None and self.directory.is_dir():
            for path in self.directory.glob("*.json"):
                count += 1
                size += path.stat().st_size
        return {"directory": str(self.directory), "entries": count, "bytes": size,
                "in_memory": len(self._mem)}


_shared = None


def shared_cache() -> CertificateCache:
    global _shared
    if _shared is None:
        _shared = CertificateCache()
    return _shared
