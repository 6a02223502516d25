"""On-disk cache of computed field invariants (JSON, one file per key)."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)

ENV_VAR = "LOGCAP_CACHE"
CACHE_VERSION = 1


def default_cache_dir() -> Path | None:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def cache_key(spec: str, ell: int, precision: int, kind: str = "field") -> str:
    """Key from the canonical spec, ℓ and precision; precision changes never alias."""
    raw = json.dumps({"v": CACHE_VERSION, "kind": kind, "spec": spec, "ell": ell, "precision": precision},
                     sort_keys=True)
    return hashlib.sha256(raw.encode()).hexdigest()[:32]


class Cache:
    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root else None

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def load(self, key: str):
        """Cached payload or None; a corrupt entry is reported and ignored."""
        if not self.enabled:
            return None
        p = self._path(key)
        if not p.exists():
            return None
        try:
            with open(p, encoding="utf-8") as fh:
                blob = json.load(fh)
            if blob.get("key") != key or "payload" not in blob:
                raise ValueError("key mismatch")
            return blob["payload"]
        except (OSError, ValueError) as exc:
            log.warning("ignoring corrupt cache entry %s (%s); recomputing", p, exc)
            return None

    def store(self, key: str, payload) -> None:
        """Atomic write: temp file in the same directory, then rename."""
        if not self.enabled:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        data = json.dumps({"key": key, "payload": payload}, sort_keys=True, ensure_ascii=False)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(data)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, key: str, fn):
        hit = self.load(key)
        if hit is not None:
            return hit
        val = fn()
        self.store(key, val)
        return val
