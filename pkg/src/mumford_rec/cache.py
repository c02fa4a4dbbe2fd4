"""On-disk cache of serialized payloads.

Entries are keyed by (command, genus, variant, engine version).  Each file
stores the payload text with its sha256; a checksum mismatch is a miss and
the file is discarded.  Writes go to a temporary file that is then renamed
into place.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional, Tuple

ENV_VAR = "MUMFORD_REC_CACHE"
ENGINE_VERSION = "1"

Key = Tuple[str, int, str, str]


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class Cache:
    def __init__(self, root: Optional[os.PathLike] = None, engine_version: str = ENGINE_VERSION):
        root = root or os.environ.get(ENV_VAR)
        self.root = Path(root) if root else None
        self.engine_version = engine_version

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def key(self, command: str, genus: int, variant: str) -> Key:
        return (command, int(genus), variant, self.engine_version)

    def path(self, key: Key) -> Path:
        assert self.root is not None
        return self.root / (_sha(json.dumps(list(key))) + ".json")

    def get(self, key: Key) -> Optional[str]:
        if not self.enabled:
            return None
        p = self.path(key)
        try:
            entry = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        payload = entry.get("payload")
        if entry.get("key") != list(key) or not isinstance(payload, str) or entry.get("checksum") != _sha(payload):
            try:
                p.unlink()
            except OSError:
                pass
            return None
        return payload

    def put(self, key: Key, payload: str) -> None:
        if not self.enabled:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        entry = {"key": list(key), "checksum": _sha(payload), "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
