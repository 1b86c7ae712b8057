"""On-disk cache of oracle results keyed by the canonical instance."""

import hashlib
import json
import logging
from pathlib import Path

from pydantic import ValidationError

from generalized_turan.oracle import ExtremalResult

logger = logging.getLogger(__name__)


class ResultCache:
    """Stores one JSON document per ``(n, H, F)`` under ``directory``.

    Unreadable or malformed entries are logged and treated as misses; the caller re-verifies
    every hit before trusting it.
    """

    def __init__(self, directory: str | Path, enabled: bool = True):
        self.directory = Path(directory)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(n: int, h_g6: str, f_g6: str) -> str:
        payload = json.dumps([n, h_g6, f_g6], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def path_for(self, n: int, h_g6: str, f_g6: str) -> Path:
        return self.directory / f"{self.key(n, h_g6, f_g6)}.json"

    def load(self, n: int, h_g6: str, f_g6: str) -> ExtremalResult | None:
        if not self.enabled:
            return None
        path = self.path_for(n, h_g6, f_g6)
        if not path.exists():
            self.misses += 1
            return None
        try:
            result = ExtremalResult.model_validate_json(path.read_text())
        except (OSError, ValidationError) as e:
            logger.warning("ignoring corrupt cache entry %s: %s", path.name, e)
            self.misses += 1
            return None
        if (result.n, result.h_g6, result.f_g6) != (n, h_g6, f_g6):
            logger.warning("cache entry %s belongs to another instance", path.name)
            self.misses += 1
            return None
        self.hits += 1
        logger.debug("cache hit for n=%d", n)
        return result

    def store(self, result: ExtremalResult) -> None:
        if not self.enabled:
            return
        path = self.path_for(result.n, result.h_g6, result.f_g6)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(result.model_dump_json(by_alias=True, indent=2))

    def clear(self) -> int:
        """Remove every cached entry and return how many were removed."""
        removed = 0
        if self.directory.exists():
            for path in self.directory.glob("*.json"):
                path.unlink()
                removed += 1
        return removed
