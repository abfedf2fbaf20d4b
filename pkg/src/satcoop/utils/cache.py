import hashlib
import logging
from typing import Any, Callable, Optional

import diskcache as dc

logger = logging.getLogger(__name__)


class MomentCache:
    """Read-mostly cache for long-term channel statistics.

    An in-process dict sits in front of a diskcache store; diskcache handles
    concurrent access from worker processes sharing ``directory``. Without a
    directory only the in-process dict is used.
    """

    def __init__(self, directory: Optional[str] = None):
        self._disk = dc.Cache(directory) if directory else None
        self._memory: dict[str, Any] = {}

    @staticmethod
    def key(*parts: Any) -> str:
        text = "|".join(str(part) for part in parts)
        return hashlib.sha256(text.encode()).hexdigest()

    def get_or_compute(self, cache_key: str, compute: Callable[[], Any]) -> Any:
        if cache_key in self._memory:
            return self._memory[cache_key]

        if self._disk is not None and cache_key in self._disk:
            logger.debug("Returning cached channel moments %s", cache_key[:12])
            value = self._disk[cache_key]
        else:
            value = compute()
            if self._disk is not None:
                self._disk.set(cache_key, value)
        self._memory[cache_key] = value
        return value

    def close(self) -> None:
        if self._disk is not None:
            self._disk.close()
