import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

# Load environment variables from .env file
load_dotenv()


class Settings(BaseModel):
    cache_dir: Optional[str] = None
    log_level: str = "INFO"
    threads: int = Field(default=1, ge=1)


def get_settings() -> Settings:
    """Process-level settings read from SATCOOP_* environment variables."""
    threads = os.getenv("SATCOOP_THREADS")
    if threads is not None and not threads.isdigit():
        raise ValueError(
            f"SATCOOP_THREADS must be a positive integer, got {threads!r}. "
            "Please fix it in your environment or .env file."
        )
    return Settings(
        cache_dir=os.getenv("SATCOOP_CACHE_DIR") or None,
        log_level=os.getenv("SATCOOP_LOG_LEVEL", "INFO").upper(),
        threads=int(threads) if threads else 1,
    )
