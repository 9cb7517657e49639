import logging
import sys
from typing import Optional

from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DYER_", env_file=".env", extra="ignore")

    # Coset enumeration
    max_cosets: int = Field(1_000_000, ge=1)

    # Hyperbolicity certification enumerates every subset of the infinite component
    max_subset_vertices: int = Field(20, ge=0)

    # Corpus cross-check
    corpus_max_vertices: int = Field(4, ge=0)
    corpus_order_cap: int = Field(5000, ge=1)
    corpus_max_cosets: int = Field(200_000, ge=1)
    corpus_sample_cosets: int = Field(2000, ge=1)

    # Report cache
    redis_url: Optional[str] = Field(None, validation_alias=AliasChoices("DYER_REDIS_URL", "REDIS_URL"))
    cache_ttl_seconds: int = 3600

    # API
    frontend_url: str = Field(
        "http://localhost:5173", validation_alias=AliasChoices("DYER_FRONTEND_URL", "FRONTEND_URL")
    )

    log_level: str = "INFO"


_handler: Optional[logging.Handler] = None


def configure_logging(level: str = "INFO") -> None:
    """Send diagnostics to stderr so stdout only ever carries reports."""
    global _handler
    root = logging.getLogger()
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(_handler)
    root.setLevel(level.upper())


# Global instance
settings = Settings()
