import hashlib
import json
import logging
from typing import Any, Optional

import redis

from ..config import settings

logger = logging.getLogger(__name__)

KEY_PREFIX = "dyer:report:v1:"


def report_key(canonical_text: str, max_subset_vertices: int) -> str:
    """Reports depend on the graph and on the subset cap used for hyperbolicity."""
    digest = hashlib.sha256(f"{max_subset_vertices}\n{canonical_text}".encode("utf-8")).hexdigest()
    return KEY_PREFIX + digest


class ReportCache:
    def __init__(self, redis_url: Optional[str] = None, ttl_seconds: Optional[int] = None):
        redis_url = redis_url if redis_url is not None else settings.redis_url
        self.ttl_seconds = ttl_seconds if ttl_seconds is not None else settings.cache_ttl_seconds

        if not redis_url:
            logger.warning("Redis URL not configured. Using mock mode.")
            self.client = None
            self.mock_mode = True
            self.mock_cache = {}
        else:
            self.client = redis.from_url(redis_url, decode_responses=True)
            self.mock_mode = False

    def set(self, key: str, value: Any, expire_seconds: Optional[int] = None) -> bool:
        """Set a key-value pair with expiration."""
        expire_seconds = expire_seconds or self.ttl_seconds
        if self.mock_mode:
            self.mock_cache[key] = json.dumps(value)
            return True

        try:
            self.client.setex(key, expire_seconds, json.dumps(value))
            return True
        except redis.RedisError as e:
            logger.warning("Redis set error: %s", e)
            return False

    def get(self, key: str) -> Optional[Any]:
        if self.mock_mode:
            value = self.mock_cache.get(key)
            return json.loads(value) if value else None

        try:
            value = self.client.get(key)
            return json.loads(value) if value else None
        except redis.RedisError as e:
            logger.warning("Redis get error: %s", e)
            return None


# Global instance
report_cache = ReportCache()
