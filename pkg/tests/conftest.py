import pytest
from fastapi.testclient import TestClient

from src.api import graph_routes
from src.db.redis_client import ReportCache
from src.main import app


@pytest.fixture
def client(monkeypatch):
    """API client with a fresh in-memory report cache."""
    cache = ReportCache(redis_url="")
    monkeypatch.setattr(graph_routes, "report_cache", cache)
    return TestClient(app)
