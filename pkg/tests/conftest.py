"""
Pytest configuration and shared fixtures
"""

from typing import List

import pytest

from unitfrac.config import CACHE_PATH_ENV, PARALLELISM_ENV, PipelineConfig


# Configure pytest-asyncio to use function scope for fixtures
def pytest_configure(config):
    """Configure pytest-asyncio settings"""
    config.option.asyncio_default_fixture_loop_scope = "function"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep a developer's UNITFRAC_* settings out of the tests"""
    monkeypatch.delenv(CACHE_PATH_ENV, raising=False)
    monkeypatch.delenv(PARALLELISM_ENV, raising=False)


@pytest.fixture
def split_only() -> PipelineConfig:
    return PipelineConfig(methods=["split"])


@pytest.fixture
def primes_below_10k() -> List[int]:
    """Reference primes by plain trial division"""
    return [n for n in range(2, 10_000) if all(n % d for d in range(2, int(n**0.5) + 1))]


# Configure pytest-asyncio
pytest_plugins = ('pytest_asyncio',)
