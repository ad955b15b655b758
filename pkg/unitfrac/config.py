"""
Pipeline configuration
Defaults, then environment (.env honoured), then a JSON config file, then
explicit overrides from the CLI or HTTP query.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from .exactmath import DEFAULT_DIVISOR_CAP, DEFAULT_FACTOR_BUDGET

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

METHODS = ("identity", "split", "multiplier", "parametric", "oracle")

CACHE_PATH_ENV = "UNITFRAC_CACHE_PATH"
PARALLELISM_ENV = "UNITFRAC_PARALLELISM"


class PipelineConfig(BaseModel):
    """
    Knobs for solve() and the sieve. Method names run cheapest first.
    """

    methods: List[str] = Field(default_factory=lambda: list(METHODS), description="Stage order")
    r1_max: int = Field(100, ge=1, description="Largest multiplier tried by the multiplier split")
    w5_max: int = Field(1000, ge=0, description="Parametric w5 bound (inclusive)")
    u5_max: int = Field(1000, ge=1, description="Parametric u5 bound (inclusive)")
    oracle_max_n: int = Field(10**6, ge=2, description="Largest n handed to the brute-force oracle")
    factor_budget: int = Field(DEFAULT_FACTOR_BUDGET, ge=1, description="Pollard-Brent iterations per factorization")
    divisor_cap: int = Field(DEFAULT_DIVISOR_CAP, ge=1, description="Most divisors enumerated per number")
    cache_path: Optional[Path] = Field(None, description="Append-only JSON-lines cache")
    parallelism: int = Field(1, ge=1, description="Sieve worker processes")
    seed: int = Field(0, description="Seed for randomized factorization")

    @field_validator("methods")
    @classmethod
    def _known_methods(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("method order must not be empty")
        unknown = [m for m in value if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {', '.join(METHODS)}")
        if len(set(value)) != len(value):
            raise ValueError("method order must not repeat a method")
        return value

    def restricted(self, methods: List[str]) -> "PipelineConfig":
        """Copy keeping only the given methods, in this config's order"""
        kept = [m for m in self.methods if m in methods]
        return PipelineConfig(**{**self.model_dump(), "methods": kept})


def _env_settings() -> Dict[str, Any]:
    settings: Dict[str, Any] = {}
    cache_path = os.getenv(CACHE_PATH_ENV)
    if cache_path:
        settings["cache_path"] = cache_path
    parallelism = os.getenv(PARALLELISM_ENV)
    if parallelism:
        settings["parallelism"] = parallelism
    return settings


def load_config(path: Optional[Path] = None, **overrides: Any) -> PipelineConfig:
    """
    Build a PipelineConfig. Overrides set to None are ignored so CLI
    options can be passed straight through.
    """
    settings: Dict[str, Any] = _env_settings()
    if path is not None:
        logger.info(f"Reading pipeline config from {path}")
        with open(path, "r", encoding="utf-8") as handle:
            settings.update(json.load(handle))
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig(**settings)
