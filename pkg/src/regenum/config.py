"""Run configuration records."""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .enumeration import DEFAULT_MAX_DEGREE

__all__ = ["CountConfig", "GuessConfig", "EstimateConfig", "CacheConfig"]


@dataclass(frozen=True)
class CountConfig:
    cls: str
    degrees: tuple
    N: int
    method: str = "adjoint"
    cross_check: bool = False
    max_degree_limit: int = DEFAULT_MAX_DEGREE


@dataclass(frozen=True)
class GuessConfig:
    max_order: int = 6
    max_degree: int = 6
    egf_mode: bool = True
    guard: int = 10


@dataclass(frozen=True)
class EstimateConfig:
    N: int = 500
    order: int | None = None
    bits: int = 200


@dataclass(frozen=True)
class CacheConfig:
    directory: str | None = None
    enabled: bool = True

    def resolve(self) -> Path:
        """--cache-dir, else $REGENUM_CACHE, else ~/.cache/regenum."""
        if self.directory:
            return Path(self.directory)
        env = os.environ.get("REGENUM_CACHE")
        if env:
            return Path(env)
        return Path.home() / ".cache" / "regenum"
