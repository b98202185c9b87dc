"""
Configuration
============
Run settings for the spin-sum toolkit, read from the environment (and a
.env file when present).
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from src.core.errors import DomainError
from src.core.linalg import Tolerance

load_dotenv()

OUTPUT_FORMATS = ("json", "text")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from e


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError as e:
        raise DomainError(f"{name} must be a number, got {raw!r}") from e


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    samples: int = 100
    tol: Tolerance = field(default_factory=lambda: Tolerance(abs=1e-8, rel=1e-8))
    cache_dir: Path = Path("./data/tensor_cache")
    output: Optional[str] = None
    format: str = "json"
    log_level: str = "WARNING"

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"Seed must fit in 64 bits, got {self.seed}")
        if self.samples < 10:
            raise DomainError(f"At least 10 samples are required, got {self.samples}")
        if self.format not in OUTPUT_FORMATS:
            raise DomainError(f"Unknown output format {self.format!r}")
        object.__setattr__(self, "cache_dir", Path(self.cache_dir))

    @classmethod
    def from_env(cls) -> "RunConfig":
        return cls(
            seed=_env_int("SPINSUM_SEED", 42),
            samples=_env_int("SPINSUM_SAMPLES", 100),
            tol=Tolerance(
                abs=_env_float("SPINSUM_TOL_ABS", 1e-8),
                rel=_env_float("SPINSUM_TOL_REL", 1e-8),
            ),
            cache_dir=Path(os.getenv("SPINSUM_CACHE_DIR", "./data/tensor_cache")),
            log_level=os.getenv("SPINSUM_LOG_LEVEL", "WARNING").upper(),
        )

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "tol": {"abs": self.tol.abs, "rel": self.tol.rel},
            "format": self.format,
        }


_settings = None


def get_settings() -> RunConfig:
    """Get or create the process-wide settings"""
    global _settings
    if _settings is None:
        _settings = RunConfig.from_env()
    return _settings


def set_settings(config: Optional[RunConfig]):
    global _settings
    _settings = config
