"""Configuration for cellschur runs."""

from dataclasses import dataclass
import logging
import os
from dotenv import load_dotenv

from cellschur.core.errors import BoundExceededError

load_dotenv()


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    if value <= 0:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


@dataclass
class Config:
    """Size bounds, output locations and parallelism shared by every command."""

    output_dir: str = ""
    max_rank: int = 4
    max_dimension: int = 20000
    max_symmetric_degree: int = 5
    workers: int = 1
    mongodb_uri: str = ""
    mongodb_database: str = "cellschur"
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Config":
        """Create configuration from environment variables."""
        log_level = os.getenv("CELLSCHUR_LOG_LEVEL", "INFO").upper()
        if not isinstance(logging.getLevelName(log_level), int):
            raise ValueError(f"CELLSCHUR_LOG_LEVEL is not a logging level: {log_level!r}")

        return cls(
            output_dir=os.getenv("CELLSCHUR_OUTPUT_DIR", ""),
            max_rank=_positive_int("CELLSCHUR_MAX_RANK", 4),
            max_dimension=_positive_int("CELLSCHUR_MAX_DIMENSION", 20000),
            max_symmetric_degree=_positive_int("CELLSCHUR_MAX_SYMMETRIC_DEGREE", 5),
            workers=_positive_int("CELLSCHUR_WORKERS", 1),
            mongodb_uri=os.getenv("CELLSCHUR_MONGODB_URI", ""),
            mongodb_database=os.getenv("CELLSCHUR_MONGODB_DATABASE", "cellschur"),
            log_level=log_level,
        )

    def require_rank(self, r: int) -> None:
        if r > self.max_rank:
            raise BoundExceededError("r", r, self.max_rank)

    def require_dimension(self, dimension: int) -> None:
        if dimension > self.max_dimension:
            raise BoundExceededError("algebra dimension", dimension, self.max_dimension)

    def require_symmetric_degree(self, i: int) -> None:
        if i > self.max_symmetric_degree:
            raise BoundExceededError("symmetric group degree", i, self.max_symmetric_degree)
