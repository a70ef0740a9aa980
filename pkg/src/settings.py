"""Runtime settings read from NWALL_* environment variables."""

import os
from pathlib import Path

from pydantic import BaseModel, Field

DEFAULT_SEED = 20240917


class Settings(BaseModel):
    """Process-wide settings; CLI flags override individual fields."""

    seed: int = Field(DEFAULT_SEED, description="Seed for randomized checks")
    debug: bool = Field(False, description="Debug logging and detailed format")
    log_level: str = Field("INFO", description="Log level name")
    log_dir: Path = Field(Path("logs/nwall"), description="Rotating log directory")
    suites_dir: Path = Field(Path("suites"), description="YAML suite definitions")

    @classmethod
    def from_env(cls) -> "Settings":
        debug = os.getenv("NWALL_DEBUG", "0") == "1"
        return cls(
            seed=int(os.getenv("NWALL_SEED", str(DEFAULT_SEED))),
            debug=debug,
            log_level=os.getenv("NWALL_LOG_LEVEL", "DEBUG" if debug else "INFO"),
            log_dir=Path(os.getenv("NWALL_LOG_DIR", "logs/nwall")),
            suites_dir=Path(os.getenv("NWALL_SUITES_DIR", "suites")),
        )
