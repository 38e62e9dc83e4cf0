# Configuration management
import os
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError
from .presentation import ResourceLimits


def _env_int(name: str, default: Optional[int], minimum: int = 0) -> Optional[int]:
    """Integer environment setting; blank means the default."""
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ConfigError(f"{name} must be at least {minimum}, got {value}")
    return value


@dataclass
class Config:
    """Tool configuration from environment variables."""

    # Presentation engine caps
    term_cap: int = 100_000
    step_cap: Optional[int] = None  # None = number of words up to deg m(s)

    # Truncated oracle
    oracle_max_degree: int = 5
    coordinate_cap: int = 200_000  # max Σ N^d ambient coordinates

    # Bounded witness search inside `check` (0 = disabled)
    search_degree: int = 0

    log_level: str = "WARNING"

    def limits(self) -> ResourceLimits:
        """Resource limits for the presentation engine."""
        return ResourceLimits(term_cap=self.term_cap, step_cap=self.step_cap)

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables.

        Raises:
            ConfigError: a variable is set to something other than a usable integer
        """
        return cls(
            term_cap=_env_int("MAGNUS_TERM_CAP", 100_000, minimum=1),
            step_cap=_env_int("MAGNUS_STEP_CAP", None, minimum=1),
            oracle_max_degree=_env_int("MAGNUS_ORACLE_DEGREE", 5, minimum=1),
            coordinate_cap=_env_int("MAGNUS_COORDINATE_CAP", 200_000, minimum=1),
            search_degree=_env_int("MAGNUS_SEARCH_DEGREE", 0),
            log_level=os.getenv("MAGNUS_LOG_LEVEL", "WARNING").upper(),
        )
