"""
Runtime configuration.

Settings are read from the environment, optionally primed from a `.env`
file at the repository root. CLI flags override them per run.
"""

import logging
import os
from dataclasses import dataclass, replace
from typing import Dict, Optional

logger = logging.getLogger(__name__)

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    _env_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), '.env')
    load_dotenv(_env_path)
except ImportError:
    # dotenv not installed, skip loading
    pass
except Exception as e:
    logger.warning(f"Failed to load .env file: {e}")


DEFAULT_BUDGET = 2_000_000


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}")
        return default


def _env_flag(name: str, default: bool = False) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    """Process-wide knobs. All fields have safe defaults."""
    threads: int = 1                 # MICROCECH_THREADS
    budget: int = DEFAULT_BUDGET     # MICROCECH_BUDGET, search nodes
    log_level: str = "WARNING"       # MICROCECH_LOG_LEVEL
    log_file: Optional[str] = None   # MICROCECH_LOG_FILE
    normalize: bool = False          # MICROCECH_NORMALIZE, descent ingest
    check_snf: bool = False          # MICROCECH_CHECK_SNF

    def with_overrides(self, **overrides) -> "Settings":
        """Return a copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def load_settings() -> Settings:
    """Read settings from the current environment."""
    return Settings(
        threads=max(1, _env_int("MICROCECH_THREADS", 1)),
        budget=max(1, _env_int("MICROCECH_BUDGET", DEFAULT_BUDGET)),
        log_level=os.getenv("MICROCECH_LOG_LEVEL", "WARNING").upper(),
        log_file=os.getenv("MICROCECH_LOG_FILE") or None,
        normalize=_env_flag("MICROCECH_NORMALIZE"),
        check_snf=_env_flag("MICROCECH_CHECK_SNF"),
    )


_overrides: Dict[str, object] = {}
_current: Optional[Settings] = None


def configure(**overrides) -> Settings:
    """Pin per-run overrides (CLI flags) on top of the environment; None values are ignored."""
    global _current
    _overrides.clear()
    _overrides.update({k: v for k, v in overrides.items() if v is not None})
    _current = None
    return get_settings()


def reload_settings() -> Settings:
    """Drop the cached settings and read the environment again, keeping the overrides."""
    global _current
    _current = None
    return get_settings()


def get_settings() -> Settings:
    """Settings for the current run. The environment is read once and cached."""
    global _current
    if _current is None:
        _current = load_settings().with_overrides(**_overrides)
    return _current
