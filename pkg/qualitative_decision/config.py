import os
import logging
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from qualitative_decision.exceptions import BudgetExceeded, ConfigurationError

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

# 256 acts for 3-act quantifiers, 64 acts for 4-act quantifiers
DEFAULT_QUANTIFIER_BUDGET = 256 ** 3
DEFAULT_ACT_BUDGET = 65536
DEFAULT_CHUNK = 1 << 20


@dataclass(frozen=True)
class Settings:
    quantifier_budget: int = DEFAULT_QUANTIFIER_BUDGET
    act_budget: int = DEFAULT_ACT_BUDGET
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK
    log_level: str = 'WARNING'


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigurationError(f"{name} must be positive, got {value}")
    return value


def get_settings() -> Settings:
    """Read settings from the environment (re-read on every call)."""
    return Settings(
        quantifier_budget=_int_from_env('QDT_BUDGET', DEFAULT_QUANTIFIER_BUDGET),
        act_budget=_int_from_env('QDT_ACT_BUDGET', DEFAULT_ACT_BUDGET),
        workers=_int_from_env('QDT_WORKERS', 1),
        chunk_size=_int_from_env('QDT_CHUNK', DEFAULT_CHUNK),
        log_level=os.getenv('QDT_LOG_LEVEL', 'WARNING').upper(),
    )


def enforce_budget(what: str, size: int, settings: Optional[Settings] = None) -> None:
    """Refuse work whose quantifier space is larger than the configured budget."""
    settings = settings or get_settings()
    if size > settings.quantifier_budget:
        raise BudgetExceeded(what, size, settings.quantifier_budget)
