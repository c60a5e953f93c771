import json
import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

STRATEGIES = ("canonical", "reversed")
LOG_LEVELS = ("debug", "info", "warning", "error")


@dataclass
class EngineConfig:
    """Engine budgets and run options."""

    # Largest weight the CLI accepts for ope/circle/relation inputs
    max_weight: int = 16

    # Memo entries per engine table before it is cleared
    memo_limit: int = 2_000_000

    # Worker threads for realizations
    threads: int = 1

    # Directory of the result store; None disables caching and the run ledger
    cache_dir: Optional[str] = None

    # Normal ordering strategy for the correction loop
    strategy: str = "canonical"

    progress: bool = False
    log_level: str = "warning"

    def __post_init__(self):
        if self.threads < 1:
            self.threads = 1
        if self.strategy not in STRATEGIES:
            raise ValueError(f"Unknown strategy: {self.strategy}. Available: {', '.join(STRATEGIES)}")
        self.log_level = self.log_level.lower()
        if self.log_level not in LOG_LEVELS:
            raise ValueError(f"Unknown log level: {self.log_level}")

    @classmethod
    def from_json(cls, json_str: Optional[str]) -> "EngineConfig":
        """Create an EngineConfig from a JSON string; malformed input gives the defaults."""
        if not json_str:
            return cls()

        try:
            data = json.loads(json_str)
            known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
            return cls(**known)
        except (json.JSONDecodeError, TypeError, ValueError, AttributeError) as e:
            logger.warning("Error parsing engine config: %s", e)
            return cls()

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def merged(self, overrides: Dict[str, Any]) -> "EngineConfig":
        """A copy with the non-None overrides applied."""
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None and k in data})
        return EngineConfig(**data)


def load_config(path: Optional[str] = None) -> EngineConfig:
    """
    Read a JSON config file.

    Args:
        path: File path; a missing path or file gives the defaults
    """
    if not path or not os.path.exists(path):
        return EngineConfig()
    with open(path, encoding="utf-8") as handle:
        return EngineConfig.from_json(handle.read())
