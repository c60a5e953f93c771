"""
Logging setup and the run ledger.

The package is named ``logging`` inside ``vertexlab``; the standard
library module is imported absolutely.
"""

import hashlib
import json
import logging
import time
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from ..database import init_db
from ..models import RunLog

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "warning") -> None:
    """Set the root handler and level for CLI runs."""
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), format=LOG_FORMAT, force=True)


def generate_args_hash(arguments: Dict[str, Any]) -> str:
    """
    Short hash of a command's arguments.

    Args:
        arguments: Parsed command arguments

    Returns:
        First 16 hex characters of the SHA-256 of the sorted JSON
    """
    if not arguments:
        return ""
    json_str = json.dumps(arguments, sort_keys=True, default=str)
    return hashlib.sha256(json_str.encode()).hexdigest()[:16]


class RunLedger:
    """Records CLI runs in the ``run_log`` table of the result store."""

    def __init__(self, cache_dir: Optional[str]):
        self.cache_dir = cache_dir
        self.start_time = time.time()

    def start(self) -> None:
        self.start_time = time.time()

    def record(
        self,
        command: str,
        arguments: Dict[str, Any],
        exit_code: int,
        result: Optional[str] = None,
    ) -> bool:
        """
        Write one ledger row.

        Returns:
            True if the row was stored, False without a cache directory or on error
        """
        if not self.cache_dir:
            return False
        elapsed_ms = (time.time() - self.start_time) * 1000
        status = {0: "ok", 1: "failed"}.get(exit_code, "error")
        digest = hashlib.sha256(result.encode()).hexdigest()[:16] if result else None

        db = init_db(self.cache_dir)()
        try:
            db.add(RunLog(
                command=command,
                args_hash=generate_args_hash(arguments),
                status=status,
                exit_code=exit_code,
                elapsed_ms=elapsed_ms,
                result_digest=digest,
                timestamp=datetime.now(timezone.utc),
            ))
            db.commit()
            return True
        except Exception as e:
            db.rollback()
            logger.error("Error recording run: %s", e)
            return False
        finally:
            db.close()

    def recent(self, limit: int = 20):
        if not self.cache_dir:
            return []
        db = init_db(self.cache_dir)()
        try:
            return db.query(RunLog).order_by(RunLog.timestamp.desc()).limit(limit).all()
        finally:
            db.close()
