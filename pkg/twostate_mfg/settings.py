"""Environment-driven defaults."""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv()

OUTPUT_DIR_ENV = "TWOSTATE_OUTPUT_DIR"
CHECK_WORKERS_ENV = "TWOSTATE_CHECK_WORKERS"

DEFAULT_OUTPUT_DIR = "output"


def default_output_dir() -> Path:
    """Root directory for run artifacts when a config does not name one."""
    return Path(os.getenv(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR)


def configured_check_workers() -> Optional[int]:
    """Pool size requested through the environment, if it is a positive integer."""
    configured = os.getenv(CHECK_WORKERS_ENV)
    if not configured:
        return None
    try:
        workers = int(configured)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer", CHECK_WORKERS_ENV, configured)
        return None
    if workers < 1:
        logger.warning("Ignoring %s=%d: needs at least one worker", CHECK_WORKERS_ENV, workers)
        return None
    return workers


__all__ = ["CHECK_WORKERS_ENV", "OUTPUT_DIR_ENV", "configured_check_workers", "default_output_dir"]
