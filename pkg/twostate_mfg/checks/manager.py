"""Coordinator utilities for running check suites."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..settings import configured_check_workers
from .base import BaseCheck, CheckContext, CheckResult, SUITES
from . import iter_checks

logger = logging.getLogger(__name__)

DEFAULT_WORKERS = 4


@dataclass(slots=True)
class ManagerConfig:
    """Configuration options for the check manager."""

    suite: Optional[str] = None
    limit_to: Optional[Sequence[str]] = None
    #: Explicit pool size; falls back to TWOSTATE_CHECK_WORKERS, then DEFAULT_WORKERS.
    workers: Optional[int] = None

    def pool_size(self, check_count: int) -> int:
        """Threads for ``check_count`` checks: never more than the checks, never fewer than one."""
        requested = self.workers or configured_check_workers() or DEFAULT_WORKERS
        return max(1, min(requested, check_count))


class CheckManager:
    """Runs registered checks in a thread pool and collects ordered results."""

    def __init__(self, config: Optional[ManagerConfig] = None) -> None:
        self.config = config or ManagerConfig()
        if self.config.suite is not None and self.config.suite not in SUITES:
            raise KeyError(f"Unknown suite {self.config.suite!r}; expected one of {', '.join(SUITES)}")

    def _selected_checks(self) -> List[BaseCheck]:
        checks = list(iter_checks(self.config.suite))
        if not self.config.limit_to:
            return checks
        selected = set(self.config.limit_to)
        return [check for check in checks if check.slug in selected]

    def run(self, context: Optional[CheckContext] = None) -> List[CheckResult]:
        """Run the selected checks; each check's failure stays inside its result."""
        checks = self._selected_checks()
        if not checks:
            return []
        context = context or CheckContext(suite=self.config.suite or "all")
        workers = self.config.pool_size(len(checks))
        logger.info("Running %d check(s) with %d worker(s)", len(checks), workers)

        results: List[CheckResult] = []
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_check = {executor.submit(check.run, context): check for check in checks}
            for future in as_completed(future_to_check):
                results.append(future.result())

        results.sort(key=lambda result: result.check_slug)
        return results


def suite_passed(results: Sequence[CheckResult]) -> bool:
    return bool(results) and all(result.passed() for result in results)


__all__ = ["CheckManager", "DEFAULT_WORKERS", "ManagerConfig", "suite_passed"]
