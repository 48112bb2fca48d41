"""Core abstractions for property and acceptance checks."""

from __future__ import annotations

import inspect
import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple, Type

logger = logging.getLogger(__name__)

SUITES = ("consistency", "examples")

# (suite, slug) -> check class, filled as check modules are imported
_REGISTRY: Dict[Tuple[str, str], Type["BaseCheck"]] = {}


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


def _validate_declaration(cls: type) -> None:
    if not getattr(cls, "slug", None):
        raise ValueError(f"Check class {cls.__qualname__} must define a slug")
    if not getattr(cls, "title", None):
        raise ValueError(f"Check {cls.slug} must define a title")
    if getattr(cls, "suite", None) not in SUITES:
        raise ValueError(f"Check {cls.slug} must belong to one of {', '.join(SUITES)}")


@dataclass(slots=True)
class CheckContext:
    """Shared state handed to every check of a suite run."""

    suite: str
    seed: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass(slots=True)
class CheckFinding:
    """One evaluated predicate of a check."""

    name: str
    passed: bool
    detail: str
    measured: Optional[float] = None
    threshold: Optional[float] = None


@dataclass(slots=True)
class CheckResult:
    """Outcome of one check invocation."""

    check_slug: str
    findings: List[CheckFinding]
    generated_at: datetime = field(default_factory=_utcnow)
    errors: List[str] = field(default_factory=list)

    def passed(self) -> bool:
        return not self.errors and bool(self.findings) and all(finding.passed for finding in self.findings)

    def failures(self) -> List[CheckFinding]:
        return [finding for finding in self.findings if not finding.passed]


class BaseCheck(ABC):
    """Abstract base class for all checks."""

    #: Unique identifier used on the command line and in reports.
    slug: str
    #: Human-friendly name.
    title: str
    #: Suite the check belongs to.
    suite: str
    description: str = ""

    def __init_subclass__(cls, register: bool = True, **kwargs: Any) -> None:
        """Validate and record each concrete check under its (suite, slug) key."""
        super().__init_subclass__(**kwargs)
        if not register or inspect.isabstract(cls):
            return
        _validate_declaration(cls)
        clash = next((key for key in _REGISTRY if key[1] == cls.slug), None)
        if clash is not None and _REGISTRY[clash].__qualname__ != cls.__qualname__:
            raise ValueError(f"Check slug {cls.slug!r} is already used by {_REGISTRY[clash].__qualname__}")
        _REGISTRY.pop(clash, None)
        _REGISTRY[(cls.suite, cls.slug)] = cls

    def __init__(self) -> None:
        _validate_declaration(type(self))

    @abstractmethod
    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        """Return the evaluated predicates of this check."""

    def run(self, context: CheckContext) -> CheckResult:
        """Evaluate with a guard: an exception fails the check instead of the suite."""
        errors: List[str] = []
        findings: List[CheckFinding] = []
        try:
            findings = self.evaluate(context)
        except Exception as exc:  # noqa: BLE001
            logger.exception("Check %s raised", self.slug)
            errors.append(f"evaluate_failed: {type(exc).__name__}: {exc}")

        result = CheckResult(check_slug=self.slug, findings=findings, errors=errors)
        logger.info("Check %s: %s", self.slug, "passed" if result.passed() else "failed")
        return result


def registered_checks() -> Dict[Tuple[str, str], Type[BaseCheck]]:
    """Snapshot of the check classes registered so far."""
    return dict(_REGISTRY)


__all__ = [
    "BaseCheck",
    "CheckContext",
    "CheckFinding",
    "CheckResult",
    "SUITES",
    "registered_checks",
]
