"""Check discovery: importing a check module registers its classes by suite and slug."""

from __future__ import annotations

import importlib
import pkgutil
import threading
from typing import Dict, Iterator, List, Optional, Tuple

from .base import SUITES, BaseCheck, registered_checks

# modules that hold the framework, not checks
_FRAMEWORK_MODULES = frozenset({"base", "helpers", "manager"})

_instances: Dict[Tuple[str, str], BaseCheck] = {}
_discovered = False
_lock = threading.Lock()


def _discover() -> Dict[Tuple[str, str], BaseCheck]:
    global _discovered
    with _lock:
        if not _discovered:
            for module_info in pkgutil.iter_modules(__path__):
                if module_info.name not in _FRAMEWORK_MODULES:
                    importlib.import_module(f"{__name__}.{module_info.name}")
            _discovered = True
        for key, check_class in registered_checks().items():
            if key not in _instances:
                _instances[key] = check_class()
        return dict(_instances)


def registered_slugs() -> List[str]:
    """Slugs of every discovered check, sorted."""
    return sorted(slug for _, slug in _discover())


def get_check(slug: str) -> BaseCheck:
    """The single instance of the check named ``slug``, whatever its suite."""
    for (_, registered), check in _discover().items():
        if registered == slug:
            return check
    raise KeyError(f"Check not found: {slug}")


def iter_checks(suite: Optional[str] = None) -> Iterator[BaseCheck]:
    """Checks of one suite (all suites when ``None``), ordered by suite then slug."""
    if suite is not None and suite not in SUITES:
        raise KeyError(f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    for (check_suite, _), check in sorted(_discover().items()):
        if suite is None or check_suite == suite:
            yield check


__all__ = ["BaseCheck", "get_check", "iter_checks", "registered_slugs"]
