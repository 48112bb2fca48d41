from __future__ import annotations

from typing import List

import pytest

from twostate_mfg import model as core
from twostate_mfg.checks import get_check, iter_checks, registered_slugs
from twostate_mfg.checks.base import BaseCheck, CheckContext, CheckFinding, registered_checks
from twostate_mfg.checks.helpers import cached, finding
from twostate_mfg.checks.manager import DEFAULT_WORKERS, CheckManager, ManagerConfig, suite_passed
from twostate_mfg.settings import CHECK_WORKERS_ENV

CONSISTENCY = {"assumptions", "hamiltonian-oracle", "legendre-involution", "potential-identities", "rate-identities"}
EXAMPLES = {
    "characteristics-oracle",
    "convergence-order",
    "cross-formulation",
    "example-one-boundary-layer",
    "example-one-inversion",
    "example-one-shock",
    "example-two-monotonicity",
    "reproducibility",
}


class ExplodingCheck(BaseCheck, register=False):
    slug = "explodes"
    title = "Always raises"
    suite = "consistency"

    def evaluate(self, context: CheckContext) -> List[CheckFinding]:
        raise RuntimeError("boom")


def test_discovery_registers_every_check():
    assert set(registered_slugs()) == CONSISTENCY | EXAMPLES
    assert {check.slug for check in iter_checks("consistency")} == CONSISTENCY
    assert {check.slug for check in iter_checks("examples")} == EXAMPLES
    with pytest.raises(KeyError):
        get_check("missing")
    with pytest.raises(KeyError):
        list(iter_checks("nightly"))
    for (suite, slug), check_class in registered_checks().items():
        assert check_class.suite == suite
        assert get_check(slug).suite == suite


def test_consistency_suite_passes():
    results = CheckManager(ManagerConfig(suite="consistency", workers=2)).run()
    assert [result.check_slug for result in results] == sorted(CONSISTENCY)
    failures = {result.check_slug: result.failures() + result.errors for result in results if not result.passed()}
    assert failures == {}
    assert suite_passed(results)


def test_sign_flip_in_q_fails_the_identity_check(monkeypatch):
    original = core.reduced_q
    monkeypatch.setattr(core, "reduced_q", lambda w, zeta, model: -original(w, zeta, model))
    result = get_check("potential-identities").run(CheckContext(suite="consistency"))
    assert not result.passed()
    assert any("q - dH/dzeta" in failed.name for failed in result.failures())


def test_raising_check_is_reported_not_propagated():
    result = ExplodingCheck().run(CheckContext(suite="consistency"))
    assert not result.passed()
    assert result.errors == ["evaluate_failed: RuntimeError: boom"]


def test_check_declarations_are_validated_at_definition():
    registered_slugs()
    with pytest.raises(ValueError, match="slug"):

        class Nameless(ExplodingCheck):
            slug = ""

    with pytest.raises(ValueError, match="consistency, examples"):

        class Misfiled(ExplodingCheck):
            suite = "nightly"

    with pytest.raises(ValueError, match="already used"):

        class Duplicate(ExplodingCheck):
            slug = "legendre-involution"

    assert "explodes" not in registered_slugs()
    assert ("consistency", "legendre-involution") in registered_checks()


def test_unregistered_checks_are_still_validated():
    class Unnamed(BaseCheck, register=False):
        slug = ""
        title = "Unnamed"
        suite = "consistency"

        def evaluate(self, context):
            return []

    with pytest.raises(ValueError):
        Unnamed()


def test_manager_selection():
    with pytest.raises(KeyError):
        CheckManager(ManagerConfig(suite="nightly"))
    results = CheckManager(ManagerConfig(suite="consistency", limit_to=["legendre-involution"])).run()
    assert [result.check_slug for result in results] == ["legendre-involution"]
    assert CheckManager(ManagerConfig(suite="consistency", limit_to=["reproducibility"])).run() == []
    assert not suite_passed([])


def test_reproducibility_check_passes():
    result = get_check("reproducibility").run(CheckContext(suite="examples"))
    assert result.passed(), result.failures() + result.errors


def test_cached_runs_factory_once():
    context = CheckContext(suite="examples")
    calls = []

    def factory():
        calls.append(1)
        return len(calls)

    assert cached(context, ("key",), factory) == 1
    assert cached(context, ("key",), factory) == 1
    assert calls == [1]


def test_finding_direction():
    assert finding("error", 1e-7, 1e-6).passed
    assert finding("error", 1e-7, 1e-6).detail == "1.000e-07 <= 1.000e-06"
    assert not finding("error", 1e-5, 1e-6).passed
    assert finding("order", 0.95, 0.8, at_most=False).passed


def test_pool_size_sources(monkeypatch):
    monkeypatch.delenv(CHECK_WORKERS_ENV, raising=False)
    assert ManagerConfig().pool_size(10) == DEFAULT_WORKERS
    assert ManagerConfig().pool_size(2) == 2
    assert ManagerConfig(workers=6).pool_size(10) == 6
    monkeypatch.setenv(CHECK_WORKERS_ENV, "8")
    assert ManagerConfig().pool_size(10) == 8
    assert ManagerConfig(workers=3).pool_size(10) == 3
    monkeypatch.setenv(CHECK_WORKERS_ENV, "many")
    assert ManagerConfig().pool_size(10) == DEFAULT_WORKERS
