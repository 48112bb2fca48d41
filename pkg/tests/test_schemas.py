from __future__ import annotations

import pytest
from pydantic import ValidationError

from twostate_mfg.schemas import GridConfig, ModelConfig, RunConfig
from twostate_mfg.solvers import ProblemKind


def base_config(**overrides):
    config = {
        "problem": "reduced-primal",
        "grid": {"a": 0.0, "b": 1.0, "n": 50},
        "time": {"T": 0.01, "dt": 1e-4},
        "terminal": {"preset": "linear-w"},
    }
    config.update(overrides)
    return config


def test_minimal_config_uses_defaults():
    config = RunConfig.model_validate(base_config())
    assert config.problem is ProblemKind.REDUCED_PRIMAL
    assert config.model.preset == "example1"
    assert config.output.formats == ["csv"]
    assert config.stem == "reduced-primal"
    assert config.boundary is None


def test_named_output_changes_the_stem():
    config = RunConfig.model_validate(base_config(output={"name": "short"}))
    assert config.stem == "short"


def test_unknown_keys_are_rejected():
    with pytest.raises(ValidationError):
        RunConfig.model_validate(base_config(solver="fast"))
    with pytest.raises(ValidationError):
        RunConfig.model_validate(base_config(grid={"a": 0.0, "b": 1.0, "n": 50, "spacing": "even"}))


def test_snapshots_must_lie_in_horizon():
    with pytest.raises(ValidationError):
        RunConfig.model_validate(base_config(snapshots=[0.0, 0.02]))


@pytest.mark.parametrize(
    "overrides",
    [
        {"problem": "primal"},
        {"time": {"T": 0.0, "dt": 1e-4}},
        {"terminal": {"preset": "cubic"}},
        {"boundary": {"kind": "periodic"}},
        {"output": {"formats": ["png"]}},
    ],
)
def test_invalid_values_are_rejected(overrides):
    with pytest.raises(ValidationError):
        RunConfig.model_validate(base_config(**overrides))


def test_grid_ordering():
    with pytest.raises(ValidationError):
        GridConfig(a=1.0, b=0.0, n=10)
    with pytest.raises(ValidationError):
        GridConfig(a=0.0, b=1.0, n=1)


def test_polynomial_preset_needs_coefficients():
    assert ModelConfig(preset="polynomial", f1=[1.0, -1.0], f2=[0.0, 1.0]).f1 == [1.0, -1.0]
    with pytest.raises(ValidationError):
        ModelConfig(preset="polynomial", f1=[1.0])
    with pytest.raises(ValidationError):
        ModelConfig(preset="example1", f1=[1.0], f2=[0.0])
    with pytest.raises(ValidationError):
        ModelConfig(preset="example2-gradient", kappa=-2.0)


def test_config_json_round_trip():
    config = RunConfig.model_validate(base_config(snapshots=[0.0, 0.005], boundary={"kind": "outflow"}))
    assert RunConfig.model_validate_json(config.model_dump_json()) == config
