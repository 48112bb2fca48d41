from __future__ import annotations

import json

import pytest

from twostate_mfg.analysis import monotonicity_check
from twostate_mfg.errors import CFLViolationError, ConfigurationError, OutputFormatError
from twostate_mfg.experiments import (
    EXAMPLE2_ORIENTATIONS,
    KAPPA_SWEEP,
    build_model,
    preset_example,
    resolve_config,
    run_from_config,
    select_example2_default,
    solve,
)
from twostate_mfg.schemas import ModelConfig, PlotConfig, RunConfig
from twostate_mfg.solvers import ProblemKind


def short_config(**updates) -> RunConfig:
    config = RunConfig.model_validate(
        {
            "problem": "reduced-primal",
            "grid": {"a": 0.0, "b": 1.0, "n": 50},
            "time": {"T": 0.01, "dt": 1e-4},
            "terminal": {"preset": "linear-w"},
            "snapshots": [0.0, 0.005, 0.01],
            "output": {"name": "short"},
        }
    )
    return config.model_copy(update=updates)


def test_example_one_primal_preset():
    config = preset_example(1, ProblemKind.REDUCED_PRIMAL)
    assert (config.time.T, config.time.dt) == (5.0, 1e-4)
    assert (config.grid.a, config.grid.b, config.grid.n) == (0.0, 1.0, 200)
    assert config.terminal.preset == "linear-w"
    assert config.model.preset == "example1"
    assert config.snapshots == [0.0, 5.0]
    assert config.stem == "example1_reduced-primal"
    assert preset_example(1, "reduced-primal", paper_exact=True).time.dt == 1e-5


def test_example_one_dual_preset():
    config = preset_example(1, ProblemKind.REDUCED_DUAL)
    assert (config.grid.a, config.grid.b) == (-2.0, 2.0)
    assert config.boundary.kind == "dirichlet"
    assert (config.boundary.left_value, config.boundary.right_value) == (1.0, 0.0)
    assert config.terminal.preset == "dual-inverse-linear"
    assert preset_example(1, ProblemKind.POTENTIAL_DUAL).terminal.preset == "dual-potential-legendre"
    assert preset_example(1, ProblemKind.POTENTIAL_PRIMAL).boundary.large_value == 10.0


def test_example_two_preset_with_explicit_parameters():
    config = preset_example(2, ProblemKind.REDUCED_PRIMAL, kappa=4.0, orientation="example2-gradient")
    assert config.time.T == 0.25
    assert config.model == ModelConfig(preset="example2-gradient", kappa=4.0)
    assert config.terminal.preset == "linear-w"


def test_preset_example_rejects_unknown_inputs():
    with pytest.raises(ConfigurationError):
        preset_example(3, ProblemKind.REDUCED_PRIMAL)
    with pytest.raises(ConfigurationError):
        preset_example(2, ProblemKind.REDUCED_PRIMAL, kappa=1.0, orientation="example2-sideways")


def test_example_two_default_loses_monotonicity():
    kappa, orientation = select_example2_default()
    assert (kappa, orientation) == (8.0, "example2-paper")
    assert kappa in KAPPA_SWEEP
    assert orientation in EXAMPLE2_ORIENTATIONS
    config = preset_example(2, ProblemKind.REDUCED_PRIMAL, kappa=kappa, orientation=orientation)
    trace = solve(config)
    assert monotonicity_check(trace.snapshot(config.time.T)).monotone
    assert not monotonicity_check(trace.snapshot(0.0)).monotone


def test_resolve_config_fills_in_kappa(monkeypatch):
    monkeypatch.setattr("twostate_mfg.experiments.select_example2_default", lambda: (8.0, "example2-paper"))
    config = short_config(model=ModelConfig(preset="example2-paper"))
    assert resolve_config(config).model.kappa == 8.0
    assert resolve_config(short_config()).model.kappa is None


def test_build_model_from_polynomial_coefficients():
    model = build_model(ModelConfig(preset="polynomial", f1=[1.0, -1.0], f2=[0.0, 1.0]))
    assert model.mean_field_gap(0.25) == pytest.approx(0.5)


def test_run_writes_csv_svg_and_manifest(tmp_path):
    config = short_config(output=short_config().output.model_copy(update={"formats": ["csv", "svg"]}))
    manifest = run_from_config(config, tmp_path)
    assert manifest.artifacts == ["short.csv", "short.svg", "short_manifest.json"]
    assert sorted(path.name for path in tmp_path.iterdir()) == sorted(manifest.artifacts)
    assert manifest.realized_snapshot_times == [0.01, 0.005, 0.0]
    assert manifest.diagnostics.steps == 100

    written = json.loads((tmp_path / "short_manifest.json").read_text(encoding="ascii"))
    assert "wall_clock_seconds" not in written
    assert written["config"]["problem"] == "reduced-primal"
    assert written["tool_version"]


def test_run_records_timing_on_request(tmp_path):
    config = short_config(output=short_config().output.model_copy(update={"record_timing": True}))
    run_from_config(config, tmp_path)
    written = json.loads((tmp_path / "short_manifest.json").read_text(encoding="ascii"))
    assert written["wall_clock_seconds"] >= 0.0


def test_run_uses_environment_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("TWOSTATE_OUTPUT_DIR", str(tmp_path / "from-env"))
    run_from_config(short_config())
    assert (tmp_path / "from-env" / "short.csv").exists()


def test_failed_plot_removes_partial_artifacts(tmp_path):
    plots = [PlotConfig(filename="short.svg", columns=["t=9.000000"])]
    config = short_config(output=short_config().output.model_copy(update={"plots": plots}))
    with pytest.raises(OutputFormatError):
        run_from_config(config, tmp_path)
    assert list(tmp_path.iterdir()) == []


def test_numerical_failure_writes_nothing(tmp_path):
    config = short_config(time=short_config().time.model_copy(update={"T": 0.05, "dt": 0.05}), snapshots=[])
    with pytest.raises(CFLViolationError):
        run_from_config(config, tmp_path)
    assert list(tmp_path.iterdir()) == []
