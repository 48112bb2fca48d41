from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .solvers import ProblemKind

CostPreset = Literal["example1", "example2-paper", "example2-gradient", "polynomial"]
TerminalPreset = Literal["linear-w", "potential-linear", "dual-inverse-linear", "dual-potential-legendre"]
BoundaryKind = Literal["outflow", "dirichlet", "large-dirichlet", "asymptotic-slope"]
OutputFormat = Literal["csv", "svg"]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelConfig(StrictModel):
    preset: CostPreset = "example1"
    kappa: Optional[float] = Field(default=None, ge=0.0)
    f1: Optional[List[float]] = None
    f2: Optional[List[float]] = None

    @model_validator(mode="after")
    def _coefficients_match_preset(self) -> "ModelConfig":
        has_coefficients = self.f1 is not None or self.f2 is not None
        if self.preset == "polynomial":
            if not self.f1 or not self.f2:
                raise ValueError("polynomial costs need both f1 and f2 coefficient lists")
        elif has_coefficients:
            raise ValueError(f"f1/f2 coefficients are only used by the polynomial preset, not {self.preset!r}")
        return self


class GridConfig(StrictModel):
    a: float
    b: float
    n: int = Field(ge=2)

    @model_validator(mode="after")
    def _ordered(self) -> "GridConfig":
        if not self.b > self.a:
            raise ValueError(f"grid needs b > a, got [{self.a}, {self.b}]")
        return self


class TimeConfig(StrictModel):
    T: float = Field(gt=0.0)
    dt: float = Field(gt=0.0)


class TerminalConfig(StrictModel):
    preset: TerminalPreset
    params: Dict[str, float] = Field(default_factory=dict)


class BoundaryConfig(StrictModel):
    kind: BoundaryKind
    left_value: float = 0.0
    right_value: float = 0.0
    large_value: float = Field(default=10.0, gt=0.0)
    left_slope: float = 1.0
    right_slope: float = 0.0


class PlotConfig(StrictModel):
    filename: str
    columns: List[str] = Field(default_factory=list)
    title: Optional[str] = None


class OutputConfig(StrictModel):
    directory: Optional[str] = None
    name: Optional[str] = None
    formats: List[OutputFormat] = Field(default_factory=lambda: ["csv"])
    plots: List[PlotConfig] = Field(default_factory=list)
    record_timing: bool = False


class RunConfig(StrictModel):
    """Declarative description of one solve and its artifacts."""

    problem: ProblemKind
    model: ModelConfig = Field(default_factory=ModelConfig)
    grid: GridConfig
    time: TimeConfig
    terminal: TerminalConfig
    boundary: Optional[BoundaryConfig] = None
    snapshots: List[float] = Field(default_factory=list)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def _snapshots_in_horizon(self) -> "RunConfig":
        for t in self.snapshots:
            if t < 0.0 or t > self.time.T:
                raise ValueError(f"snapshot time {t} lies outside [0, {self.time.T}]")
        return self

    @property
    def stem(self) -> str:
        return self.output.name or self.problem.value


class DiagnosticsSummary(StrictModel):
    steps: int
    max_speed: float
    max_cfl: float
    min_value: float
    max_value: float
    warnings: List[str] = Field(default_factory=list)


class RunManifest(StrictModel):
    """Everything needed to reproduce a run, plus what it produced."""

    config: RunConfig
    realized_snapshot_times: List[float]
    diagnostics: DiagnosticsSummary
    tool_version: str
    artifacts: List[str] = Field(default_factory=list)
    wall_clock_seconds: Optional[float] = None


__all__ = [
    "BoundaryConfig",
    "DiagnosticsSummary",
    "GridConfig",
    "ModelConfig",
    "OutputConfig",
    "PlotConfig",
    "RunConfig",
    "RunManifest",
    "TerminalConfig",
    "TimeConfig",
]
