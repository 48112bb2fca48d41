"""Example presets, config-driven solves and artifact emission."""

from __future__ import annotations

import logging
import time
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .analysis import monotonicity_check
from .errors import ConfigurationError
from .model import CostModel
from .numerics import BoundarySpec, Grid1D, TimeMarch
from .output import emit_csv, emit_svg_plot, write_text_atomic
from .schemas import (
    BoundaryConfig,
    DiagnosticsSummary,
    GridConfig,
    ModelConfig,
    OutputConfig,
    PlotConfig,
    RunConfig,
    RunManifest,
    TerminalConfig,
    TimeConfig,
)
from .settings import default_output_dir
from .solvers import (
    ProblemKind,
    SolutionTrace,
    TerminalData,
    solve_potential_dual,
    solve_potential_primal,
    solve_reduced_dual,
    solve_reduced_primal,
)

logger = logging.getLogger(__name__)

EXAMPLE_HORIZONS = {1: 5.0, 2: 0.25}
DEFAULT_DT = 1e-4
FINE_DT = 1e-5
DEFAULT_INTERVALS = 200
DUAL_HALF_WIDTH = 2.0
LARGE_DIRICHLET_VALUE = 10.0

KAPPA_SWEEP = (1.0, 2.0, 4.0, 8.0, 16.0)
EXAMPLE2_ORIENTATIONS = ("example2-paper", "example2-gradient")
EXAMPLE2_FALLBACK = (16.0, "example2-gradient")

TERMINAL_FOR = {
    ProblemKind.REDUCED_PRIMAL: "linear-w",
    ProblemKind.REDUCED_DUAL: "dual-inverse-linear",
    ProblemKind.POTENTIAL_PRIMAL: "potential-linear",
    ProblemKind.POTENTIAL_DUAL: "dual-potential-legendre",
}

BOUNDARY_FOR = {
    ProblemKind.REDUCED_PRIMAL: BoundaryConfig(kind="outflow"),
    ProblemKind.REDUCED_DUAL: BoundaryConfig(kind="dirichlet", left_value=1.0, right_value=0.0),
    ProblemKind.POTENTIAL_PRIMAL: BoundaryConfig(kind="large-dirichlet", large_value=LARGE_DIRICHLET_VALUE),
    ProblemKind.POTENTIAL_DUAL: BoundaryConfig(kind="asymptotic-slope", left_slope=1.0, right_slope=0.0),
}


@lru_cache(maxsize=1)
def select_example2_default() -> Tuple[float, str]:
    """Smallest κ, then orientation, whose reduced-primal w(·, 0) loses monotonicity."""
    grid = Grid1D(0.0, 1.0, DEFAULT_INTERVALS)
    march = TimeMarch(EXAMPLE_HORIZONS[2], DEFAULT_DT, (0.0,))
    terminal = TerminalData("linear-w")
    for kappa in KAPPA_SWEEP:
        for orientation in EXAMPLE2_ORIENTATIONS:
            trace = solve_reduced_primal(CostModel.from_preset(orientation, kappa), grid, march, terminal)
            verdict = monotonicity_check(trace.snapshot(0.0))
            logger.info("Example II sweep: kappa=%g %s -> %s", kappa, orientation, verdict.verdict.value)
            if not verdict.monotone:
                return kappa, orientation
    logger.warning("No swept Example II setting lost monotonicity; using kappa=%g %s", *EXAMPLE2_FALLBACK)
    return EXAMPLE2_FALLBACK


def preset_example(
    example_id: int,
    problem: ProblemKind,
    *,
    kappa: Optional[float] = None,
    orientation: Optional[str] = None,
    paper_exact: bool = False,
    snapshots: Optional[Sequence[float]] = None,
    n: int = DEFAULT_INTERVALS,
) -> RunConfig:
    """Run configuration of Example I or II for one formulation."""
    problem = ProblemKind(problem)
    if example_id not in EXAMPLE_HORIZONS:
        raise ConfigurationError(f"Unknown example id {example_id!r}; expected 1 or 2")
    horizon = EXAMPLE_HORIZONS[example_id]

    if example_id == 1:
        model = ModelConfig(preset="example1")
    else:
        if kappa is None or orientation is None:
            default_kappa, default_orientation = select_example2_default()
            kappa = default_kappa if kappa is None else kappa
            orientation = orientation or default_orientation
        if orientation not in EXAMPLE2_ORIENTATIONS:
            raise ConfigurationError(f"Unknown Example II orientation {orientation!r}")
        model = ModelConfig(preset=orientation, kappa=kappa)

    if problem.is_dual:
        grid = GridConfig(a=-DUAL_HALF_WIDTH, b=DUAL_HALF_WIDTH, n=n)
    else:
        grid = GridConfig(a=0.0, b=1.0, n=n)

    return RunConfig(
        problem=problem,
        model=model,
        grid=grid,
        time=TimeConfig(T=horizon, dt=FINE_DT if paper_exact else DEFAULT_DT),
        terminal=TerminalConfig(preset=TERMINAL_FOR[problem]),
        boundary=BOUNDARY_FOR[problem].model_copy(),
        snapshots=sorted(snapshots) if snapshots is not None else [0.0, horizon],
        output=OutputConfig(name=f"example{example_id}_{problem.value}"),
    )


# ---------------------------------------------------------------------------
# Config -> domain objects


def resolve_config(config: RunConfig) -> RunConfig:
    """Fill in the Example II κ when a config leaves it open."""
    if config.model.preset in EXAMPLE2_ORIENTATIONS and config.model.kappa is None:
        kappa, _ = select_example2_default()
        model = config.model.model_copy(update={"kappa": kappa})
        return config.model_copy(update={"model": model})
    return config


def build_model(config: ModelConfig) -> CostModel:
    if config.preset == "polynomial":
        return CostModel.from_coefficients(config.f1 or [], config.f2 or [])
    if config.preset == "example1":
        return CostModel.from_preset("example1")
    kappa = config.kappa if config.kappa is not None else select_example2_default()[0]
    return CostModel.from_preset(config.preset, kappa)


def build_boundary(config: Optional[BoundaryConfig]) -> Optional[BoundarySpec]:
    if config is None:
        return None
    return BoundarySpec(**config.model_dump())


def build_march(config: RunConfig) -> TimeMarch:
    return TimeMarch(config.time.T, config.time.dt, tuple(config.snapshots))


def solve(config: RunConfig) -> SolutionTrace:
    """Run the solver named by ``config.problem``."""
    model = build_model(config.model)
    grid = Grid1D(config.grid.a, config.grid.b, config.grid.n)
    march = build_march(config)
    terminal = TerminalData(config.terminal.preset, dict(config.terminal.params))
    boundary = build_boundary(config.boundary)

    if config.problem is ProblemKind.REDUCED_PRIMAL:
        if boundary is not None and boundary.kind != "outflow":
            raise ConfigurationError("reduced-primal uses outflow boundaries only")
        return solve_reduced_primal(model, grid, march, terminal)
    if config.problem is ProblemKind.REDUCED_DUAL:
        return solve_reduced_dual(model, grid, march, terminal, boundary)
    if config.problem is ProblemKind.POTENTIAL_PRIMAL:
        return solve_potential_primal(model, grid, march, terminal, boundary)
    return solve_potential_dual(model, grid, march, terminal, boundary)


def manifest_json(manifest: RunManifest, record_timing: bool) -> str:
    exclude = None if record_timing else {"wall_clock_seconds"}
    return manifest.model_dump_json(indent=2, exclude=exclude) + "\n"


def run_from_config(config: RunConfig, output_dir: Optional[Path] = None) -> RunManifest:
    """Solve, then write the CSV, requested plots and the manifest.

    Any failure removes the files written so far.
    """
    config = resolve_config(config)
    directory = Path(output_dir or config.output.directory or default_output_dir())
    stem = config.stem
    written: List[Path] = []
    started = time.perf_counter()

    try:
        trace = solve(config)
        csv_path = emit_csv(trace, directory / f"{stem}.csv")
        written.append(csv_path)

        plots = list(config.output.plots)
        if not plots and "svg" in config.output.formats:
            plots = [PlotConfig(filename=f"{stem}.svg")]
        for plot in plots:
            written.append(emit_svg_plot(csv_path, directory / plot.filename, plot.columns or None, plot.title))

        summary = trace.diagnostics.summary()
        manifest = RunManifest(
            config=config,
            realized_snapshot_times=trace.times,
            diagnostics=DiagnosticsSummary(**summary, warnings=trace.warnings),
            tool_version=__version__,
            artifacts=[path.name for path in written] + [f"{stem}_manifest.json"],
            wall_clock_seconds=time.perf_counter() - started,
        )
        manifest_path = directory / f"{stem}_manifest.json"
        write_text_atomic(manifest_path, manifest_json(manifest, config.output.record_timing))
        written.append(manifest_path)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        logger.error("Run %s failed; removed %d partial artifact(s)", stem, len(written))
        raise

    logger.info("Run %s finished in %.2fs; artifacts in %s", stem, manifest.wall_clock_seconds, directory)
    return manifest


__all__ = [
    "EXAMPLE2_ORIENTATIONS",
    "KAPPA_SWEEP",
    "build_model",
    "manifest_json",
    "preset_example",
    "resolve_config",
    "run_from_config",
    "select_example2_default",
    "solve",
]
