#!/usr/bin/env python3
"""
Command-line entry point for the two-state mean-field game solvers.

Subcommands run a JSON-configured solve, an Example preset, a check suite, or
plot columns of a snapshot CSV. Exit codes: 0 success, 1 check failure,
2 configuration error, 3 numerical failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .checks.base import SUITES
from .checks.manager import CheckManager, ManagerConfig, suite_passed
from .errors import ConfigurationError, NumericalError, OutputFormatError, TwoStateError
from .experiments import EXAMPLE2_ORIENTATIONS, preset_example, run_from_config
from .output import emit_svg_plot
from .schemas import PlotConfig, RunConfig, RunManifest
from .solvers import ProblemKind

logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Solve the reduced formulations of two-state mean-field games')
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
    subparsers = parser.add_subparsers(dest='command', required=True)

    solve = subparsers.add_parser('solve', help='Run a solve described by a JSON config')
    solve.add_argument('--config', '-c', required=True, help='Path to the RunConfig JSON file')
    solve.add_argument('--output', '-o', help='Output directory (overrides the config and TWOSTATE_OUTPUT_DIR)')

    example = subparsers.add_parser('example', help='Run Example I or II for one formulation')
    example.add_argument('--id', type=int, required=True, choices=(1, 2), dest='example_id', help='Example number')
    example.add_argument('--problem', required=True, choices=[kind.value for kind in ProblemKind],
                         help='Formulation to solve')
    example.add_argument('--kappa', type=float, help='Example II potential strength (default: swept)')
    example.add_argument('--orientation', choices=EXAMPLE2_ORIENTATIONS, help='Example II cost orientation')
    example.add_argument('--paper-exact', action='store_true', help='Use dt = 1e-5 instead of 1e-4')
    example.add_argument('--snapshots', type=float, nargs='+', help='Snapshot times (default: 0 and T)')
    example.add_argument('--plot', action='store_true', help='Also write an SVG of all snapshots')
    example.add_argument('--output', '-o', help='Output directory')

    check = subparsers.add_parser('check', help='Run a check suite')
    check.add_argument('--suite', required=True, choices=SUITES, help='Suite name')
    check.add_argument('--only', nargs='+', help='Restrict to these check slugs')
    check.add_argument('--workers', type=int, help='Thread pool size (default: TWOSTATE_CHECK_WORKERS or 4)')

    plot = subparsers.add_parser('plot', help='Plot columns of a snapshot CSV as SVG')
    plot.add_argument('--input', '-i', required=True, help='CSV written by solve/example')
    plot.add_argument('--output', '-o', required=True, help='SVG path')
    plot.add_argument('--columns', nargs='+', help='Column headers to plot (default: all snapshots)')
    plot.add_argument('--title', help='Plot title')
    return parser


def _print_manifest(manifest: RunManifest, directory: Optional[str]) -> None:
    print(f"\n✅ Run completed: {manifest.config.problem.value}")
    print(f"📈 Snapshots: {', '.join(f't={t:g}' for t in manifest.realized_snapshot_times)}")
    print(f"📊 Max CFL: {manifest.diagnostics.max_cfl:.4f}")
    for warning in manifest.diagnostics.warnings:
        print(f"⚠️  {warning}")
    print(f"📁 Artifacts: {', '.join(manifest.artifacts)} in {directory or manifest.config.output.directory or 'the default output directory'}")


def _run_solve(args: argparse.Namespace) -> int:
    try:
        text = Path(args.config).read_text(encoding='utf-8')
    except OSError as exc:
        raise ConfigurationError(f"Unable to read config {args.config}: {exc}") from exc
    config = RunConfig.model_validate_json(text)
    manifest = run_from_config(config, Path(args.output) if args.output else None)
    _print_manifest(manifest, args.output)
    return EXIT_OK


def _run_example(args: argparse.Namespace) -> int:
    config = preset_example(
        args.example_id,
        ProblemKind(args.problem),
        kappa=args.kappa,
        orientation=args.orientation,
        paper_exact=args.paper_exact,
        snapshots=args.snapshots,
    )
    if args.plot:
        output = config.output.model_copy(update={'plots': [PlotConfig(filename=f"{config.stem}.svg")]})
        config = config.model_copy(update={'output': output})
    manifest = run_from_config(config, Path(args.output) if args.output else None)
    _print_manifest(manifest, args.output)
    return EXIT_OK


def _run_check(args: argparse.Namespace) -> int:
    manager = CheckManager(ManagerConfig(suite=args.suite, limit_to=args.only, workers=args.workers))
    results = manager.run()
    for result in results:
        mark = '✅' if result.passed() else '❌'
        print(f"{mark} {result.check_slug}")
        for found in result.findings:
            print(f"    {'✅' if found.passed else '❌'} {found.name}: {found.detail}")
        for error in result.errors:
            print(f"    ❌ {error}")
    if suite_passed(results):
        print(f"\n✅ Suite '{args.suite}' passed ({len(results)} checks)")
        return EXIT_OK
    failed = sum(1 for result in results if not result.passed())
    print(f"\n❌ Suite '{args.suite}' failed: {failed} of {len(results)} checks", file=sys.stderr)
    return EXIT_CHECK_FAILED


def _run_plot(args: argparse.Namespace) -> int:
    target = emit_svg_plot(args.input, args.output, args.columns, args.title)
    print(f"✅ Plot written: {target}")
    return EXIT_OK


COMMANDS = {
    'solve': _run_solve,
    'example': _run_example,
    'check': _run_check,
    'plot': _run_plot,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, ValidationError) as e:
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"❌ Numerical failure: {e}", file=sys.stderr)
        if e.diagnostics:
            print(f"   diagnostics: {e.diagnostics}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OutputFormatError, TwoStateError, OSError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
