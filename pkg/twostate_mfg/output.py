"""CSV snapshots and SVG line plots, written atomically."""

from __future__ import annotations

import csv
import io
import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .errors import OutputFormatError
from .solvers import SolutionTrace

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

CANVAS_PIXELS = (800, 600)
SVG_DPI = 72
SVG_HASH_SALT = "twostate-mfg"

# Read by the SVG writer at save time; set once so concurrent renders agree.
matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT
matplotlib.rcParams["svg.fonttype"] = "path"

# matplotlib text layout is not thread-safe
_RENDER_LOCK = threading.Lock()


def _atomic_write(path: Path, write) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    os.close(handle)
    try:
        write(temp_name)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def write_text_atomic(path: PathLike, text: str) -> Path:
    target = Path(path)

    def write(temp_name: str) -> None:
        with open(temp_name, "w", encoding="ascii", newline="") as handle:
            handle.write(text)

    _atomic_write(target, write)
    return target


def column_header(t: float) -> str:
    return f"t={t:.6f}"


def emit_csv(trace: SolutionTrace, path: PathLike) -> Path:
    """Write snapshots as ``x,t=<t1>,...`` with columns in ascending time."""
    if not trace.snapshots:
        raise OutputFormatError("Cannot write a CSV for a trace without snapshots")
    ordered = sorted(trace.snapshots, key=lambda item: item[0])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", *(column_header(t) for t, _ in ordered)])
    columns = [np.asarray(field.values) for _, field in ordered]
    for j, x in enumerate(trace.grid.nodes):
        writer.writerow([repr(float(x)), *(repr(float(column[j])) for column in columns)])
    target = write_text_atomic(path, buffer.getvalue())
    logger.debug("Wrote %d snapshots to %s", len(ordered), target)
    return target


def read_csv(path: PathLike) -> Tuple[List[str], Dict[str, np.ndarray]]:
    """Parse a CSV written by :func:`emit_csv` into headers and columns."""
    try:
        with open(path, "r", encoding="ascii", newline="") as handle:
            rows = list(csv.reader(handle))
    except (OSError, UnicodeDecodeError) as exc:
        raise OutputFormatError(f"Unable to read CSV {path}: {exc}") from exc
    if len(rows) < 2:
        raise OutputFormatError(f"CSV {path} needs a header and at least one data row")
    headers = rows[0]
    if not headers or headers[0] != "x" or len(headers) < 2:
        raise OutputFormatError(f"CSV {path} must start with an 'x' column followed by snapshot columns")
    if any(len(row) != len(headers) for row in rows[1:]):
        raise OutputFormatError(f"CSV {path} rows do not all have {len(headers)} cells")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise OutputFormatError(f"CSV {path} contains a non-numeric cell: {exc}") from exc
    return headers, {name: data[:, k] for k, name in enumerate(headers)}


def emit_svg_plot(
    csv_path: PathLike,
    svg_path: PathLike,
    columns: Optional[Sequence[str]] = None,
    title: Optional[str] = None,
) -> Path:
    """One line per selected snapshot column on a fixed 800×600 canvas."""
    headers, data = read_csv(csv_path)
    available = headers[1:]
    selected = list(columns) if columns else available
    missing = [name for name in selected if name not in available]
    if missing:
        raise OutputFormatError(
            f"Unknown column(s) {', '.join(missing)}; available: {', '.join(available)}"
        )

    target = Path(svg_path)
    with _RENDER_LOCK:
        fig = Figure(figsize=(CANVAS_PIXELS[0] / SVG_DPI, CANVAS_PIXELS[1] / SVG_DPI), dpi=SVG_DPI)
        ax = fig.subplots()
        for name in selected:
            ax.plot(data["x"], data[name], label=name)
        ax.set_xlabel("x")
        ax.set_ylabel("value")
        if title:
            ax.set_title(title)
        ax.legend()
        _atomic_write(target, lambda temp_name: fig.savefig(temp_name, format="svg", metadata={"Date": None}))
    logger.debug("Plotted %s from %s to %s", ", ".join(selected), csv_path, target)
    return target


__all__ = ["column_header", "emit_csv", "emit_svg_plot", "read_csv", "write_text_atomic"]
