"""CSV and JSON serialization.

All CSV files carry a header row, use UTF-8 with LF line endings, and write
floats with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

from .fitting import TimeSeries
from .stats import Histogram

__all__ = [
    "DataFormatError",
    "format_float",
    "write_jam_samples",
    "write_timed_samples",
    "write_points_dump",
    "write_histogram_csv",
    "read_jam_samples",
    "read_timeseries",
    "write_report",
]


class DataFormatError(ValueError):
    """Malformed input data (reported with file/line context)."""


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n")


def write_jam_samples(path, n_realized, x_inf) -> None:
    """Per-trial jam counts: ``trial,n_realized,x_inf``."""
    with _open_out(path) as fh:
        fh.write("trial,n_realized,x_inf\n")
        for trial, (n_r, x) in enumerate(zip(n_realized, x_inf)):
            fh.write(f"{trial},{int(n_r)},{int(x)}\n")


def write_timed_samples(path, t_grid, counts) -> None:
    """Timed samples, one row per (trial, grid point): ``trial,t_seconds,x_t``."""
    with _open_out(path) as fh:
        fh.write("trial,t_seconds,x_t\n")
        for trial, row in enumerate(np.atleast_2d(counts)):
            for t, x in zip(t_grid, row):
                fh.write(f"{trial},{format_float(t)},{int(x)}\n")


def write_points_dump(path, per_trial_points) -> None:
    """Audit dump of point configurations and their excitation outcome.

    ``per_trial_points`` yields (positions, excited) pairs; the column set
    adapts to 2D/3D: ``trial,particle,x_m,y_m[,z_m],excited``.
    """
    per_trial_points = list(per_trial_points)
    ndim = 2
    for positions, _ in per_trial_points:
        if len(positions):
            ndim = positions.shape[1]
            break
    coord_cols = ["x_m", "y_m", "z_m"][:ndim]
    with _open_out(path) as fh:
        fh.write("trial,particle," + ",".join(coord_cols) + ",excited\n")
        for trial, (positions, excited) in enumerate(per_trial_points):
            for k in range(len(positions)):
                coords = ",".join(format_float(v) for v in positions[k])
                fh.write(f"{trial},{k},{coords},{int(excited[k])}\n")


def write_histogram_csv(path, hist: Histogram, normal_overlay, poisson_overlay) -> None:
    with _open_out(path) as fh:
        fh.write("bin_left,bin_right,count,normal_overlay,poisson_overlay\n")
        for i in range(len(hist.counts)):
            fh.write(
                f"{format_float(hist.edges[i])},{format_float(hist.edges[i + 1])},"
                f"{int(hist.counts[i])},{format_float(normal_overlay[i])},"
                f"{format_float(poisson_overlay[i])}\n"
            )


def _read_rows(path, expected_header):
    """Split a CSV into (lineno, fields) rows; '#' lines are comments."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"{path}: cannot read ({exc})") from exc
    numbered = [
        (lineno, line)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise DataFormatError(f"{path}: no data (empty file)")
    header_line, header = numbered[0]
    if header.strip() != expected_header:
        raise DataFormatError(
            f"{path}:{header_line}: expected header '{expected_header}', "
            f"found '{header.strip()}'"
        )
    rows = [(lineno, line.split(",")) for lineno, line in numbered[1:]]
    if not rows:
        raise DataFormatError(f"{path}: no data (header only)")
    return path, rows


def read_jam_samples(path):
    """Read ``trial,n_realized,x_inf`` back into arrays."""
    path, rows = _read_rows(path, "trial,n_realized,x_inf")
    n_realized = np.empty(len(rows), dtype=np.int64)
    x_inf = np.empty(len(rows), dtype=np.int64)
    for k, (lineno, fields) in enumerate(rows):
        if len(fields) != 3:
            raise DataFormatError(f"{path}:{lineno}: expected 3 fields")
        try:
            n_realized[k] = int(fields[1])
            x_inf[k] = int(fields[2])
        except ValueError as exc:
            raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
    return n_realized, x_inf


def read_timeseries(path) -> TimeSeries:
    """Read a ``t_seconds,count`` series; times must strictly increase."""
    path, rows = _read_rows(path, "t_seconds,count")
    t = np.empty(len(rows))
    y = np.empty(len(rows))
    for k, (lineno, fields) in enumerate(rows):
        if len(fields) != 2:
            raise DataFormatError(f"{path}:{lineno}: expected 2 fields")
        try:
            t[k] = float(fields[0])
            y[k] = float(fields[1])
        except ValueError as exc:
            raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
        if not math.isfinite(t[k]) or not math.isfinite(y[k]):
            raise DataFormatError(f"{path}:{lineno}: non-finite value")
        if k > 0 and t[k] <= t[k - 1]:
            raise DataFormatError(
                f"{path}:{lineno}: t_seconds not strictly increasing"
            )
    try:
        return TimeSeries(t, y)
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def write_report(report: dict, path=None) -> str:
    """Serialize a result dict as JSON (to stdout when no path is given)."""
    text = json.dumps(report, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with _open_out(path) as fh:
            fh.write(text)
    return text
