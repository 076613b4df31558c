"""Multivariate time-series panels: CSV ingestion, de-meaning, segmentation."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import BoundsError, InputError, ParseError, StructureError

ROWS_ARE_TIME = "rows_are_time"
ROWS_ARE_CHANNELS = "rows_are_channels"


@dataclass(frozen=True, eq=False)
class TimeSeriesPanel:
    """One condition's observations, ``n`` time points by ``p`` channels.

    The array is copied on construction and flagged read-only, so a panel can
    be shared between worker processes or threads without defensive copies.
    """

    data: np.ndarray
    sampling_rate_hz: Optional[float] = None
    condition_label: str = ""
    channel_names: Optional[tuple] = field(default=None)

    def __post_init__(self):
        arr = np.array(self.data, dtype=float, copy=True)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise StructureError(f"panel data must be 2-D, got shape {arr.shape}")
        n, p = arr.shape
        if n < 2 or p < 1:
            raise StructureError(f"panel needs n >= 2 and p >= 1, got n={n}, p={p}")
        if not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise InputError(f"non-finite value at time {bad[0]}, channel {bad[1]}")
        if self.sampling_rate_hz is not None and not self.sampling_rate_hz > 0:
            raise InputError("sampling_rate_hz must be positive")
        if self.channel_names is not None:
            names = tuple(str(c) for c in self.channel_names)
            if len(names) != p:
                raise StructureError(f"{len(names)} channel names for {p} channels")
            object.__setattr__(self, "channel_names", names)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other):
        if not isinstance(other, TimeSeriesPanel):
            return NotImplemented
        return (
            np.array_equal(self.data, other.data)
            and self.sampling_rate_hz == other.sampling_rate_hz
            and self.condition_label == other.condition_label
            and self.channel_names == other.channel_names
        )


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_panel(
    path,
    layout: str = ROWS_ARE_TIME,
    header: Optional[bool] = None,
    sampling_rate_hz: Optional[float] = None,
    condition_label: Optional[str] = None,
) -> TimeSeriesPanel:
    """Read a numeric CSV file into a panel.

    Parameters
    ----------
    path : path-like
        UTF-8, comma separated, ``.`` decimal separator. No quoting.
    layout : {"rows_are_time", "rows_are_channels"}
        Orientation of the file. The returned panel always has rows = time.
    header : bool or None
        Whether the first line holds channel names. ``None`` auto-detects: the
        first line is a header when none of its cells parse as numbers.
    sampling_rate_hz, condition_label
        Stored on the panel. The label defaults to the file stem.

    Raises
    ------
    ParseError
        A cell is empty, non-numeric or non-finite. The message names the
        1-based data row and column.
    StructureError
        Rows have differing lengths or the file holds no data.
    """
    if layout not in (ROWS_ARE_TIME, ROWS_ARE_CHANNELS):
        raise InputError(f"unknown layout {layout!r}")
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise StructureError(f"{path}: no data")

    if header is None:
        header = not any(_is_number(c.strip()) for c in rows[0])
    names = None
    if header:
        names = tuple(c.strip() for c in rows[0])
        rows = rows[1:]
    if not rows:
        raise StructureError(f"{path}: header but no data rows")

    width = len(rows[0]) if names is None else len(names)
    values = np.empty((len(rows), width))
    line_offset = 2 if header else 1
    for i, row in enumerate(rows):
        if len(row) != width:
            raise StructureError(
                f"{path}: ragged row {i + 1} (line {i + line_offset}) has "
                f"{len(row)} fields, expected {width}"
            )
        for j, cell in enumerate(row):
            try:
                v = float(cell.strip())
            except ValueError:
                raise ParseError(
                    f"{path}: non-numeric cell {cell!r} at row {i + 1}, column {j + 1} "
                    f"(line {i + line_offset})",
                    row=i + 1,
                    column=j + 1,
                ) from None
            if not np.isfinite(v):
                raise ParseError(
                    f"{path}: non-finite cell {cell!r} at row {i + 1}, column {j + 1}",
                    row=i + 1,
                    column=j + 1,
                )
            values[i, j] = v

    if layout == ROWS_ARE_CHANNELS:
        values = values.T
        names = None
    label = path.stem if condition_label is None else condition_label
    return TimeSeriesPanel(values, sampling_rate_hz, label, names)


def write_panel(panel: TimeSeriesPanel, path, header: bool = True) -> None:
    """Write a panel as CSV with rows = time.

    Values use 17 significant digits, so :func:`load_panel` reproduces them
    exactly. A header line is written when ``header`` is set; channels without
    names get ``ch0, ch1, ...``.
    """
    names = panel.channel_names or tuple(f"ch{k}" for k in range(panel.p))
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        if header:
            fh.write(",".join(names) + "\n")
        np.savetxt(fh, panel.data, delimiter=",", fmt="%.17g")


def demean(panel: TimeSeriesPanel) -> TimeSeriesPanel:
    """Subtract each channel's sample mean."""
    centered = panel.data - panel.data.mean(axis=0, keepdims=True)
    return replace(panel, data=centered)


def segment(panel: TimeSeriesPanel, start_index: int, end_index: int) -> TimeSeriesPanel:
    """Rows ``[start_index, end_index)`` of ``panel``.

    The segment is not re-centered; call :func:`demean` on it when the
    analysis treats each block as its own stationary stretch.
    """
    n = panel.n
    if not (0 <= start_index < end_index <= n):
        raise BoundsError(f"segment [{start_index}, {end_index}) outside [0, {n})")
    if end_index - start_index < 2:
        raise BoundsError("segment must contain at least 2 rows")
    return replace(panel, data=panel.data[start_index:end_index])

