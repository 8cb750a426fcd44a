"""Tabular input data and counting-process survival records.

Survival input uses the last-observation-time convention: each row carries
the time its interval ends, and a subject's consecutive rows are turned into
half-open intervals ``(previous time, time]`` with the first interval opening
at 0. Explicit start/stop columns are supported as an alternative.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyFile,
    InvalidEventFlag,
    InvalidWeight,
    MissingColumn,
    NonIncreasingTime,
    NonNumericCell,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """Column-oriented table of finite float64 values.

    ``columns`` preserves insertion order; every column has ``n_rows``
    entries and the arrays are marked read-only, so a Dataset can be shared
    freely across threads.
    """

    columns: dict[str, np.ndarray]
    n_rows: int = field(init=False)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"ragged columns: lengths {sorted(lengths)}")
        cols = {
            name: _frozen(np.array(v, dtype=np.float64))
            for name, v in self.columns.items()
        }
        for name, v in cols.items():
            if not np.all(np.isfinite(v)):
                row = int(np.flatnonzero(~np.isfinite(v))[0]) + 1
                raise NonNumericCell(row, name)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "n_rows", lengths.pop() if lengths else 0)

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise MissingColumn(name) from None

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(self.columns)


@dataclass(frozen=True)
class SurvivalFrame:
    """Counting-process survival records.

    One record per row: subject id, half-open at-risk interval
    ``(start, stop]``, event flag for that interval, and a covariate vector.
    Arrays are read-only after construction.
    """

    subject_ids: np.ndarray
    start: np.ndarray
    stop: np.ndarray
    event: np.ndarray
    covariates: np.ndarray
    covariate_names: tuple[str, ...]

    def __post_init__(self):
        n = len(self.stop)
        ids = _frozen(np.array(self.subject_ids, dtype=np.float64))
        start = _frozen(np.array(self.start, dtype=np.float64))
        stop = _frozen(np.array(self.stop, dtype=np.float64))
        event = _frozen(np.array(self.event, dtype=bool))
        x = _frozen(np.array(self.covariates, dtype=np.float64, order="C", ndmin=2))
        if not (len(ids) == len(start) == len(event) == n and x.shape[0] == n):
            raise ValueError("record arrays have mismatched lengths")
        if x.ndim != 2 or x.shape[1] != len(self.covariate_names):
            raise ValueError("covariate matrix does not match covariate_names")
        for name, arr in (
            ("subject_ids", ids),
            ("start", start),
            ("stop", stop),
            ("covariates", x),
        ):
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "event", event)
        object.__setattr__(self, "covariate_names", tuple(self.covariate_names))
        # start < stop on every record; per subject the intervals chain.
        bad = np.flatnonzero(start >= stop)
        if bad.size:
            raise NonIncreasingTime(ids[bad[0]])
        last_stop: dict[float, float] = {}
        for i in range(n):
            sid = float(ids[i])
            if sid in last_stop and start[i] != last_stop[sid]:
                raise NonIncreasingTime(sid)
            last_stop[sid] = float(stop[i])

    @property
    def n_records(self) -> int:
        return len(self.stop)

    @property
    def n_subjects(self) -> int:
        return len(np.unique(self.subject_ids))

    @property
    def n_events(self) -> int:
        return int(self.event.sum())

    @property
    def total_time_at_risk(self) -> float:
        return float((self.stop - self.start).sum())

    @property
    def has_tied_event_times(self) -> bool:
        times = self.stop[self.event]
        return len(np.unique(times)) < len(times)


def load_csv(path, required_columns=()) -> Dataset:
    """Load a comma-separated file with a header row into a Dataset.

    Every cell is parsed as a float; blank or non-numeric cells (including
    nan/inf spellings) are rejected. Row order is preserved.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyFile(f"{path}: no header row") from None
        for name in required_columns:
            if name not in header:
                raise MissingColumn(name)
        raw: list[list[float]] = [[] for _ in header]
        for rownum, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise NonNumericCell(rownum, header[min(len(row), len(header) - 1)])
            for j, cell in enumerate(row):
                try:
                    value = float(cell)
                except ValueError:
                    raise NonNumericCell(rownum, header[j], cell) from None
                if not math.isfinite(value):
                    raise NonNumericCell(rownum, header[j], cell)
                raw[j].append(value)
    return Dataset({name: np.array(col) for name, col in zip(header, raw)})


def stset_reconstruct(
    d: Dataset,
    time_col: str,
    event_col: str,
    id_col: str,
    covariate_cols: list[str],
) -> SurvivalFrame:
    """Rebuild ``(start, stop]`` intervals from last-observation times.

    Within each subject (grouped by id value, rows kept in file order) the
    k-th row becomes the interval from the previous row's time (0 for the
    first row) to its own time, with that row's event flag. Times must be
    strictly increasing within a subject.
    """
    times = d.column(time_col)
    events = d.column(event_col)
    ids = d.column(id_col)
    x = np.column_stack([d.column(c) for c in covariate_cols]) if covariate_cols \
        else np.empty((d.n_rows, 0))

    for i, e in enumerate(events):
        if e not in (0.0, 1.0):
            raise InvalidEventFlag(i + 1, e)

    start = np.zeros(d.n_rows)
    last_time: dict[float, float] = {}
    for i in range(d.n_rows):
        sid = float(ids[i])
        prev = last_time.get(sid, 0.0)
        if times[i] <= prev:
            raise NonIncreasingTime(sid)
        start[i] = prev
        last_time[sid] = float(times[i])

    return SurvivalFrame(
        subject_ids=ids,
        start=start,
        stop=times,
        event=events.astype(bool),
        covariates=x,
        covariate_names=tuple(covariate_cols),
    )


def survival_frame_from_intervals(
    d: Dataset,
    start_col: str,
    stop_col: str,
    event_col: str,
    id_col: str,
    covariate_cols: list[str],
) -> SurvivalFrame:
    """Build a SurvivalFrame from explicit start/stop columns (no reconstruction)."""
    events = d.column(event_col)
    for i, e in enumerate(events):
        if e not in (0.0, 1.0):
            raise InvalidEventFlag(i + 1, e)
    x = np.column_stack([d.column(c) for c in covariate_cols]) if covariate_cols \
        else np.empty((d.n_rows, 0))
    return SurvivalFrame(
        subject_ids=d.column(id_col),
        start=d.column(start_col),
        stop=d.column(stop_col),
        event=events.astype(bool),
        covariates=x,
        covariate_names=tuple(covariate_cols),
    )


def replicate(d: Dataset, w: int) -> Dataset:
    """Repeat every row ``w`` times consecutively.

    The brute-force counterpart of a frequency weight: fitting the replicated
    data unweighted must match fitting the original with weight ``w``.
    """
    if not isinstance(w, (int, np.integer)) or w < 1:
        raise InvalidWeight(w)
    return Dataset({name: np.repeat(col, w) for name, col in d.columns.items()})


def replicate_frame(frame: SurvivalFrame, w: int) -> SurvivalFrame:
    """Repeat every survival record ``w`` times under fresh subject ids.

    Each copy of a subject gets its own id so that per-subject interval
    chaining still holds; risk sets are unaffected by the relabeling.
    """
    if not isinstance(w, (int, np.integer)) or w < 1:
        raise InvalidWeight(w)
    _, inverse = np.unique(frame.subject_ids, return_inverse=True)
    copies = np.tile(np.arange(w), frame.n_records)
    return SurvivalFrame(
        subject_ids=np.repeat(inverse * w, w) + copies,
        start=np.repeat(frame.start, w),
        stop=np.repeat(frame.stop, w),
        event=np.repeat(frame.event, w),
        covariates=np.repeat(frame.covariates, w, axis=0),
        covariate_names=frame.covariate_names,
    )
