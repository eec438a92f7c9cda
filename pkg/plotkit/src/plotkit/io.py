"""Schema-checked readers for the experiment harness's CSV files.

Two file shapes exist:

- trajectory CSVs (``<name>_T<horizon>_seed<seed>.csv``): per-day running
  totals with header ``t,cum_realized_reward,external_regret_prefix,
  swap_regret_prefix``;
- summary CSVs (``<name>_summary.csv``): one row per run with final values,
  plus ``mean`` and ``stddev`` rows per horizon and, when several horizons
  were run, a ``swap_ratio_vs_prev_T`` column pairing each seed with the
  same seed at the previous horizon.

The header row is the schema contract.  Readers compare it verbatim and
report mismatches with both column lists, so files written by a different
producer version fail at the door rather than misrender.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from glob import glob
from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = (
    "t",
    "cum_realized_reward",
    "external_regret_prefix",
    "swap_regret_prefix",
)
SUMMARY_COLUMNS = (
    "T",
    "seed",
    "final_cum_realized_reward",
    "final_external_regret",
    "final_swap_regret",
)
SUMMARY_RATIO_COLUMN = "swap_ratio_vs_prev_T"

_RUN_STEM = re.compile(r"^(?P<name>.+)_T(?P<T>\d+)_seed(?P<seed>\d+)$")


class PlotkitError(Exception):
    """Base class for every error this package raises on purpose."""


class SchemaError(PlotkitError):
    """A CSV file does not match the expected column schema."""


class EmptyDataError(PlotkitError):
    """A CSV file carries no data rows."""


@dataclass(frozen=True)
class Trajectory:
    """One run's per-day metrics, with metadata recovered from the filename."""

    path: Path
    label: str
    T: int | None
    seed: int | None
    t: np.ndarray
    cum_reward: np.ndarray
    external: np.ndarray
    swap: np.ndarray

    def column(self, metric: str) -> np.ndarray:
        if metric == "swap":
            return self.swap
        if metric == "external":
            return self.external
        if metric == "reward":
            return self.cum_reward
        raise ValueError(f"unknown metric {metric!r} (swap, external, reward)")


@dataclass(frozen=True)
class SummaryRow:
    T: int
    seed: int
    final_cum_reward: float
    final_external: float
    final_swap: float
    ratio: float | None


@dataclass(frozen=True)
class Summary:
    """A parsed summary CSV: per-seed rows plus the writer's aggregates."""

    path: Path
    name: str
    has_ratio: bool
    rows: list[SummaryRow] = field(default_factory=list)
    mean: dict[int, SummaryRow] = field(default_factory=dict)
    stddev: dict[int, SummaryRow] = field(default_factory=dict)

    @property
    def T_values(self) -> list[int]:
        return sorted({row.T for row in self.rows})

    def seeds_at(self, T: int) -> list[SummaryRow]:
        return [row for row in self.rows if row.T == T]


def _lines(path: Path) -> list[str]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise PlotkitError(f"{path}: {err}") from err
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise EmptyDataError(f"{path} is empty")
    return lines

def _check_header(path: Path, found: list[str], expected: tuple[str, ...]) -> None:
    if tuple(found) != expected:
        raise SchemaError(
            f"{path}: header mismatch; expected columns "
            f"[{', '.join(expected)}], found [{', '.join(found)}]"
        )


def _number(path: Path, line_no: int, col: str, cell: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise SchemaError(
            f"{path}: line {line_no}: column {col!r} holds non-numeric value {cell!r}"
        ) from None


def read_trajectory(path: str | Path) -> Trajectory:
    """Parse one per-day metrics CSV; header must match the schema verbatim."""
    path = Path(path)
    lines = _lines(path)
    _check_header(path, lines[0].split(","), TRAJECTORY_COLUMNS)
    if len(lines) == 1:
        raise EmptyDataError(f"{path} has a header but no data rows")
    data = np.empty((len(lines) - 1, 4))
    for i, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 4:
            raise SchemaError(
                f"{path}: line {i}: expected 4 cells "
                f"[{', '.join(TRAJECTORY_COLUMNS)}], found {len(cells)}"
            )
        data[i - 2] = [
            _number(path, i, col, cell)
            for col, cell in zip(TRAJECTORY_COLUMNS, cells)
        ]
    match = _RUN_STEM.match(path.stem)
    label = match["name"] if match else path.stem
    return Trajectory(
        path=path,
        label=label,
        T=int(match["T"]) if match else None,
        seed=int(match["seed"]) if match else None,
        t=data[:, 0],
        cum_reward=data[:, 1],
        external=data[:, 2],
        swap=data[:, 3],
    )


def read_summary(path: str | Path) -> Summary:
    """Parse a summary CSV, keeping the writer's mean/stddev rows separate."""
    path = Path(path)
    lines = _lines(path)
    header = lines[0].split(",")
    if tuple(header) == SUMMARY_COLUMNS:
        has_ratio = False
    elif tuple(header) == SUMMARY_COLUMNS + (SUMMARY_RATIO_COLUMN,):
        has_ratio = True
    else:
        raise SchemaError(
            f"{path}: header mismatch; expected columns "
            f"[{', '.join(SUMMARY_COLUMNS)}] optionally followed by "
            f"{SUMMARY_RATIO_COLUMN!r}, found [{', '.join(header)}]"
        )
    if len(lines) == 1:
        raise EmptyDataError(f"{path} has a header but no data rows")

    name = path.stem
    if name.endswith("_summary"):
        name = name[: -len("_summary")]
    out = Summary(path=path, name=name, has_ratio=has_ratio)
    width = len(header)
    for i, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != width:
            raise SchemaError(
                f"{path}: line {i}: expected {width} cells "
                f"[{', '.join(header)}], found {len(cells)}"
            )
        T = int(_number(path, i, "T", cells[0]))
        ratio = None
        if has_ratio and cells[5] != "":
            ratio = _number(path, i, SUMMARY_RATIO_COLUMN, cells[5])
        values = [
            _number(path, i, col, cell)
            for col, cell in zip(SUMMARY_COLUMNS[2:], cells[2:5])
        ]
        if cells[1] in ("mean", "stddev"):
            row = SummaryRow(T, -1, *values, ratio)
            target = out.mean if cells[1] == "mean" else out.stddev
            target[T] = row
        else:
            seed = int(_number(path, i, "seed", cells[1]))
            out.rows.append(SummaryRow(T, seed, *values, ratio))
    return out


def find_runs(patterns) -> list[Path]:
    """Expand glob patterns into a sorted, de-duplicated list of CSV paths."""
    if isinstance(patterns, (str, Path)):
        patterns = [patterns]
    found: list[Path] = []
    for pattern in patterns:
        found.extend(Path(p) for p in sorted(glob(str(pattern))))
    unique = sorted(set(found))
    if not unique:
        raise PlotkitError(
            "no CSV files matched " + ", ".join(repr(str(p)) for p in patterns)
        )
    return unique
