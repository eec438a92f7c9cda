"""Figures from bandit-experiment CSV logs.

This package is a pure reader of the experiment harness's CSV output: it
never re-simulates and never recomputes regret.  The CSV header rows double
as schema version checks, so a file from an incompatible producer fails
loudly with the expected and found column names.

- ``io``       schema-checked readers for trajectory and summary CSVs
- ``figures``  regret curves, the two-learner comparison figure, ratio charts
- ``cli``      the ``plotkit`` command
"""

from .io import (
    EmptyDataError,
    PlotkitError,
    SchemaError,
    Summary,
    SummaryRow,
    Trajectory,
    find_runs,
    read_summary,
    read_trajectory,
)
from .figures import counterexample_figure, plot_regret, trend_ratio_chart

__all__ = [
    "EmptyDataError",
    "PlotkitError",
    "SchemaError",
    "Summary",
    "SummaryRow",
    "Trajectory",
    "counterexample_figure",
    "find_runs",
    "plot_regret",
    "read_summary",
    "read_trajectory",
    "trend_ratio_chart",
]

__version__ = "0.1.0"
