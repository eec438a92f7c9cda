"""Figure builders over parsed CSVs.

Every public function validates all of its inputs before touching the output
path, so a schema mismatch or an empty file never leaves a truncated image
behind.  All values plotted come straight from the files: these builders
group, average for display, and draw -- they never recompute regret.

Rendering uses the object-oriented matplotlib API (no pyplot), so importing
this module never selects a GUI backend or touches global state.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .io import PlotkitError, Trajectory, read_summary, read_trajectory

_SEED_ALPHA = 0.3
_BAND_ALPHA = 0.12
_YLABEL = {
    "swap": "swap regret prefix",
    "external": "external regret prefix",
    "reward": "cumulative realized reward",
}


def _group_runs(trajs: list[Trajectory]) -> list[tuple[str, list[Trajectory]]]:
    """Bucket trajectories by (experiment label, horizon), insertion-ordered."""
    groups: dict[tuple, list[Trajectory]] = {}
    for tr in trajs:
        groups.setdefault((tr.label, tr.T), []).append(tr)
    out = []
    for (label, T), members in groups.items():
        name = label if T is None else f"{label} T={T}"
        grid = members[0].t
        for tr in members[1:]:
            if not np.array_equal(tr.t, grid):
                raise PlotkitError(
                    f"run files for {name!r} disagree on the day grid: "
                    f"{members[0].path.name} vs {tr.path.name}"
                )
        out.append((name, members))
    return out


def _draw_groups(ax, trajs: list[Trajectory], metric: str) -> None:
    """Faint per-seed lines, a min-max band, and a labeled mean per group."""
    from matplotlib import rcParams

    cycle = rcParams["axes.prop_cycle"].by_key().get("color", ["C0"])
    for i, (name, members) in enumerate(_group_runs(trajs)):
        color = cycle[i % len(cycle)]
        series = np.vstack([tr.column(metric) for tr in members])
        t = members[0].t
        if len(members) == 1:
            ax.plot(t, series[0], linewidth=1.8, color=color, label=name)
            continue
        for row in series:
            ax.plot(t, row, linewidth=0.8, alpha=_SEED_ALPHA, color=color)
        ax.fill_between(
            t, series.min(axis=0), series.max(axis=0), alpha=_BAND_ALPHA, color=color
        )
        ax.plot(
            t,
            series.mean(axis=0),
            linewidth=2.2,
            color=color,
            label=f"{name} (mean of {len(members)})",
        )


def _regret_figure(trajs: list[Trajectory], metric: str, loglog: bool) -> Figure:
    fig = Figure(figsize=(7.5, 5.0), constrained_layout=True)
    ax = fig.subplots()
    _draw_groups(ax, trajs, metric)
    ax.set_xlabel("day")
    ax.set_ylabel(_YLABEL[metric])
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend()
    return fig


def plot_regret(paths, out, metric: str = "swap", loglog: bool = False) -> Path:
    """Render prefix-regret curves for a set of trajectory CSVs.

    One faint line per seed, a min-max band, and a mean line per
    (experiment, horizon) group; a single-seed group draws one plain curve.
    """
    if metric not in _YLABEL:
        raise PlotkitError(f"unknown metric {metric!r} (swap, external, reward)")
    trajs = [read_trajectory(p) for p in paths]
    if not trajs:
        raise PlotkitError("no trajectory CSVs given")
    fig = _regret_figure(trajs, metric, loglog)
    out = Path(out)
    fig.savefig(out, dpi=150)
    return out


def counterexample_figure(replica_paths, fixed_paths, out) -> Path:
    """Two labeled bundles of cumulative-reward curves on one axis.

    Intended for the needle-instance pair of experiments: the same adversary
    and graph, one learner exploring by uniform marginals and one by a
    barycentric spanner.  Labels come from the experiment names embedded in
    the CSV filenames.
    """
    groups = [
        [read_trajectory(p) for p in replica_paths],
        [read_trajectory(p) for p in fixed_paths],
    ]
    for side, trajs in zip(("first", "second"), groups):
        if not trajs:
            raise PlotkitError(f"{side} comparison group has no trajectory CSVs")
    fig = Figure(figsize=(7.5, 5.0), constrained_layout=True)
    ax = fig.subplots()
    _draw_groups(ax, groups[0] + groups[1], "reward")
    ax.set_xlabel("day")
    ax.set_ylabel(_YLABEL["reward"])
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.savefig(Path(out), dpi=150)
    return Path(out)


def trend_ratio_chart(summary_path, out) -> Path:
    """Final swap regret by horizon, next to the per-doubling growth ratios.

    Reads one summary CSV that covers several horizons.  The left panel shows
    per-seed finals and the writer's mean row; the right panel shows the
    ``swap_ratio_vs_prev_T`` column (per-seed dots and the mean row) against
    the linear-growth reference ratio of 2.
    """
    s = read_summary(summary_path)
    T_values = s.T_values
    if len(T_values) < 2 or not s.has_ratio:
        raise PlotkitError(
            f"{s.path}: ratio chart needs a summary spanning at least two "
            f"horizons with the {'swap_ratio_vs_prev_T'!r} column"
        )

    fig = Figure(figsize=(11.0, 4.6), constrained_layout=True)
    left, right = fig.subplots(1, 2)

    for T in T_values:
        rows = s.seeds_at(T)
        left.plot([T] * len(rows), [r.final_swap for r in rows], "o",
                  color="tab:gray", alpha=_SEED_ALPHA, markersize=4)
    means = [s.mean[T].final_swap for T in T_values if T in s.mean]
    left.plot(T_values[: len(means)], means, "o-", color="tab:blue",
              label="mean over seeds")
    left.set_xscale("log", base=2)
    left.set_xticks(T_values, [str(T) for T in T_values])
    left.set_xlabel("horizon T")
    left.set_ylabel("final swap regret")
    left.grid(True, alpha=0.3)
    left.legend()

    doubling = [(prev, T) for prev, T in zip(T_values, T_values[1:])]
    xs = np.arange(len(doubling))
    mean_ratios = []
    for i, (prev, T) in enumerate(doubling):
        seeds = [r.ratio for r in s.seeds_at(T) if r.ratio is not None]
        right.plot([i] * len(seeds), seeds, "o", color="tab:gray",
                   alpha=_SEED_ALPHA, markersize=4)
        row = s.mean.get(T)
        mean_ratios.append(row.ratio if row is not None else None)
    if all(r is None for r in mean_ratios):
        raise PlotkitError(f"{s.path}: every ratio cell is blank")
    right.plot(xs, [np.nan if r is None else r for r in mean_ratios],
               "o-", color="tab:blue", label="mean ratio")
    right.axhline(2.0, linestyle="--", color="tab:red", linewidth=1.2,
                  label="linear growth (2.0)")
    right.set_xticks(xs, [f"{p}→{T}" for p, T in doubling])
    right.set_xlabel("horizon doubling")
    right.set_ylabel("swap(2T) / swap(T)")
    right.set_ylim(bottom=0.0)
    right.grid(True, alpha=0.3)
    right.legend()

    out = Path(out)
    fig.savefig(out, dpi=150)
    return out
