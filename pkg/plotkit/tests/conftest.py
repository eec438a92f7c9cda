"""Shared fixtures: tiny schema-conforming CSV files written on demand."""

import pytest

TRAJ_HEADER = "t,cum_realized_reward,external_regret_prefix,swap_regret_prefix"
SUMMARY_HEADER = (
    "T,seed,final_cum_realized_reward,final_external_regret,final_swap_regret"
)


def write_trajectory(path, rows, header=TRAJ_HEADER):
    lines = [header] + [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def linear_rows(T, stride, slope=1.0, regret=0.5):
    """A plausible running-totals table: reward and regret grow linearly."""
    return [
        (t, slope * t, regret * t, regret * t)
        for t in range(stride, T + 1, stride)
    ]


@pytest.fixture
def run_dir(tmp_path):
    """Six trajectory CSVs: two experiments x three seeds on one grid."""
    for name, slope in (("alpha", 1.0), ("beta", 0.25)):
        for seed in range(3):
            write_trajectory(
                tmp_path / f"{name}_T100_seed{seed}.csv",
                linear_rows(100, 10, slope=slope + 0.01 * seed),
            )
    return tmp_path


@pytest.fixture
def summary_csv(tmp_path):
    """A two-horizon summary with the ratio column, as the harness writes it."""
    lines = [
        SUMMARY_HEADER + ",swap_ratio_vs_prev_T",
        "100,0,55.0,10.0,12.0,",
        "100,1,50.0,11.0,14.0,",
        "100,mean,52.5,10.5,13.0,",
        "100,stddev,2.5,0.5,1.0,",
        "200,0,110.0,14.0,18.0,1.5",
        "200,1,101.0,15.0,19.6,1.4",
        "200,mean,105.5,14.5,18.8,1.45",
        "200,stddev,4.5,0.5,0.8,0.05",
    ]
    path = tmp_path / "growth_summary.csv"
    path.write_text("\n".join(lines) + "\n")
    return path
