"""Adversaries, trajectory ledgers, and exact regret evaluation.

Reward sequences are certified at construction: the linear maximization
oracle bounds the best realized reward of every day, and sequences that
would exceed 1 are rescaled (with the factor logged and recorded).  The
evaluators work on exact per-day policy supports stored in the ledger, so
regret numbers carry no Monte Carlo noise: external regret costs one oracle
call on the summed rewards, swap regret one oracle call per distinct support
action.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .policy import Policy

logger = logging.getLogger("swapcomb.regret")

# A realized reward may exceed 1 by at most this much after certification.
_REALIZED_SLACK = 1e-12


# ---------------------------------------------------------------------------
# Reward sequences
# ---------------------------------------------------------------------------


class RewardSequence:
    """A horizon's worth of hidden reward vectors, certified to [0, 1].

    ``rewards`` is a read-only (T, d) array; ``scale_factor`` is the factor
    applied at construction to restore the realized-reward guarantee (1.0
    when the raw sequence already satisfied it).
    """

    def __init__(self, kind, rewards, scale_factor=1.0):
        self.kind = kind
        arr = np.ascontiguousarray(np.asarray(rewards, dtype=float))
        arr.setflags(write=False)
        self.rewards = arr
        self.scale_factor = float(scale_factor)

    def __len__(self):
        return self.rewards.shape[0]

    @property
    def d(self):
        return self.rewards.shape[1]

    def day(self, t: int) -> np.ndarray:
        """Reward vector of day ``t`` (1-based, matching the ledger)."""
        if not 1 <= t <= len(self):
            raise IndexError(f"day {t} outside horizon 1..{len(self)}")
        return self.rewards[t - 1]

    def __repr__(self):
        return f"RewardSequence(kind={self.kind!r}, T={len(self)}, d={self.d})"


def _certify(aset, kind, rows):
    """Scale the sequence so every realized reward lies in [0, 1]."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != aset.d:
        raise ValueError(
            f"reward rows have shape {rows.shape}, expected (T, {aset.d})"
        )
    worst = 0.0
    for r in rows:
        best = aset.lmo(r)
        worst = max(worst, float(np.dot(r, best)))
    scale = 1.0
    if worst > 1.0 + _REALIZED_SLACK:
        scale = 1.0 / worst
        rows = rows * scale
        logger.info(
            "rescaling %s rewards by %.6g (best realized reward was %.6g)",
            kind, scale, worst,
        )
    return RewardSequence(kind, rows, scale_factor=scale)


def iid_stochastic(aset, T, seed, means) -> RewardSequence:
    """Bernoulli rewards, independent across days and coordinates."""
    from . import rngkit

    means = np.asarray(means, dtype=float)
    if means.shape != (aset.d,):
        raise ValueError(f"means has shape {means.shape}, expected ({aset.d},)")
    if np.any((means < 0) | (means > 1)):
        raise ValueError("means must lie in [0, 1]")
    rng = rngkit.stream(seed, "adversary", "iid")
    rows = (rng.random((int(T), aset.d)) < means).astype(float)
    return _certify(aset, "iid_stochastic", rows)


def piecewise_switching(aset, blocks) -> RewardSequence:
    """Constant reward vector within each (length, vector) block."""
    rows = []
    for length, vec in blocks:
        if length < 1:
            raise ValueError(f"block length must be positive, got {length!r}")
        vec = np.asarray(vec, dtype=float)
        if np.any((vec < 0) | (vec > 1)):
            raise ValueError("block reward vectors must lie in [0, 1]")
        rows.extend([vec] * int(length))
    return _certify(aset, "piecewise_switching", np.array(rows))


def shortcut_adversary(aset, T) -> RewardSequence:
    """Reward 1 on the shortcut coordinate, 0 elsewhere, every day."""
    idx = getattr(getattr(aset, "dag", None), "shortcut_index", None)
    if idx is None:
        raise ValueError("action set does not define a shortcut coordinate")
    row = np.zeros(aset.d)
    row[idx] = 1.0
    return _certify(aset, "shortcut_adversary", np.tile(row, (int(T), 1)))


def custom_file(aset, path) -> RewardSequence:
    """Load rewards from CSV: one row per day, d columns, values in [0, 1]."""
    rows = np.loadtxt(path, delimiter=",", ndmin=2)
    if rows.shape[1] != aset.d:
        raise ValueError(
            f"{path}: expected {aset.d} columns, found {rows.shape[1]}"
        )
    if np.any((rows < 0) | (rows > 1)):
        raise ValueError(f"{path}: reward values must lie in [0, 1]")
    return _certify(aset, "custom_file", rows)


# ---------------------------------------------------------------------------
# Trajectory ledger
# ---------------------------------------------------------------------------


@dataclass
class DayRecord:
    """One day of play; the hidden reward vector is stored for evaluation only."""

    t: int
    policy: Policy
    sampled: np.ndarray
    reward_vector: np.ndarray
    realized: float


@dataclass
class ScaleInterval:
    """Instrumentation for one learner interval at laziness scale k.

    ``reward_sum`` accumulates the true reward vectors over the interval;
    ``expected_true``/``expected_est`` accumulate the scale policy's exact
    expected reward under the true vectors and under the broadcast estimates.
    """

    k: int
    l: int
    start: int
    end: int = 0
    reward_sum: np.ndarray = None
    expected_true: float = 0.0
    expected_est: float = 0.0


class RegretLedger:
    """Immutable-after-run record of a trajectory plus scale instrumentation."""

    def __init__(self, K=None):
        self.K = K
        self.days: list[DayRecord] = []
        self.scale_intervals: list[ScaleInterval] = []
        self.restart_days: dict[int, list[int]] = {}

    @property
    def T(self) -> int:
        return len(self.days)

    def append_day(self, record: DayRecord) -> None:
        self.days.append(record)

    def prefix(self, t: int) -> "RegretLedger":
        """First ``t`` days as a fresh ledger (instrumentation dropped)."""
        if not 0 <= t <= self.T:
            raise IndexError(f"prefix length {t} outside 0..{self.T}")
        out = RegretLedger(K=self.K)
        out.days = list(self.days[:t])
        return out


# ---------------------------------------------------------------------------
# Evaluators
# ---------------------------------------------------------------------------


def external_regret(ledger: RegretLedger, aset) -> float:
    """Best fixed action in hindsight minus the policy sequence's exact take."""
    if ledger.T == 0:
        return 0.0
    total = np.zeros(aset.d)
    got = 0.0
    for day in ledger.days:
        total += day.reward_vector
        got += day.policy.expected_reward(day.reward_vector)
    best = aset.lmo(total)
    return float(np.dot(total, best)) - got


def swap_regret(ledger: RegretLedger, aset) -> float:
    """Exact swap regret via per-support-action reward aggregation.

    For each distinct action M in the union of policy supports, G_M sums
    p_t(M) * R_t over the horizon; the best swap target for M is a single
    oracle call on G_M.  Equivalent to maximizing over all swap functions
    restricted to the support.
    """
    if ledger.T == 0:
        return 0.0
    aggregates: dict[bytes, list] = {}
    for day in ledger.days:
        for row, w in zip(day.policy.actions, day.policy.weights):
            key = row.tobytes()
            slot = aggregates.get(key)
            if slot is None:
                slot = [row, np.zeros(aset.d)]
                aggregates[key] = slot
            slot[1] += w * day.reward_vector
    total = 0.0
    for row, g in aggregates.values():
        target = aset.lmo(g)
        total += float(np.dot(g, target)) - float(np.dot(g, row))
    return total


@dataclass
class AuditReport:
    """Both sides of the swap-regret decomposition bound for one run."""

    lhs: float
    rhs: float
    slack: float
    holds: bool
    K: int
    T: int
    per_interval: list = field(default_factory=list)


def decomposition_audit(ledger: RegretLedger, aset) -> AuditReport:
    """Check swap regret against its scale-decomposition upper bound.

    The bound averages each interval learner's external regret (on true
    aggregated rewards) over the K scales and adds T/K for the uniform
    scale-mixing loss; the report carries the measured slack.
    """
    if ledger.K is None or not ledger.scale_intervals:
        raise ValueError("ledger carries no per-scale instrumentation")
    per_interval = []
    ext_total = 0.0
    for rec in ledger.scale_intervals:
        best = aset.lmo(rec.reward_sum)
        ext = float(np.dot(rec.reward_sum, best)) - rec.expected_true
        per_interval.append((rec.k, rec.l, ext))
        ext_total += ext
    rhs = ext_total / ledger.K + ledger.T / ledger.K
    lhs = swap_regret(ledger, aset)
    slack = rhs - lhs
    return AuditReport(
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        holds=lhs <= rhs + 1e-6,
        K=ledger.K,
        T=ledger.T,
        per_interval=per_interval,
    )
