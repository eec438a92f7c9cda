"""Multi-scale master loop: uniform scale mixture, shared estimation, restarts.

Each day the master mixes its K scale learners' frozen policies uniformly,
draws one action, observes one scalar reward, and broadcasts a single
pseudo-inverse estimate of the hidden reward vector to every scale.  Scale k
restarts its learner every H^k days, so at any moment the scales cover
geometrically nested lookback windows.  A doubling wrapper stacks fresh
masters on epochs of doubling length for anytime guarantees.

The learner-facing path is deliberately narrow: ``estimate_day`` receives
the realized scalar, never the hidden reward vector, which exists only in
the evaluation ledger.
"""

import logging
from dataclasses import replace

import numpy as np

from . import learners, linalg, rngkit, spanner
from .errors import SwapcombError
from .policy import Policy
from .regret import DayRecord, RegretLedger, ScaleInterval

logger = logging.getLogger("swapcomb.master")


def estimate_day(policy: Policy, sampled, realized: float) -> np.ndarray:
    """Broadcast estimate for one day of play.

    This is the learner-side boundary: the hidden reward vector never
    reaches it, only the realized scalar.  A zero reward broadcasts the
    zero vector without touching the pseudo-inverse.
    """
    vec = np.asarray(sampled, dtype=float)
    if realized == 0.0:
        return np.zeros(policy.d)
    sigma = linalg.co_occurrence(policy)
    splus = linalg.pseudo_inverse(sigma)
    return float(realized) * (splus @ vec)


class ScaleSlot:
    """One laziness scale: its live learner plus the (k, l) interval clock."""

    def __init__(self, k: int):
        self.k = k
        self.l = 0
        self.learner = None
        self.interval = None


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class Master:
    """Day-loop state over K scale learners with interval restarts."""

    def __init__(
        self,
        aset,
        T: int,
        H: int,
        K: int | None = None,
        mode: str = "practical",
        learner: str = "combcp",
        seed: int = 0,
        gamma: float | None = None,
        eta: float | None = None,
        c: float = 1.0,
        sp: spanner.Spanner | None = None,
        cap: int = 10000,
        labels: tuple = ("master",),
    ):
        if int(T) != T or T < 1:
            raise ValueError(f"T must be a positive integer, got {T!r}")
        if int(H) != H or H < 2:
            raise ValueError(f"H must be an integer >= 2, got {H!r}")
        if learner not in ("combcp", "comband"):
            raise ValueError(f"unknown learner kind {learner!r}")
        if mode not in ("theory", "practical"):
            raise ValueError(f"mode must be 'theory' or 'practical', got {mode!r}")
        T, H = int(T), int(H)

        if K is None:
            if mode == "theory":
                K = 1
                while H**K < T:
                    K += 1
            else:
                widest = 0
                while H ** (widest + 1) <= T:
                    widest += 1
                K = max(2, widest)
                logger.info(
                    "practical mode: defaulting to K=%d scales for T=%d, H=%d", K, T, H
                )
        K = int(K)
        if K < 1:
            raise ValueError(f"K must be a positive integer, got {K!r}")
        if mode == "theory" and not H ** (K - 1) <= T <= H**K:
            raise ValueError(
                f"theory mode requires H^(K-1) <= T <= H^K; "
                f"got T={T}, H={H}, K={K}"
            )

        self.aset = aset
        self.T = T
        self.H = H
        self.K = K
        self.mode = mode
        self.learner_kind = learner
        self.cap = cap
        self._tuning = dict(gamma=gamma, eta=eta, c=c)
        self.sp = sp if sp is not None else spanner.build_spanner(aset, C=2.0)
        self.lam_min = linalg.min_nonzero_eigenvalue(
            linalg.co_occurrence(spanner.exploration_policy(self.sp))
        )
        self.rng = rngkit.stream(seed, *labels)
        self.t = 1
        self.ledger = RegretLedger(K=K)
        self.scales = [ScaleSlot(k) for k in range(1, K + 1)]
        for slot in self.scales:
            self._restart_scale(slot)

    # -- scale bookkeeping ---------------------------------------------------

    def _schedule_for(self, k: int) -> learners.ScheduleParams:
        tun = self._tuning
        if self.learner_kind == "comband":
            return learners.comband_schedule(
                self.lam_min, self.aset.m, self.H, k, mode=self.mode,
                gamma=tun["gamma"], eta=tun["eta"], c=tun["c"],
            )
        return learners.combcp_schedule(
            self.aset.d, self.aset.m, self.H, k, mode=self.mode,
            gamma=tun["gamma"], eta=tun["eta"], c=tun["c"],
        )

    def _restart_scale(self, slot: ScaleSlot) -> None:
        if slot.interval is not None:
            slot.interval.end = self.t - 1
        params = self._schedule_for(slot.k)
        if self.learner_kind == "comband":
            state = learners.ComBand(self.aset, self.sp, params, cap=self.cap)
        else:
            state = learners.ComBCP(self.aset, self.sp, params)
        # effective meta-day count for a horizon-truncated final interval
        remaining = self.T - self.t + 1
        span = min(self.H**slot.k, remaining)
        state.n_meta_days = _ceil_div(span, self.H ** (slot.k - 1))
        slot.learner = state
        slot.l += 1
        slot.interval = ScaleInterval(
            k=slot.k, l=slot.l, start=self.t, reward_sum=np.zeros(self.aset.d)
        )
        self.ledger.scale_intervals.append(slot.interval)
        self.ledger.restart_days.setdefault(slot.k, []).append(self.t)

    def _maybe_restart(self) -> None:
        for slot in self.scales:
            if (self.t - 1) % self.H**slot.k == 0:
                self._restart_scale(slot)

    # -- day loop ------------------------------------------------------------

    def mixture(self) -> Policy:
        return Policy.mix(
            [slot.learner.frozen_policy for slot in self.scales],
            np.full(self.K, 1.0 / self.K),
        )

    def step(self, reward_vector) -> tuple[np.ndarray, float]:
        """Play one day; the caller supplies the hidden vector, the learner
        path sees only the realized scalar."""
        if self.t > self.T:
            raise ValueError(f"horizon {self.T} exhausted")
        if self.t > 1:
            self._maybe_restart()
        r_vec = np.asarray(reward_vector, dtype=float)
        if r_vec.shape != (self.aset.d,):
            raise ValueError(
                f"reward vector has shape {r_vec.shape}, expected ({self.aset.d},)"
            )
        phat = self.mixture()
        sampled = np.array(phat.sample(self.rng), dtype=np.int8)
        realized = float(np.dot(r_vec, sampled))
        est = estimate_day(phat, sampled, realized)
        for slot in self.scales:
            pol = slot.learner.frozen_policy
            slot.interval.reward_sum += r_vec
            slot.interval.expected_true += pol.expected_reward(r_vec)
            slot.interval.expected_est += pol.expected_reward(est)
            try:
                slot.learner.ingest(est)
            except SwapcombError as err:
                note = (
                    f"(day t={self.t}, scale k={slot.k}, interval l={slot.l}, "
                    f"meta-day h={slot.learner.h})"
                )
                err.args = (f"{err.args[0]} {note}",) if err.args else (note,)
                raise
        self.ledger.append_day(
            DayRecord(
                t=self.t,
                policy=phat,
                sampled=sampled,
                reward_vector=r_vec.copy(),
                realized=realized,
            )
        )
        self.t += 1
        return sampled, realized

    def finalize(self) -> RegretLedger:
        """Close open interval records at the last played day."""
        for slot in self.scales:
            if slot.interval is not None and slot.interval.end == 0:
                slot.interval.end = self.t - 1
        return self.ledger


def run_horizon(
    aset,
    rewards,
    H: int,
    K: int | None = None,
    mode: str = "practical",
    learner: str = "combcp",
    seed: int = 0,
    gamma: float | None = None,
    eta: float | None = None,
    c: float = 1.0,
    sp: spanner.Spanner | None = None,
    cap: int = 10000,
    T: int | None = None,
    labels: tuple = ("master",),
) -> RegretLedger:
    """Run the master for T days against a reward sequence; return the ledger."""
    if T is None:
        T = len(rewards)
    if T == 0:
        return RegretLedger(K=K)
    if T > len(rewards):
        raise ValueError(f"horizon {T} exceeds reward sequence length {len(rewards)}")
    st = Master(
        aset, T=T, H=H, K=K, mode=mode, learner=learner, seed=seed,
        gamma=gamma, eta=eta, c=c, sp=sp, cap=cap, labels=labels,
    )
    for t in range(1, T + 1):
        st.step(rewards.day(t))
    return st.finalize()


class DoublingResult:
    """Concatenated trajectory of doubling epochs with anytime regret queries."""

    def __init__(self, ledger: RegretLedger, boundaries, epochs):
        self.ledger = ledger
        self.boundaries = boundaries
        self.epochs = epochs
        days = ledger.days
        if days:
            self._cum_rewards = np.cumsum(
                np.array([rec.reward_vector for rec in days]), axis=0
            )
            self._cum_expected = np.cumsum(
                [rec.policy.expected_reward(rec.reward_vector) for rec in days]
            )
        else:
            self._cum_rewards = None
            self._cum_expected = None

    def anytime_external_regret(self, aset, t: int) -> float:
        if not 0 <= t <= self.ledger.T:
            raise IndexError(f"prefix {t} outside 0..{self.ledger.T}")
        if t == 0:
            return 0.0
        total = self._cum_rewards[t - 1]
        best = aset.lmo(total)
        return float(np.dot(total, best)) - float(self._cum_expected[t - 1])

    def anytime_swap_regret(self, aset, t: int) -> float:
        from . import regret

        return regret.swap_regret(self.ledger.prefix(t), aset)


def doubling_wrapper(
    aset,
    rewards,
    H: int,
    T: int | None = None,
    seed: int = 0,
    **master_kwargs,
) -> DoublingResult:
    """Anytime wrapper: fresh master per epoch of length 1, 2, 4, 8, ...

    The final epoch may stop early at the total horizon; epoch ledgers are
    concatenated with globally renumbered days.
    """
    if T is None:
        T = len(rewards)
    if T > len(rewards):
        raise ValueError(f"horizon {T} exceeds reward sequence length {len(rewards)}")
    combined = RegretLedger()
    boundaries = []
    epochs = []
    start = 1
    i = 0
    while start <= T:
        planned = 2**i
        end = min(start + planned - 1, T)
        st = Master(
            aset, T=planned, H=H, seed=seed,
            labels=("doubling", f"epoch-{i}"), **master_kwargs,
        )
        for t in range(start, end + 1):
            st.step(rewards.day(t))
        epoch_ledger = st.finalize()
        for rec in epoch_ledger.days:
            combined.append_day(replace(rec, t=start + rec.t - 1))
        boundaries.append((start, end))
        epochs.append((start, end, epoch_ledger))
        start = end + 1
        i += 1
    return DoublingResult(combined, boundaries, epochs)
