"""Instance learners driven by broadcast reward estimates.

Two lazy learners share the same skeleton: accumulate estimate vectors for a
fixed number of days, then fire one mirror-descent step and freeze the
resulting sampling policy for the next block.  ``ComBCP`` maintains a
coordinate distribution and projects back onto the scaled action hull after
each multiplicative update; ``ComBand`` keeps explicit weights over an
enumerated action set.  Two non-lazy baselines round out the module: a direct
exponential-weights learner used to regression-test the lazy machinery, and a
replica of a marginal-based bandit algorithm whose vanishing exploration of
rarely-used coordinates the benchmark scenarios exercise.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import geometry, linalg, spanner
from .errors import OmdPreconditionViolated
from .policy import Policy

# Slack on the mirror-descent boundedness check; the condition itself is
# eta * ||X||_inf <= 1, enforced before every exponential update.
_PRECONDITION_SLACK = 1e-9


@dataclass(frozen=True)
class ScheduleParams:
    """Tuning constants for one learner instance.

    ``H`` is the number of meta-updates in the learner's interval, ``k`` its
    laziness scale (the policy is frozen for ``H**(k-1)`` consecutive days),
    ``gamma`` the exploration mixing weight and ``eta`` the learning rate.
    ``mode`` records whether the constants came from the analysis ("theory")
    or from the runnable defaults ("practical").
    """

    H: int
    k: int
    gamma: float
    eta: float
    mode: str


def _check_common(H, k, mode):
    if int(H) != H or H < 1:
        raise ValueError(f"H must be a positive integer, got {H!r}")
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if mode not in ("theory", "practical"):
        raise ValueError(f"mode must be 'theory' or 'practical', got {mode!r}")


def _finish(H, k, gamma, eta, mode):
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    return ScheduleParams(H=int(H), k=int(k), gamma=float(gamma), eta=float(eta), mode=mode)


def combcp_schedule(d, m, H, k, mode="practical", gamma=None, eta=None, c=1.0):
    """Schedule for the coordinate-distribution learner.

    Theory mode fixes ``gamma = H**(-1/3)`` and ``eta = 1/(d^3 sqrt(m)
    H**(k-1/3))`` and rejects overrides; practical mode keeps the same gamma
    default but uses the milder ``eta = c/(d sqrt(m) H**(k-1/3))`` so that
    desk-scale horizons produce visible learning.  An explicit ``eta`` names
    the scale-1 rate; scale k receives ``eta / H**(k-1)`` because it ingests
    estimates aggregated over ``H**(k-1)``-day meta-days, so each scale sees
    the same per-update magnitude and the same stability precondition.
    """
    _check_common(H, k, mode)
    if mode == "theory":
        if gamma is not None or eta is not None:
            raise ValueError("theory mode fixes gamma and eta; overrides are not allowed")
        gamma = H ** (-1 / 3)
        eta = 1.0 / (d**3 * math.sqrt(m) * H ** (k - 1 / 3))
    else:
        if gamma is None:
            gamma = H ** (-1 / 3)
        if eta is None:
            eta = c / (d * math.sqrt(m) * H ** (k - 1 / 3))
        else:
            eta = eta / H ** (k - 1)
    return _finish(H, k, gamma, eta, mode)


def comband_schedule(lam_min, m, H, k, mode="practical", gamma=None, eta=None, c=1.0):
    """Schedule for the enumerated exponential-weights learner.

    The learning rate scales with the measured smallest nonzero eigenvalue of
    the exploration co-occurrence matrix (``lam_min``), which is tighter than
    the worst-case lower bound and still valid.  An explicit ``eta`` names the
    scale-1 rate; scale k receives ``eta / H**(k-1)`` to compensate for
    meta-day aggregation, as in :func:`combcp_schedule`.
    """
    _check_common(H, k, mode)
    if lam_min <= 0:
        raise ValueError(f"lam_min must be positive, got {lam_min!r}")
    if mode == "theory":
        if gamma is not None or eta is not None:
            raise ValueError("theory mode fixes gamma and eta; overrides are not allowed")
        gamma = H ** (-1 / 3)
        eta = lam_min / (H ** (k - 1 / 3) * m)
    else:
        if gamma is None:
            gamma = H ** (-1 / 3)
        if eta is None:
            eta = c * lam_min / (H ** (k - 1 / 3) * m)
        else:
            eta = eta / H ** (k - 1)
    return _finish(H, k, gamma, eta, mode)


def _mixed_policy(inner: Policy, mu: Policy, gamma: float) -> Policy:
    if gamma >= 1.0:
        return mu
    return Policy.mix([inner, mu], [1.0 - gamma, gamma])


def _exp_weights(weights, actions_matrix, eta, x_acc):
    scores = eta * (actions_matrix @ x_acc)
    scores -= scores.max()
    w = weights * np.exp(scores)
    return w / w.sum()


class _LazyLearner:
    """Shared freeze/accumulate/update skeleton.

    ``ingest`` adds one day's estimate vector; after ``H**(k-1)`` days the
    accumulated vector drives a single update and the sampling policy is
    rebuilt.  ``frozen_policy`` is the same object in between, so callers can
    rely on bit-identical sampling within a block.
    """

    def __init__(self, aset, sp: spanner.Spanner, params: ScheduleParams):
        self.aset = aset
        self.sp = sp
        self.params = params
        self.mu = spanner.exploration_policy(sp)
        self.period = params.H ** (params.k - 1)
        self.h = 1
        self.tau = 0
        self.x_acc = np.zeros(aset.d)
        self.n_meta_days = params.H  # effective horizon; a driver may shorten it
        self.frozen_policy = None
        self._rebuild()

    def ingest(self, estimate) -> None:
        est = np.asarray(estimate, dtype=float)
        if est.shape != (self.aset.d,):
            raise ValueError(
                f"estimate has shape {est.shape}, expected ({self.aset.d},)"
            )
        self.x_acc = self.x_acc + est
        self.tau += 1
        if self.tau == self.period:
            self.meta_update()

    def meta_update(self) -> None:
        value = self.params.eta * float(np.max(np.abs(self.x_acc)))
        if value > 1.0 + _PRECONDITION_SLACK:
            raise OmdPreconditionViolated(
                value, context=f"scale k={self.params.k}, meta-day h={self.h}"
            )
        self._apply(self.x_acc)
        self.h += 1
        self.tau = 0
        self.x_acc = np.zeros(self.aset.d)
        self._rebuild()

    def flush(self) -> None:
        """Close out a truncated final block (driven by the caller's calendar)."""
        if self.tau:
            self.meta_update()

    def _apply(self, x_acc):  # pragma: no cover - overridden
        raise NotImplementedError

    def _rebuild(self):  # pragma: no cover - overridden
        raise NotImplementedError


class ComBCP(_LazyLearner):
    """Lazy learner over a coordinate distribution q with hull projection.

    Requires a fixed-weight action set: the polytope {q : m*q in conv(A)} is
    the projection target, and the sampling policy is a decomposition of q
    mixed with the spanner's uniform exploration policy.
    """

    def __init__(self, aset, sp, params):
        if not aset.fixed_weight:
            raise ValueError(
                "coordinate-distribution learner needs a fixed-weight action set"
            )
        self.q = geometry.kl_project(aset, np.full(aset.d, 1.0 / aset.d))
        super().__init__(aset, sp, params)

    def _apply(self, x_acc):
        tilted = self.q * np.exp(self.params.eta * x_acc)
        self.q = geometry.kl_project(self.aset, tilted)

    def _rebuild(self):
        if self.params.gamma >= 1.0:
            self.frozen_policy = self.mu
            return
        inner = geometry.decompose(self.aset, self.q)
        self.frozen_policy = _mixed_policy(inner, self.mu, self.params.gamma)


class ComBand(_LazyLearner):
    """Lazy exponential weights over an explicitly enumerated action set.

    Update weight for action M is exp(eta * X_acc . M); desk-scale only, the
    enumeration guard caps the table size.
    """

    def __init__(self, aset, sp, params, cap: int = 10000):
        acts = aset.enumerate(cap)
        self.actions = np.array(acts, dtype=np.int8)
        self.actions_matrix = np.array(acts, dtype=float)
        self.ptilde = np.full(len(acts), 1.0 / len(acts))
        super().__init__(aset, sp, params)

    def _apply(self, x_acc):
        self.ptilde = _exp_weights(
            self.ptilde, self.actions_matrix, self.params.eta, x_acc
        )

    def _rebuild(self):
        inner = Policy(self.actions, self.ptilde)
        self.frozen_policy = _mixed_policy(inner, self.mu, self.params.gamma)


class ExpWeightsBaseline:
    """Non-lazy exponential-weights bandit used as a regression baseline.

    Observes its own sampled action and scalar reward each day, forms the
    co-occurrence pseudo-inverse estimate from its current mixture policy and
    updates immediately.  With scale k=1 the lazy learner must reproduce this
    trajectory exactly.
    """

    def __init__(self, aset, sp: spanner.Spanner, gamma: float, eta: float, cap: int = 10000):
        if not (0.0 < gamma <= 1.0):
            raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
        if not eta > 0.0:
            raise ValueError(f"eta must be positive, got {eta!r}")
        acts = aset.enumerate(cap)
        self.actions = np.array(acts, dtype=np.int8)
        self.actions_matrix = np.array(acts, dtype=float)
        self.weights = np.full(len(acts), 1.0 / len(acts))
        self.mu = spanner.exploration_policy(sp)
        self.gamma = gamma
        self.eta = eta
        self._rebuild()

    def _rebuild(self):
        inner = Policy(self.actions, self.weights)
        self.frozen_policy = _mixed_policy(inner, self.mu, self.gamma)

    def observe(self, action, reward: float) -> None:
        sigma = linalg.co_occurrence(self.frozen_policy)
        splus = linalg.pseudo_inverse(sigma)
        est = reward * (splus @ np.asarray(action, dtype=float))
        self.weights = _exp_weights(self.weights, self.actions_matrix, self.eta, est)
        self._rebuild()


class CombExpReplica:
    """Marginal-based bandit with exploration proportional to average usage.

    The exploration distribution mu0 puts mass on each coordinate in
    proportion to how many actions use it, so coordinates used by a vanishing
    fraction of actions are almost never explored.  A zero observed reward
    triggers no update at all, which the benchmark scenarios exploit: the
    policy (and its co-occurrence pseudo-inverse) is cached until the
    coordinate distribution actually changes.
    """

    def __init__(self, aset, T: int, cap: int = 100000):
        if T < 1:
            raise ValueError(f"T must be a positive integer, got {T!r}")
        acts = aset.enumerate(cap)
        mat = np.array(acts, dtype=float)
        n_actions, d = mat.shape
        m = aset.m
        self.aset = aset
        self.mu0 = mat.sum(axis=0) / (m * n_actions)
        mu_min = m * float(self.mu0.min())
        lam = linalg.min_nonzero_eigenvalue(
            linalg.co_occurrence(Policy.uniform(np.array(acts, dtype=np.int8)))
        )
        C = lam / m**1.5
        explore = math.sqrt(m * math.log(1.0 / mu_min))
        self.gamma = explore / (explore + math.sqrt(C * (C * m**2 * d + m) * T))
        self.eta = self.gamma * C
        self.q = self.mu0.copy()
        self._cached = None  # (policy, splus), invalidated when q changes

    def policy(self) -> Policy:
        if self._cached is None:
            qprime = (1.0 - self.gamma) * self.q + self.gamma * self.mu0
            pol = geometry.decompose(self.aset, qprime)
            splus = linalg.pseudo_inverse(linalg.co_occurrence(pol))
            self._cached = (pol, splus)
        return self._cached[0]

    def observe(self, action, reward: float) -> None:
        self.policy()  # ensure the sampling-time pseudo-inverse is in the cache
        if reward == 0.0:
            return
        _, splus = self._cached
        est = reward * (splus @ np.asarray(action, dtype=float))
        tilted = self.q * np.exp(self.eta * est)
        self.q = geometry.kl_project(self.aset, tilted)
        self._cached = None


def combcp_new(aset, sp, params) -> ComBCP:
    return ComBCP(aset, sp, params)


def combcp_ingest(state: ComBCP, estimate) -> ComBCP:
    state.ingest(estimate)
    return state


def combcp_meta_update(state: ComBCP) -> ComBCP:
    state.meta_update()
    return state


def comband_new(aset, sp, params, cap: int = 10000) -> ComBand:
    return ComBand(aset, sp, params, cap=cap)


def comband_ingest(state: ComBand, estimate) -> ComBand:
    state.ingest(estimate)
    return state


def comband_meta_update(state: ComBand) -> ComBand:
    state.meta_update()
    return state


def combexp_replica_step(state: CombExpReplica, rng: np.random.Generator, reward_vector) -> np.ndarray:
    """Advance the replica one day: sample, observe the scalar, update.

    Returns the sampled action so callers can score the day.
    """
    sampled = state.policy().sample(rng)
    r = float(np.dot(np.asarray(reward_vector, dtype=float), sampled))
    state.observe(sampled, r)
    return sampled
