"""One scalar per day is enough: unbiased reward recovery on 2-subsets.

A bandit learner that plays a subset M of coordinates sees only the sum of
the rewards it touched, never the vector behind it.  This walkthrough builds
the machinery that turns those scalars back into a full reward estimate:

1. an exploration policy driven by an approximate barycentric spanner,
2. the co-occurrence matrix of the mixed sampling policy,
3. the rank-one importance-weighted estimator r * pinv(Sigma) @ M.

Averaged over many days the estimator matches the projection of the true
reward vector onto the span of the played actions -- exactly the part of the
reward any algorithm confined to this action set can ever perceive.

Run:  python3 demos/estimator_tour.py
"""

import numpy as np

from swapcomb import linalg, rngkit, spanner
from swapcomb.domains import MSets
from swapcomb.policy import Policy

rng = rngkit.stream(7, "demo", "estimator-tour")

# ---------------------------------------------------------------------------
# 1. The action set: all 2-subsets of 5 coordinates, as 0/1 vectors.
# ---------------------------------------------------------------------------
aset = MSets(5, 2)
actions = aset.enumerate(100)
print(f"action set: {aset.kind}(d={aset.d}, m={aset.m}), {len(actions)} actions")

# ---------------------------------------------------------------------------
# 2. Exploration.  A barycentric spanner picks d actions that are as
#    "spread out" as linearly possible; playing them uniformly guarantees
#    the co-occurrence matrix is well conditioned on the action span.
# ---------------------------------------------------------------------------
sp = spanner.build_spanner(aset, C=2.0)
explore = spanner.exploration_policy(sp)
lam = linalg.min_nonzero_eigenvalue(linalg.co_occurrence(explore))
floor = 1.0 / (4 * aset.d**3)
print(f"spanner size: {sp.basis_matrix_rank} actions")
print(f"exploration eigenvalue floor: {lam:.5f} >= 1/(4 d^3) = {floor:.5f}")

# ---------------------------------------------------------------------------
# 3. The sampling policy: mostly greedy on two favourite subsets, with a
#    10% exploration mixture to keep every direction observable.
# ---------------------------------------------------------------------------
favourites = Policy([actions[0], actions[4]], [0.7, 0.3])
policy = Policy.mix([favourites, explore], [0.9, 0.1])
sigma = linalg.co_occurrence(policy)
sigma_plus = linalg.pseudo_inverse(sigma)

# ---------------------------------------------------------------------------
# 4. Play.  The adversary's hidden vector never leaves this block; the
#    learner sees one float per day.
# ---------------------------------------------------------------------------
hidden = np.array([0.9, 0.1, 0.5, 0.3, 0.7])
n_days = 200_000
estimate_sum = np.zeros(aset.d)
for _ in range(n_days):
    played = policy.sample(rng)
    scalar = float(hidden @ played)  # the only thing the learner observes
    estimate_sum += scalar * (sigma_plus @ played)
empirical = estimate_sum / n_days

# ---------------------------------------------------------------------------
# 5. The moment of truth.  The estimator's exact mean is the span projection
#    of the hidden vector; the empirical average converges to it at 1/sqrt(T).
# ---------------------------------------------------------------------------
exact_mean = linalg.estimator_mean(policy, hidden, sigma_plus)
projected = linalg.span_project(sigma, sigma_plus, hidden)

print()
print(f"hidden reward vector : {hidden}")
print(f"span-projected vector: {np.round(projected, 6)}")
print(f"exact estimator mean : {np.round(exact_mean, 6)}")
print(f"empirical mean (T={n_days}): {np.round(empirical, 4)}")
print()
print(f"exact mean vs projection  : {np.max(np.abs(exact_mean - projected)):.2e}  (identical)")
print(f"empirical vs exact mean   : {np.max(np.abs(empirical - exact_mean)):.2e}  (sampling noise)")

# On MSets(5, 2) the all-ones direction and every coordinate direction are
# in the span, so the projection equals the hidden vector itself.
assert np.allclose(projected, hidden)
print("\nhere the span is full, so the learner can recover the truth exactly.")
