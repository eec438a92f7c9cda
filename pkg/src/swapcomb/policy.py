"""Sparse distributions over binary action vectors.

A :class:`Policy` is the common currency between the learners, the master
mixture, the estimator algebra, and the regret evaluators: a short list of
binary action vectors with probability weights.  Supports stay small by
construction (decomposition atoms plus spanner atoms), so everything here is
dense-small numpy.

Atoms are kept in canonical order (lexicographic by bit pattern) so that two
policies with equal content are identical arrays, and so that sampling with a
single uniform draw is reproducible across equivalent construction orders.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptySupport

_NEG_TOL = -1e-12


def action_key(m: np.ndarray) -> bytes:
    """Hashable canonical key for a binary action vector."""
    return np.asarray(m, dtype=np.uint8).tobytes()


def as_action(m) -> np.ndarray:
    """Coerce to the canonical int8 row used for actions."""
    a = np.asarray(m)
    out = a.astype(np.int8)
    if a.dtype.kind == "f" and not np.allclose(a, out, atol=1e-9):
        raise ValueError("action vector entries must be 0/1")
    if np.any((out != 0) & (out != 1)):
        raise ValueError("action vector entries must be 0/1")
    return out


class Policy:
    """A sparse probability distribution over action vectors.

    Parameters
    ----------
    actions : array_like, shape (s, d)
        Binary action vectors, one per row.
    weights : array_like, shape (s,)
        Nonnegative weights summing to 1 (tolerance 1e-9).  Duplicate rows are
        merged; zero-weight atoms are dropped; rows are sorted canonically.
    """

    __slots__ = ("actions", "weights", "d")

    def __init__(self, actions, weights):
        acts = np.atleast_2d(np.asarray(actions, dtype=np.int8))
        w = np.asarray(weights, dtype=float).ravel()
        if acts.shape[0] != w.shape[0]:
            raise ValueError("actions and weights length mismatch")
        if w.size == 0:
            raise EmptySupport("policy has no support atoms")
        if np.any(w < _NEG_TOL):
            raise ValueError(f"negative policy weight {w.min():.3e}")
        w = np.maximum(w, 0.0)

        # Merge duplicates, drop zero atoms, sort canonically.
        merged: dict[bytes, float] = {}
        rows: dict[bytes, np.ndarray] = {}
        for row, wi in zip(acts, w):
            k = action_key(row)
            merged[k] = merged.get(k, 0.0) + float(wi)
            rows[k] = row
        keys = [k for k in merged if merged[k] > 0.0]
        if not keys:
            raise EmptySupport("policy weights are all zero")
        keys.sort(key=lambda k: tuple(rows[k]))

        self.actions = np.array([rows[k] for k in keys], dtype=np.int8)
        self.weights = np.array([merged[k] for k in keys], dtype=float)
        self.d = int(self.actions.shape[1])
        total = float(self.weights.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"policy weights sum to {total!r}, expected 1")
        self.actions.setflags(write=False)
        self.weights.setflags(write=False)

    @classmethod
    def point_mass(cls, m) -> "Policy":
        return cls(np.atleast_2d(as_action(m)), [1.0])

    @classmethod
    def uniform(cls, actions) -> "Policy":
        acts = np.atleast_2d(np.asarray(actions, dtype=np.int8))
        n = acts.shape[0]
        return cls(acts, np.full(n, 1.0 / n))

    @classmethod
    def mix(cls, components, coefficients) -> "Policy":
        """Convex combination of policies (atoms merged)."""
        coeffs = np.asarray(coefficients, dtype=float)
        rows = []
        w = []
        for pol, c in zip(components, coeffs):
            if c == 0.0:
                continue
            rows.append(pol.actions)
            w.append(c * pol.weights)
        if not rows:
            raise EmptySupport("mixture has no nonzero components")
        return cls(np.vstack(rows), np.concatenate(w))

    @property
    def support_size(self) -> int:
        return self.actions.shape[0]

    def expected_reward(self, reward: np.ndarray) -> float:
        """Exact E[R . M] over the support."""
        return float(self.weights @ (self.actions @ np.asarray(reward, dtype=float)))

    def weight_of(self, m) -> float:
        k = action_key(m)
        for row, wi in zip(self.actions, self.weights):
            if action_key(row) == k:
                return float(wi)
        return 0.0

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """Draw one action using a single uniform variate (inverse CDF).

        One draw per call keeps replay streams aligned between algorithm
        variants that share a policy but differ in bookkeeping.
        """
        u = rng.random()
        cum = np.cumsum(self.weights)
        idx = int(np.searchsorted(cum, u * cum[-1], side="right"))
        idx = min(idx, self.support_size - 1)
        return self.actions[idx]

    def __eq__(self, other):
        if not isinstance(other, Policy):
            return NotImplemented
        return (
            self.actions.shape == other.actions.shape
            and np.array_equal(self.actions, other.actions)
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self):
        return hash((self.actions.tobytes(), self.weights.tobytes()))

    def __repr__(self):
        return f"Policy(support={self.support_size}, d={self.d})"
