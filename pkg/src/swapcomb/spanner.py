"""C-approximate barycentric spanners built from linear-optimization calls.

A spanner is a set of actions forming a basis of span(A) such that every
action's coordinates in that basis are bounded by C.  Exploring uniformly over
a spanner makes the co-occurrence matrix well conditioned on span(A), which is
what keeps importance-weighted reward estimates bounded.

The construction follows the determinant-maximization scheme of Awerbuch and
Kleinberg: first discover an orthonormal basis of span(A) by probing
directions with the oracle, then work in those coordinates, initializing each
basis slot by maximizing |det| along the slot's cofactor direction and running
replacement passes while some action improves |det| by more than a factor C.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateSet
from .policy import Policy, as_action

_SPAN_TOL = 1e-9
_RATIO_SLACK = 1e-12


class Spanner:
    """Immutable result of ``build_spanner``.

    Attributes
    ----------
    C : float
        Approximation factor used during construction.
    basis : list of ndarray
        ``basis_matrix_rank`` actions (ambient coordinates) that are linearly
        independent and span span(A).
    basis_matrix_rank : int
        Rank r of the basis.
    oracle_calls : int
        Number of linear-optimization oracle invocations used.
    """

    def __init__(self, C, basis, span_basis, oracle_calls):
        self.C = float(C)
        self.basis = [as_action(b) for b in basis]
        self.basis_matrix_rank = len(self.basis)
        self.span_basis = span_basis  # d x r, orthonormal columns
        self.oracle_calls = int(oracle_calls)
        self._matrix = np.array(self.basis, dtype=float).T  # d x r

    def coefficients(self, action):
        """Coordinates of ``action`` in the basis (least squares within span)."""
        a, *_ = np.linalg.lstsq(
            self._matrix, np.asarray(action, dtype=float), rcond=None
        )
        return a

    def __repr__(self):
        return (
            f"Spanner(C={self.C}, rank={self.basis_matrix_rank}, "
            f"oracle_calls={self.oracle_calls})"
        )


class _CountingOracle:
    """Wraps an action set's lmo with call counting and per-direction caching."""

    def __init__(self, aset):
        self.aset = aset
        self.calls = 0
        self._cache = {}

    def best(self, w):
        key = np.asarray(w, dtype=float).tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.calls += 1
        m = np.asarray(self.aset.lmo(w), dtype=float)
        self._cache[key] = m
        return m

    def extreme(self, w):
        """The action maximizing |w . M| over both signs of w."""
        m_pos = self.best(w)
        m_neg = self.best(-np.asarray(w, dtype=float))
        v_pos = float(np.dot(w, m_pos))
        v_neg = float(np.dot(w, m_neg))
        if abs(v_pos) >= abs(v_neg):
            return m_pos, v_pos
        return m_neg, v_neg


def _discover_span(oracle, d):
    """Orthonormal basis of span(A) via signed oracle probes.

    Maintains realized directions Q and dead directions (orthogonal to every
    action); each probe of a fresh direction settles it one way or the other,
    so the loop ends after at most d probes (2d oracle calls).
    """
    q_cols = []
    dead_cols = []
    while len(q_cols) + len(dead_cols) < d:
        known = q_cols + dead_cols
        u = None
        for i in range(d):
            cand = np.zeros(d)
            cand[i] = 1.0
            for col in known:
                cand -= np.dot(col, cand) * col
            norm = np.linalg.norm(cand)
            if norm > _SPAN_TOL:
                u = cand / norm
                break
        if u is None:
            break
        m, value = oracle.extreme(u)
        if abs(value) <= _SPAN_TOL:
            dead_cols.append(u)
            continue
        resid = m.copy()
        for col in q_cols:
            resid -= np.dot(col, resid) * col
        q_cols.append(resid / np.linalg.norm(resid))
    if not q_cols:
        raise DegenerateSet("action set spans a zero-dimensional subspace")
    return np.column_stack(q_cols)


def build_spanner(aset, C: float = 2.0) -> Spanner:
    """Construct a C-approximate barycentric spanner of ``aset``.

    Rank r < d is permitted: equal-weight action sets never span all of R^d,
    and the construction simply works inside the discovered span.

    Raises
    ------
    DegenerateSet
        If every action is the zero vector (span of dimension 0).
    ValueError
        If C <= 1.
    """
    if not C > 1.0:
        raise ValueError("C must exceed 1")
    oracle = _CountingOracle(aset)
    d = aset.d
    q = _discover_span(oracle, d)  # d x r
    r = q.shape[1]

    # Reduced coordinates: y = q^T M.  B starts as the identity; its columns
    # are replaced one by one with reduced actions, always keeping det(B) != 0
    # because the incumbent column itself is a feasible value for the slot.
    b = np.eye(r)
    chosen = [None] * r

    def cofactor(i):
        # c such that det(B with column i replaced by y) = c . y
        e = np.zeros(r)
        e[i] = 1.0
        return np.linalg.det(b) * np.linalg.solve(b.T, e)

    for i in range(r):
        c = cofactor(i)
        m, _ = oracle.extreme(q @ c)
        y = q.T @ m
        if abs(np.dot(c, y)) > _SPAN_TOL * max(1.0, abs(np.linalg.det(b))):
            b[:, i] = y
            chosen[i] = m

    improved = True
    while improved:
        improved = False
        for i in range(r):
            c = cofactor(i)
            m, _ = oracle.extreme(q @ c)
            y = q.T @ m
            det_here = abs(np.linalg.det(b))
            if abs(np.dot(c, y)) > C * det_here * (1.0 + _RATIO_SLACK):
                b[:, i] = y
                chosen[i] = m
                improved = True

    if any(m is None for m in chosen):
        raise DegenerateSet("could not fill every basis slot from the action set")
    return Spanner(C, chosen, q, oracle.calls)


def exploration_policy(sp: Spanner) -> Policy:
    """Uniform distribution over the spanner's basis actions (mass 1/r each)."""
    return Policy.uniform(sp.basis)
