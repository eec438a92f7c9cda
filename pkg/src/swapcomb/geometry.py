"""Polytope primitives: Carathéodory decomposition and KL projection.

``decompose`` writes a point m*q of the action hull conv(A) as a small convex
combination of actions; ``kl_project`` maps a positive vector onto the scaled
polytope P = conv(A)/m under generalized (unnormalized) KL divergence.
Generalized KL keeps the projection well-defined when multiplicative-weights
updates change the total mass; since P sits inside the simplex the minimizer
agrees with the normalized-KL minimizer.

Both primitives dispatch on the action-set kind to an exact combinatorial
algorithm; there is no LP solver anywhere in this module.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NoConvergence, NotInHull
from .policy import Policy

_CLAMP_TOL = 1e-12
_RESIDUAL_TOL = 1e-7
_PROJ_STOP = 1e-9
_PROJ_FAIL = 1e-6
_FLOW_STOP = 1e-11
_MAX_CYCLES = 10_000


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def decompose(aset, q) -> Policy:
    """Write m*q in conv(A) as a distribution over at most d+1 actions.

    Raises NotInHull when the target point cannot be expressed this way
    (residual above 1e-7 after the kind-specific peeling).
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (aset.d,):
        raise ValueError(f"expected a vector of length {aset.d}")
    if np.any(q < -_CLAMP_TOL):
        raise ValueError("coordinate distribution has a significantly negative entry")
    x = aset.m * np.maximum(q, 0.0)

    kind = aset.kind
    if kind == "m_sets":
        atoms, weights = _decompose_msets(x, aset.d, aset.m)
    elif kind in ("permutations", "truncated_permutations"):
        atoms, weights = _decompose_assignment(x, aset.k, aset.m_items)
    elif kind == "dag_paths":
        atoms, weights = _decompose_paths(x, aset.dag)
    elif kind in ("spanning_trees", "k_forests"):
        atoms, weights = _decompose_forest(x, aset)
    else:
        raise ValueError(f"no decomposition for action-set kind {kind!r}")

    atoms, weights = _caratheodory_reduce(atoms, weights, aset.d)
    total = float(sum(weights))
    if not atoms or total <= 0:
        raise NotInHull(float(np.max(np.abs(x), initial=0.0)))
    weights = [w / total for w in weights]
    recon = np.array(weights) @ np.array(atoms, dtype=float)
    err = float(np.max(np.abs(recon - x)))
    if err > _RESIDUAL_TOL:
        raise NotInHull(err)
    return Policy(atoms, weights)


def _decompose_msets(x, d, m):
    """Sorted-level peeling for {x in [0,1]^d : sum x = m}.

    The residual after peeling weight w must fit in the rescaled box
    [0, W]^d with mass W*m, which pins the step size: stay nonnegative on the
    peeled support and keep every off-support coordinate under the new cap.
    """
    x = x.copy()
    total = float(x.sum())
    if abs(total - m) > 1e-7:
        raise NotInHull(abs(total - m))
    w_left = 1.0
    atoms, weights = [], []
    for _ in range(3 * d + 3):
        if w_left <= 1e-12:
            break
        order = sorted(range(d), key=lambda i: (-x[i], i))
        support = order[:m]
        atom = np.zeros(d, dtype=np.int8)
        atom[support] = 1
        lam = min(min(x[i] for i in support), w_left)
        if m < d:
            lam = min(lam, w_left - x[order[m]])
        if lam <= 1e-12:
            break  # genuine infeasibility is caught by the reconstruction check
        x[support] -= lam
        w_left -= lam
        atoms.append(atom)
        weights.append(lam)
    return atoms, weights


def _decompose_assignment(x, k, m_items):
    """Birkhoff-von Neumann peeling, via log-weight perfect matchings.

    Rectangular targets (k < m_items) are first completed to a square
    doubly-stochastic-like matrix by greedy transportation fill of the column
    slack, then each peeled permutation is restricted to the original rows.
    """
    mat = x.reshape(k, m_items).copy()
    row_sums = mat.sum(axis=1)
    if np.max(np.abs(row_sums - row_sums[0])) > 1e-7:
        raise NotInHull(float(np.max(np.abs(row_sums - row_sums[0]))))
    w_left = float(row_sums[0])
    if abs(w_left - 1.0) > 1e-7:
        raise NotInHull(abs(w_left - 1.0))

    n = m_items
    if k < m_items:
        col_slack = w_left - mat.sum(axis=0)
        if np.any(col_slack < -1e-7):
            raise NotInHull(float(-col_slack.min()))
        col_slack = np.maximum(col_slack, 0.0)
        pad = np.zeros((m_items - k, m_items))
        for i in range(m_items - k):
            need = w_left
            for j in range(m_items):
                take = min(need, col_slack[j])
                pad[i, j] = take
                col_slack[j] -= take
                need -= take
                if need <= 1e-14:
                    break
        mat = np.vstack([mat, pad])
    col_sums = mat.sum(axis=0)
    if np.max(np.abs(col_sums - w_left)) > 1e-6:
        raise NotInHull(float(np.max(np.abs(col_sums - w_left))))

    atoms, weights = {}, {}
    for _ in range(n * n + 1):
        if w_left <= 1e-12:
            break
        with np.errstate(divide="ignore"):
            logm = np.where(mat > 1e-13, np.log(np.maximum(mat, 1e-300)), -1e18)
        rows, cols = linear_sum_assignment(logm, maximize=True)
        entries = mat[rows, cols]
        if np.any(entries <= 1e-13):
            break
        lam = float(min(entries.min(), w_left))
        atom = np.zeros(k * m_items, dtype=np.int8)
        for i, j in zip(rows, cols):
            if i < k:
                atom[i * m_items + j] = 1
        mat[rows, cols] -= lam
        w_left -= lam
        key = atom.tobytes()
        if key in weights:
            weights[key] += lam
        else:
            atoms[key] = atom
            weights[key] = lam
    keys = list(atoms)
    return [atoms[key] for key in keys], [weights[key] for key in keys]


def _decompose_paths(x, dag):
    """Flow decomposition: repeatedly peel the maximum-bottleneck path.

    Ties between equally wide paths break toward the smaller edge index, so
    the decomposition is deterministic; each peel zeroes at least one edge, so
    at most |E| atoms appear.
    """
    flow = x.copy()
    d = len(dag.edges)
    atoms, weights = [], []
    for _ in range(d + 1):
        out_value = sum(flow[e] for e, _ in dag.out_edges[dag.source])
        if out_value <= 1e-12:
            break
        width = [0.0] * dag.n_vertices
        pick = [None] * dag.n_vertices
        width[dag.sink] = np.inf
        for v in reversed(dag.topo):
            if v == dag.sink:
                continue
            for e, u in dag.out_edges[v]:
                w = min(flow[e], width[u])
                if w > width[v] + 1e-15:
                    width[v] = w
                    pick[v] = (e, u)
        lam = width[dag.source]
        if lam <= 1e-12:
            break
        atom = np.zeros(d, dtype=np.int8)
        v = dag.source
        while v != dag.sink:
            e, v = pick[v]
            atom[e] = 1
            flow[e] -= lam
        atoms.append(atom)
        weights.append(lam)
    return atoms, weights


def _connected_vertex_subsets(n_vertices, edges):
    """All connected vertex subsets of size >= 2, as (edge-index list, size)."""
    if n_vertices > 16:
        raise ValueError("forest decomposition supports at most 16 vertices")
    adj = [[] for _ in range(n_vertices)]
    for e, (u, v) in enumerate(edges):
        adj[u].append((e, v))
        adj[v].append((e, u))
    out = []
    for mask in range(1, 1 << n_vertices):
        members = [v for v in range(n_vertices) if mask >> v & 1]
        if len(members) < 2:
            continue
        seen = {members[0]}
        stack = [members[0]]
        while stack:
            u = stack.pop()
            for _, v in adj[u]:
                if mask >> v & 1 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != len(members):
            continue
        inside = [
            e for e, (u, v) in enumerate(edges) if mask >> u & 1 and mask >> v & 1
        ]
        if inside:
            out.append((np.array(inside), len(members)))
    return out


def _decompose_forest(x, aset):
    """Peel vertices of the (truncated) graphic matroid base polytope.

    Each step asks the greedy oracle for a forest aligned with the residual,
    boosting edges inside currently tight rank constraints so the chosen
    forest saturates them; the step size is the largest one keeping the
    residual inside the rescaled polytope (nonnegativity plus every connected
    subset's rank constraint).
    """
    subsets = _connected_vertex_subsets(aset.n_vertices, aset.edges)
    resid = x.copy()
    w_left = 1.0
    d = aset.d
    atoms, weights = [], []
    for _ in range(2 * d + len(subsets) + 2):
        if w_left <= 1e-12:
            break
        boost = np.zeros(d)
        big = float(np.max(resid)) + 1.0
        for inside, size in subsets:
            slack = w_left * (size - 1) - resid[inside].sum()
            if slack < 1e-10 * max(1.0, w_left):
                boost[inside] += big
        atom = aset.lmo(resid + boost)
        on = atom.astype(bool)
        lam = min(float(resid[on].min()), w_left)
        for inside, size in subsets:
            a = (size - 1) - int(atom[inside].sum())
            if a > 0:
                bound = (w_left * (size - 1) - resid[inside].sum()) / a
                lam = min(lam, bound)
        if lam <= 1e-12:
            break
        resid[on] -= lam
        w_left -= lam
        atoms.append(atom)
        weights.append(lam)
    return atoms, weights


def _caratheodory_reduce(atoms, weights, d):
    """Shrink a convex combination to at most d+1 atoms without moving it.

    While more than d+1 atoms remain there is an affine dependence among
    them; shifting along it until the first weight hits zero removes an atom
    and changes neither the combination nor the total weight.
    """
    atoms = [np.asarray(a) for a in atoms]
    weights = [float(w) for w in weights]
    keep = [w > 1e-15 for w in weights]
    atoms = [a for a, k in zip(atoms, keep) if k]
    weights = [w for w, k in zip(weights, keep) if k]
    while len(atoms) > d + 1:
        stacked = np.vstack(
            [np.array(atoms, dtype=float).T, np.ones(len(atoms))]
        )
        _, _, vh = np.linalg.svd(stacked)
        z = vh[-1]
        if np.max(z) <= 0:
            z = -z
        pos = z > 1e-14
        ratios = np.array(weights)[pos] / z[pos]
        t = ratios.min()
        new_w = np.array(weights) - t * z
        drop = int(np.argmin(np.where(pos, np.abs(new_w), np.inf)))
        atoms = [a for i, a in enumerate(atoms) if i != drop and new_w[i] > 1e-15]
        weights = [float(w) for i, w in enumerate(new_w) if i != drop and w > 1e-15]
    return atoms, weights


# ---------------------------------------------------------------------------
# KL projection
# ---------------------------------------------------------------------------


def kl_project(aset, q_raw) -> np.ndarray:
    """Generalized-KL projection of a positive vector onto P = conv(A)/m."""
    q_raw = np.asarray(q_raw, dtype=float)
    if q_raw.shape != (aset.d,):
        raise ValueError(f"expected a vector of length {aset.d}")
    if np.any(q_raw <= 0):
        raise ValueError("projection input must be strictly positive")

    kind = aset.kind
    if kind == "m_sets":
        return _project_msets(q_raw, aset.d, aset.m)
    if kind in ("permutations", "truncated_permutations"):
        return _project_assignment(q_raw, aset.k, aset.m_items)
    if kind == "dag_paths":
        return _project_paths(q_raw, aset.dag, aset.m)
    if kind in ("spanning_trees", "k_forests"):
        return _project_forest(q_raw, aset)
    raise ValueError(f"no projection for action-set kind {kind!r}")


def _project_msets(q_raw, d, m):
    """Exact capped-simplex waterfilling.

    KKT: q_i = min(1/m, q_raw_i * e^theta) with theta set by the simplex
    constraint; scanning the number of capped coordinates in sorted order
    finds the consistent split directly.
    """
    cap = 1.0 / m
    order = np.argsort(-q_raw, kind="stable")
    sorted_q = q_raw[order]
    suffix = np.concatenate([np.cumsum(sorted_q[::-1])[::-1], [0.0]])
    for j in range(0, d):
        mass_left = 1.0 - j * cap
        if mass_left < -1e-15:
            break
        rest = suffix[j]
        if rest <= 0:
            continue
        scale = mass_left / rest
        top_ok = j == 0 or sorted_q[j - 1] * scale >= cap - 1e-15
        rest_ok = sorted_q[j] * scale <= cap + 1e-15
        if top_ok and rest_ok:
            out = np.empty(d)
            out[order[:j]] = cap
            out[order[j:]] = sorted_q[j:] * scale
            return out
    out = np.full(d, cap)  # all coordinates capped: only possible when m == d
    return out


def _project_assignment(q_raw, k, m_items):
    """Sinkhorn-style cyclic scaling onto row/column marginals.

    Rows are equality constraints; columns are equalities for square
    matrices and capped inequalities (with Dykstra corrections) otherwise.
    """
    target = 1.0 / k
    mat = q_raw.reshape(k, m_items).copy()
    square = k == m_items
    corr = np.zeros(m_items)
    for _ in range(_MAX_CYCLES):
        prev = mat.copy()
        mat *= target / mat.sum(axis=1, keepdims=True)
        if square:
            mat *= target / mat.sum(axis=0, keepdims=True)
        else:
            adjusted = mat * np.exp(corr)[None, :]
            sums = adjusted.sum(axis=0)
            over = sums > target
            mat = adjusted * np.where(over, target / sums, 1.0)[None, :]
            corr = np.where(over, np.log(sums / target), 0.0)
        if np.max(np.abs(mat - prev)) < _PROJ_STOP:
            break
    else:
        resid = _assignment_residual(mat, target, square)
        if resid > _PROJ_FAIL:
            raise NoConvergence(resid)
    return mat.ravel()


def _assignment_residual(mat, target, square):
    row = float(np.max(np.abs(mat.sum(axis=1) - target)))
    if square:
        col = float(np.max(np.abs(mat.sum(axis=0) - target)))
    else:
        col = float(np.max(mat.sum(axis=0) - target, initial=0.0))
    return max(row, col)


def _project_paths(q_raw, dag, m):
    """Generalized-KL projection onto the scaled unit-flow polytope.

    The minimizer of sum(q log(q/q_raw) - q + q_raw) over {flow conservation
    at internal vertices, source outflow = 1/m, q >= 0} has the
    vertex-potential form q_e = q_raw_e * exp(theta_v - theta_u) for edge
    (u, v), one multiplier per equality constraint.  The potentials maximize
    the concave dual g(theta) = b.theta - sum_e q_e(theta) whose gradient is
    exactly the constraint violation and whose Hessian is a weighted graph
    Laplacian, so a damped Newton iteration converges in a handful of steps
    even from a cold start.  If the Newton system degenerates (underflowed
    edge weights can disconnect the Laplacian) the routine falls back to
    sqrt-damped multiplicative rebalancing, which is slower but
    unconditionally stable.  Stopping is on the conservation residual itself:
    a path decomposition strands roughly n_vertices * residual of mass, so
    the residual must sit well below the hull-reconstruction tolerance.
    A feasible input returns unchanged, making the projection idempotent.
    """
    n_edges, target = len(dag.edges), 1.0 / m
    tails = np.fromiter((u for u, _ in dag.edges), int, n_edges)
    heads = np.fromiter((v for _, v in dag.edges), int, n_edges)
    internal = np.zeros(dag.n_vertices, dtype=bool)
    internal[tails] = True
    internal[heads] = True
    internal[dag.source] = internal[dag.sink] = False

    # Constraint matrix: one row per internal vertex (inflow - outflow) plus
    # one row for the source outflow; the projection solves A q = b.
    row = np.full(dag.n_vertices, -1)
    row[internal] = np.arange(int(internal.sum()))
    n_rows = int(internal.sum()) + 1
    mat = np.zeros((n_rows, n_edges))
    head_in = internal[heads]
    mat[row[heads[head_in]], np.nonzero(head_in)[0]] = 1.0
    tail_in = internal[tails]
    mat[row[tails[tail_in]], np.nonzero(tail_in)[0]] = -1.0
    mat[n_rows - 1, tails == dag.source] = 1.0
    rhs = np.zeros(n_rows)
    rhs[n_rows - 1] = target

    logw = np.log(q_raw)
    theta = np.zeros(n_rows)
    q = q_raw.copy()
    for _ in range(60):
        violation = mat @ q - rhs
        if np.max(np.abs(violation)) < _FLOW_STOP:
            return q
        grad = -violation
        hess = (mat * q) @ mat.T
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        dual = rhs @ theta - q.sum()
        slope = grad @ step
        scale = 1.0
        for _ in range(50):
            trial = theta + scale * step
            expo = logw + mat.T @ trial
            if expo.max() <= 30.0:
                q_trial = np.exp(expo)
                if rhs @ trial - q_trial.sum() >= dual + 0.25 * scale * slope - 1e-18:
                    break
            scale *= 0.5
        else:
            break
        theta, q = trial, q_trial
    return _rebalance_paths(q, dag, m, tails, heads, internal)


def _rebalance_paths(q, dag, m, tails, heads, internal):
    """Multiplicative fallback: every vertex simultaneously scales its
    in-edges by sqrt(out/in) and its out-edges by the inverse while the
    source pins its outflow; converges unconditionally for positive input."""
    n, target = dag.n_vertices, 1.0 / m
    resid = np.inf
    for _ in range(_MAX_CYCLES):
        out_s = np.bincount(tails, weights=q, minlength=n)
        in_s = np.bincount(heads, weights=q, minlength=n)
        gaps = np.abs(in_s - out_s)[internal]
        resid = max(abs(out_s[dag.source] - target), gaps.max(initial=0.0))
        if resid < _FLOW_STOP:
            break
        t = np.ones(n)
        t[internal] = np.sqrt(out_s[internal] / in_s[internal])
        scale_out = np.ones(n)
        scale_out[internal] = 1.0 / t[internal]
        scale_out[dag.source] = target / out_s[dag.source]
        q = q * scale_out[tails] * t[heads]
    else:
        if resid > _PROJ_FAIL:
            raise NoConvergence(resid)
    return q


def _project_forest(q_raw, aset):
    """Cyclic Bregman projection with Dykstra corrections for rank caps.

    Families: the simplex equality (total mass 1) and, for every connected
    vertex subset U, the capped inequality q(E[U]) <= (|U|-1)/m.
    """
    subsets = _connected_vertex_subsets(aset.n_vertices, aset.edges)
    m = aset.m
    q = q_raw.copy()
    corr = np.zeros(len(subsets))
    for _ in range(_MAX_CYCLES):
        prev = q.copy()
        q *= 1.0 / q.sum()
        for j, (inside, size) in enumerate(subsets):
            cap = (size - 1) / m
            adjusted = q[inside] * np.exp(corr[j])
            s = float(adjusted.sum())
            if s > cap:
                q[inside] = adjusted * (cap / s)
                corr[j] = np.log(s / cap)
            else:
                q[inside] = adjusted
                corr[j] = 0.0
        if np.max(np.abs(q - prev)) < _PROJ_STOP:
            break
    else:
        resid = abs(float(q.sum()) - 1.0)
        for inside, size in subsets:
            resid = max(resid, float(q[inside].sum() - (size - 1) / m))
        if resid > _PROJ_FAIL:
            raise NoConvergence(resid)
    return q
