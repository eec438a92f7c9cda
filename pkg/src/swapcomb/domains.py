"""Combinatorial action sets: m-sets, DAG paths, spanning trees, k-forests,
permutations, truncated permutations.

Every kind exposes the same small surface: ambient dimension ``d``, action
weight ``m`` (or max weight for variable-weight sets), an exact linear
maximization oracle ``lmo`` with deterministic lexicographic tie-breaking, a
membership test, and a guarded enumerator for brute-force test oracles.

Tie-breaking contract: among all maximizers of ``w . M``, ``lmo`` returns the
lexicographically smallest bit vector.  Determinism here is what makes whole
trajectories replayable, so each kind implements the tie-break exactly rather
than "whatever the solver returns".
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InfeasibleDomain, TooLarge

_TIE_TOL = 1e-12


def _as_bits(v, d):
    a = np.asarray(v)
    if a.shape != (d,):
        return None
    b = a.astype(np.int8)
    if np.any((b != 0) & (b != 1)) or (a.dtype.kind == "f" and not np.allclose(a, b)):
        return None
    return b


def _descending_argsort(w):
    """Indices sorted by weight descending, ties by *descending* index.

    Taking a prefix of this order yields the lexicographically smallest
    optimal bit vector for greedy/matroid oracles: among equal weights the
    later coordinates are preferred, which zeroes the earliest coordinates.
    """
    w = np.asarray(w, dtype=float)
    rev = np.arange(w.size - 1, -1, -1)
    return rev[np.argsort(-w[rev], kind="stable")]


class ActionSet:
    """Base class; subclasses fill in the kind-specific oracles."""

    kind = "abstract"

    def __init__(self, d, m, fixed_weight):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.d = int(d)
        self.m = int(m)
        self.fixed_weight = bool(fixed_weight)

    def lmo(self, weights) -> np.ndarray:
        raise NotImplementedError

    def count(self) -> int:
        raise NotImplementedError

    def contains(self, v) -> bool:
        raise NotImplementedError

    def _generate(self):
        raise NotImplementedError

    def enumerate(self, cap: int) -> list:
        """All actions, deduplicated, lexicographic order; TooLarge beyond cap."""
        n = self.count()
        if n > cap:
            raise TooLarge(n, cap)
        seen = {}
        for a in self._generate():
            seen[a.tobytes()] = a
        out = sorted(seen.values(), key=lambda a: tuple(a))
        return out

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d}, m={self.m})"


class MSets(ActionSet):
    """All binary vectors of length d with exactly m ones."""

    kind = "m_sets"

    def __init__(self, d, m):
        if not 1 <= m <= d:
            raise ValueError("need 1 <= m <= d")
        super().__init__(d, m, fixed_weight=True)

    def lmo(self, weights):
        order = _descending_argsort(weights)
        out = np.zeros(self.d, dtype=np.int8)
        out[order[: self.m]] = 1
        return out

    def count(self):
        return math.comb(self.d, self.m)

    def contains(self, v):
        b = _as_bits(v, self.d)
        return b is not None and int(b.sum()) == self.m

    def _generate(self):
        for idx in itertools.combinations(range(self.d), self.m):
            a = np.zeros(self.d, dtype=np.int8)
            a[list(idx)] = 1
            yield a


# ---------------------------------------------------------------------------
# DAGs and path sets
# ---------------------------------------------------------------------------


class Dag:
    """A directed acyclic graph with designated source and sink.

    Edges that lie on no source-sink path are dead coordinates and are pruned
    at construction (their order among survivors is preserved).  A cycle
    anywhere in the input is rejected.
    """

    def __init__(self, n_vertices, edges, source, sink):
        self.n_vertices = int(n_vertices)
        self.source = int(source)
        self.sink = int(sink)
        if not (0 <= self.source < self.n_vertices and 0 <= self.sink < self.n_vertices):
            raise ValueError("source/sink out of range")
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        edges = [(int(u), int(v)) for u, v in edges]
        for u, v in edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
        self._check_acyclic(edges)

        fwd = self._reachable(edges, self.source, forward=True)
        bwd = self._reachable(edges, self.sink, forward=False)
        self.edges = [(u, v) for u, v in edges if u in fwd and v in bwd]

        self.out_edges = [[] for _ in range(self.n_vertices)]
        self.in_edges = [[] for _ in range(self.n_vertices)]
        for e, (u, v) in enumerate(self.edges):
            self.out_edges[u].append((e, v))
            self.in_edges[v].append((e, u))
        self.topo = self._topo_order()

    def _check_acyclic(self, edges):
        indeg = [0] * self.n_vertices
        adj = [[] for _ in range(self.n_vertices)]
        for u, v in edges:
            adj[u].append(v)
            indeg[v] += 1
        queue = sorted(v for v in range(self.n_vertices) if indeg[v] == 0)
        seen = 0
        while queue:
            u = queue.pop(0)
            seen += 1
            for v in adj[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        if seen != self.n_vertices:
            raise ValueError("graph contains a cycle")

    def _reachable(self, edges, start, forward):
        adj = {}
        for u, v in edges:
            a, b = (u, v) if forward else (v, u)
            adj.setdefault(a, []).append(b)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def _topo_order(self):
        indeg = [0] * self.n_vertices
        for _, v in self.edges:
            indeg[v] += 1
        order, queue = [], sorted(
            v for v in range(self.n_vertices) if indeg[v] == 0
        )
        while queue:
            u = queue.pop(0)
            order.append(u)
            for _, v in self.out_edges[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        return order

    @property
    def d(self):
        return len(self.edges)

    def on_st_path(self, edge_index):
        u, v = self.edges[edge_index]
        fwd = self._reachable(self.edges, self.source, forward=True)
        bwd = self._reachable(self.edges, self.sink, forward=False)
        return u in fwd and v in bwd

    def path_count(self) -> int:
        """Number of source-sink paths (exact, big-int DP)."""
        count = [0] * self.n_vertices
        count[self.sink] = 1
        for v in reversed(self.topo):
            if v != self.sink:
                count[v] = sum(count[w] for _, w in self.out_edges[v])
        return count[self.source]

    def path_length_range(self):
        """(min, max) number of edges over all source-sink paths."""
        lo = [None] * self.n_vertices
        hi = [None] * self.n_vertices
        lo[self.sink] = hi[self.sink] = 0
        for v in reversed(self.topo):
            if v == self.sink:
                continue
            opts = [(lo[w], hi[w]) for _, w in self.out_edges[v] if lo[w] is not None]
            if opts:
                lo[v] = 1 + min(o[0] for o in opts)
                hi[v] = 1 + max(o[1] for o in opts)
        return lo[self.source], hi[self.source]

    def best_path(self, weights):
        """Max-weight source-sink path, ties to lexicographically smallest incidence.

        Reverse-topological DP carrying, per vertex, the best attainable value
        and the lexicographically smallest optimal suffix incidence.  Suffix
        comparison is sound because prefixes under comparison are always
        identical, so the full-vector order reduces to the suffix order.
        """
        w = np.asarray(weights, dtype=float)
        best_val = [None] * self.n_vertices
        best_inc = [None] * self.n_vertices
        best_val[self.sink] = 0.0
        best_inc[self.sink] = tuple([0] * self.d)
        for v in reversed(self.topo):
            if v == self.sink:
                continue
            for e, u in self.out_edges[v]:
                if best_val[u] is None:
                    continue
                val = w[e] + best_val[u]
                inc = list(best_inc[u])
                inc[e] = 1
                inc = tuple(inc)
                if (
                    best_val[v] is None
                    or val > best_val[v] + _TIE_TOL
                    or (val >= best_val[v] - _TIE_TOL and inc < best_inc[v])
                ):
                    best_val[v] = val
                    best_inc[v] = inc
        if best_val[self.source] is None:
            raise InfeasibleDomain("no source-sink path")
        return np.array(best_inc[self.source], dtype=np.int8)

    def iter_paths(self):
        """Yield path incidence vectors by DFS (edge order at each vertex)."""
        stack = [(self.source, [])]
        while stack:
            v, used = stack.pop()
            if v == self.sink:
                a = np.zeros(self.d, dtype=np.int8)
                a[used] = 1
                yield a
                continue
            for e, u in reversed(self.out_edges[v]):
                stack.append((u, used + [e]))


class LeveledDag(Dag):
    """A Dag whose paths all share one length, with provenance per edge.

    ``origin[e]`` is the index of the originating edge in the base graph, or
    -1 for a zero-reward padding edge.  Original coordinates keep their
    indices, so lifting a reward vector is concatenation with zeros.
    """

    def __init__(self, n_vertices, edges, source, sink, origin, base):
        super().__init__(n_vertices, edges, source, sink)
        if len(self.edges) != len(edges):
            raise AssertionError("leveling produced dead edges")
        self.origin = np.asarray(origin, dtype=int)
        self.base = base


def equalize_path_lengths(g: Dag) -> LeveledDag:
    """Rebuild ``g`` so every source-sink path has the original max length.

    Each vertex whose incoming edges skip levels gets a single shared chain of
    padding vertices; skipping edges are rerouted into the chain at the level
    they leave from.  Sharing the chains keeps the padding cost within
    (K-2)(|V|-2)+1 vertices/edges for the graphs used here, K being the max
    path length.
    """
    level = [None] * g.n_vertices
    level[g.source] = 0
    for v in g.topo:
        if level[v] is None:
            continue
        for e, u in g.out_edges[v]:
            cand = level[v] + 1
            if level[u] is None or cand > level[u]:
                level[u] = cand

    gaps = [level[v] - level[u] for u, v in g.edges]
    if all(gap == 1 for gap in gaps):
        lev = LeveledDag(
            g.n_vertices, list(g.edges), g.source, g.sink,
            np.arange(len(g.edges)), g,
        )
        if hasattr(g, "shortcut_index"):
            lev.shortcut_index = g.shortcut_index
        return lev

    # chain[(v, j)] = padding vertex sitting at level j on the way into v
    chain = {}
    next_id = g.n_vertices
    entry = {}
    for (u, v), gap in zip(g.edges, gaps):
        if gap > 1:
            entry.setdefault(v, set()).add(level[u] + 1)
    for v in sorted(entry):
        for j in range(min(entry[v]), level[v]):
            chain[(v, j)] = next_id
            next_id += 1

    new_edges = []
    origin = []
    for e, ((u, v), gap) in enumerate(zip(g.edges, gaps)):
        if gap == 1:
            new_edges.append((u, v))
        else:
            new_edges.append((u, chain[(v, level[u] + 1)]))
        origin.append(e)
    for v in sorted(entry):
        for j in range(min(entry[v]), level[v]):
            head = chain[(v, j + 1)] if (v, j + 1) in chain else v
            new_edges.append((chain[(v, j)], head))
            origin.append(-1)

    lev = LeveledDag(next_id, new_edges, g.source, g.sink, origin, g)
    if hasattr(g, "shortcut_index"):
        lev.shortcut_index = g.shortcut_index
    return lev


def lift_rewards(lev: LeveledDag, rewards) -> np.ndarray:
    """Map a base-graph reward vector onto the leveled graph (padding gets 0)."""
    r = np.asarray(rewards, dtype=float)
    out = np.zeros(len(lev.edges))
    mask = lev.origin >= 0
    out[mask] = r[lev.origin[mask]]
    return out


def project_path(lev: LeveledDag, action) -> np.ndarray:
    """Map a leveled-graph path back to its base-graph path."""
    a = np.asarray(action)
    out = np.zeros(len(lev.base.edges), dtype=np.int8)
    for e_new, e_old in enumerate(lev.origin):
        if e_old >= 0 and a[e_new]:
            out[e_old] = 1
    return out


def build_shortcut_dag(n: int) -> Dag:
    """The hard instance for uniform-mixture exploration: a ladder of 2^n
    equally long paths plus one single-edge shortcut that no long path shares.

    Vertices: source 0, sink 2n+1, ladder nodes a_i = 2i-1, b_i = 2i.  The
    shortcut (source, sink) is edge 0 (``shortcut_index`` on the result).
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    s, t = 0, 2 * n + 1
    a = lambda i: 2 * i - 1
    b = lambda i: 2 * i
    edges = [(s, t), (s, a(1)), (s, b(1))]
    for i in range(1, n):
        edges += [
            (a(i), a(i + 1)),
            (a(i), b(i + 1)),
            (b(i), a(i + 1)),
            (b(i), b(i + 1)),
        ]
    edges += [(a(n), t), (b(n), t)]
    g = Dag(2 * n + 2, edges, s, t)
    assert len(g.edges) == 4 * n + 1
    g.shortcut_index = 0
    return g


def save_dag(g: Dag, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n_vertices} {len(g.edges)} {g.source} {g.sink}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def load_dag(path) -> Dag:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 4:
            raise ValueError(f"{path}: expected header 'V E s t'")
        nv, ne, s, t = (int(x) for x in header)
        edges = []
        for _ in range(ne):
            u, v = fh.readline().split()
            edges.append((int(u), int(v)))
    return Dag(nv, edges, s, t)


class DagPaths(ActionSet):
    """Source-sink paths of a DAG, as edge incidence vectors.

    With ``leveled=True`` (the default) the graph is length-equalized first,
    which the fixed-weight learners require; the original edge coordinates
    keep their indices and padding coordinates carry zero reward.
    """

    kind = "dag_paths"

    def __init__(self, dag: Dag, leveled: bool = True):
        if leveled and not isinstance(dag, LeveledDag):
            dag = equalize_path_lengths(dag)
        self.dag = dag
        self.base = dag.base if isinstance(dag, LeveledDag) else dag
        lo, hi = dag.path_length_range()
        if lo is None:
            raise InfeasibleDomain("no source-sink path")
        super().__init__(dag.d, hi, fixed_weight=(lo == hi))

    def lmo(self, weights):
        return self.dag.best_path(weights)

    def count(self):
        return self.dag.path_count()

    def contains(self, v):
        b = _as_bits(v, self.d)
        if b is None or b.sum() == 0:
            return False
        used = set(np.flatnonzero(b))
        cur = self.dag.source
        steps = 0
        while cur != self.dag.sink:
            nxt = [(e, u) for e, u in self.dag.out_edges[cur] if e in used]
            if len(nxt) != 1:
                return False
            e, cur = nxt[0]
            used.discard(e)
            steps += 1
            if steps > self.d:
                return False
        return not used

    def _generate(self):
        return self.dag.iter_paths()


# ---------------------------------------------------------------------------
# Graphic-matroid sets: spanning trees and k-forests
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True

    def copy(self):
        out = _UnionFind(0)
        out.parent = list(self.parent)
        return out


class _ForestSet(ActionSet):
    """Shared machinery for acyclic edge subsets of a fixed size."""

    def __init__(self, n_vertices, edges, target):
        self.n_vertices = int(n_vertices)
        self.edges = [(int(u), int(v)) for u, v in edges]
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
        self.target = int(target)
        super().__init__(len(self.edges), self.target, fixed_weight=True)

    def _max_forest_size(self):
        uf = _UnionFind(self.n_vertices)
        return sum(1 for u, v in self.edges if uf.union(u, v))

    def lmo(self, weights):
        order = _descending_argsort(weights)
        uf = _UnionFind(self.n_vertices)
        out = np.zeros(self.d, dtype=np.int8)
        picked = 0
        for e in order:
            u, v = self.edges[e]
            if uf.union(u, v):
                out[e] = 1
                picked += 1
                if picked == self.target:
                    return out
        raise InfeasibleDomain(
            f"graph admits only {picked} independent edges, need {self.target}"
        )

    def _is_acyclic_selection(self, b):
        uf = _UnionFind(self.n_vertices)
        for e in np.flatnonzero(b):
            u, v = self.edges[e]
            if not uf.union(u, v):
                return False
        return True

    def contains(self, v):
        b = _as_bits(v, self.d)
        return (
            b is not None
            and int(b.sum()) == self.target
            and self._is_acyclic_selection(b)
        )

    def _backtrack(self, cap=None):
        """Enumerate acyclic selections of the target size in lex order.

        Exclude-first recursion yields lexicographically ascending incidence
        vectors; with ``cap`` the walk aborts as soon as cap+1 are found, which
        is the counting guard for kinds without a closed-form count.
        """
        results = []
        chosen = []

        def rec(i, uf, picked):
            if cap is not None and len(results) > cap:
                return
            if picked == self.target:
                a = np.zeros(self.d, dtype=np.int8)
                a[chosen] = 1
                results.append(a)
                return
            if i == self.d or picked + (self.d - i) < self.target:
                return
            rec(i + 1, uf, picked)  # exclude edge i first: lex ascending
            u, v = self.edges[i]
            uf2 = uf.copy()
            if uf2.union(u, v):
                chosen.append(i)
                rec(i + 1, uf2, picked + 1)
                chosen.pop()

        rec(0, _UnionFind(self.n_vertices), 0)
        return results

    def _generate(self):
        return iter(self._backtrack())

    def enumerate(self, cap):
        out = self._backtrack(cap=cap)
        if len(out) > cap:
            raise TooLarge(f"more than {cap}", cap)
        return out


class SpanningTrees(_ForestSet):
    kind = "spanning_trees"

    def __init__(self, n_vertices, edges):
        super().__init__(n_vertices, edges, target=int(n_vertices) - 1)

    def count(self):
        """Kirchhoff matrix-tree count via the reduced Laplacian determinant."""
        n = self.n_vertices
        lap = np.zeros((n, n))
        for u, v in self.edges:
            lap[u, u] += 1
            lap[v, v] += 1
            lap[u, v] -= 1
            lap[v, u] -= 1
        if n == 1:
            return 1
        det = np.linalg.det(lap[1:, 1:])
        return int(round(det))

    def contains(self, v):
        b = _as_bits(v, self.d)
        if b is None or int(b.sum()) != self.target:
            return False
        uf = _UnionFind(self.n_vertices)
        for e in np.flatnonzero(b):
            u, v2 = self.edges[e]
            if not uf.union(u, v2):
                return False
        root = uf.find(0)
        return all(uf.find(x) == root for x in range(self.n_vertices))


class KForests(_ForestSet):
    """Acyclic edge subsets of size exactly k (bases of the truncated
    graphic matroid)."""

    kind = "k_forests"

    def __init__(self, n_vertices, edges, k):
        if k < 1:
            raise ValueError("k >= 1 required")
        super().__init__(n_vertices, edges, target=int(k))

    def count(self):
        return len(self._backtrack())


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------


class _AssignmentSet(ActionSet):
    """Matchings of k positions to m items, flattened row-major to length k*m."""

    def __init__(self, k, m_items):
        if not 1 <= k <= m_items:
            raise ValueError("need 1 <= positions <= items")
        self.k = int(k)
        self.m_items = int(m_items)
        super().__init__(self.k * self.m_items, self.k, fixed_weight=True)

    def _solve(self, w):
        rows, cols = linear_sum_assignment(w, maximize=True)
        return float(w[rows, cols].sum()), (rows, cols)

    def lmo(self, weights):
        """Optimal assignment with the lex-smallest incidence among optima.

        After solving once for the optimal value, each cell is banned in flat
        index order whenever banning preserves optimality; what survives is
        the unique lexicographically smallest optimal assignment.
        """
        w = np.asarray(weights, dtype=float).reshape(self.k, self.m_items)
        base, _ = self._solve(w)
        tol = 1e-9 * max(1.0, abs(base))
        penalty = float(np.abs(w).sum()) + 1.0
        wb = w.copy()
        for c in range(self.d):
            i, j = divmod(c, self.m_items)
            old = wb[i, j]
            wb[i, j] = -penalty
            val, _ = self._solve(wb)
            if val < base - tol:
                wb[i, j] = old
        _, (rows, cols) = self._solve(wb)
        out = np.zeros(self.d, dtype=np.int8)
        out[rows * self.m_items + cols] = 1
        return out

    def contains(self, v):
        b = _as_bits(v, self.d)
        if b is None:
            return False
        mat = b.reshape(self.k, self.m_items)
        return bool(
            np.all(mat.sum(axis=1) == 1) and np.all(mat.sum(axis=0) <= 1)
        )

    def _generate(self):
        for cols in itertools.permutations(range(self.m_items), self.k):
            a = np.zeros(self.d, dtype=np.int8)
            for i, j in enumerate(cols):
                a[i * self.m_items + j] = 1
            yield a


class Permutations(_AssignmentSet):
    kind = "permutations"

    def __init__(self, m):
        super().__init__(m, m)

    def count(self):
        return math.factorial(self.m_items)


class TruncatedPermutations(_AssignmentSet):
    kind = "truncated_permutations"

    def __init__(self, k, m):
        super().__init__(k, m)

    def count(self):
        return math.perm(self.m_items, self.k)
