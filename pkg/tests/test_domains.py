"""Tests for the combinatorial action sets and their oracles.

Each kind gets: the frozen small examples, oracle-vs-enumeration equivalence
(including the lexicographic tie-break), counting guards, and membership
checks.  Brute-force argmax over the enumerated set is the oracle for lmo.
"""

import math

import numpy as np
import pytest

from swapcomb import domains
from swapcomb.errors import InfeasibleDomain, TooLarge


def brute_lmo(actions, w):
    """argmax w.M by enumeration, ties to the lexicographically smallest bits."""
    vals = [float(np.dot(w, a)) for a in actions]
    best = max(vals)
    tied = [a for a, v in zip(actions, vals) if v >= best - 1e-12]
    return min(tuple(int(x) for x in a) for a in tied)


def check_lmo_matches(aset, n_weights=100, seed=0):
    acts = aset.enumerate(100_000)
    rng = np.random.default_rng(seed)
    for trial in range(n_weights):
        if trial % 5 < 3:
            w = rng.standard_normal(aset.d)
        else:
            # small-integer weights force exact ties
            w = rng.integers(0, 3, size=aset.d).astype(float)
        got = aset.lmo(w)
        want = brute_lmo(acts, w)
        assert tuple(int(x) for x in got) == want, (trial, w, tuple(got), want)


TRIANGLE = [(0, 1), (1, 2), (0, 2)]
K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


class TestMSets:
    def test_lmo_example(self):
        aset = domains.MSets(4, 2)
        np.testing.assert_array_equal(aset.lmo([5.0, 1.0, 3.0, 2.0]), [1, 0, 1, 0])

    def test_enumerate_lex_order(self):
        aset = domains.MSets(3, 2)
        acts = aset.enumerate(10)
        got = [tuple(int(x) for x in a) for a in acts]
        assert got == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]

    def test_counting_guard(self):
        aset = domains.MSets(20, 10)
        assert aset.count() == math.comb(20, 10)
        with pytest.raises(TooLarge):
            aset.enumerate(100)

    def test_lmo_vs_enumeration(self):
        for d, m in [(4, 2), (5, 1), (5, 4), (6, 3)]:
            check_lmo_matches(domains.MSets(d, m), seed=d * 10 + m)

    def test_membership(self):
        aset = domains.MSets(4, 2)
        for a in aset.enumerate(10):
            assert aset.contains(a)
        assert not aset.contains([1, 1, 1, 0])
        assert not aset.contains([1, 0, 0, 0])


class TestDagBasics:
    def test_prunes_dead_edges(self):
        # edge 2->3 hangs off the path structure and must be pruned
        g = domains.Dag(4, [(0, 1), (1, 3), (2, 3), (0, 2), (2, 1)], 0, 3)
        assert all(g.on_st_path(e) for e in range(len(g.edges)))

        g2 = domains.Dag(5, [(0, 1), (1, 2), (3, 4)], 0, 2)
        assert g2.edges == [(0, 1), (1, 2)]

    def test_rejects_cycles(self):
        with pytest.raises(ValueError):
            domains.Dag(3, [(0, 1), (1, 2), (2, 0)], 0, 2)

    def test_file_round_trip(self, tmp_path):
        g = domains.build_shortcut_dag(2)
        p = tmp_path / "g.dag"
        domains.save_dag(g, p)
        g2 = domains.load_dag(p)
        assert g2.n_vertices == g.n_vertices
        assert g2.edges == g.edges
        assert (g2.source, g2.sink) == (g.source, g.sink)


class TestShortcutDag:
    def test_n1_counts(self):
        g = domains.build_shortcut_dag(1)
        assert len(g.edges) == 5
        aset = domains.DagPaths(g, leveled=False)
        assert len(aset.enumerate(100)) == 3

    def test_n3_counts(self):
        g = domains.build_shortcut_dag(3)
        assert g.n_vertices == 8
        assert len(g.edges) == 13
        aset = domains.DagPaths(g, leveled=False)
        assert len(aset.enumerate(100)) == 9

    def test_shortcut_edge_usage(self):
        for n in (1, 2, 3, 5, 8):
            g = domains.build_shortcut_dag(n)
            aset = domains.DagPaths(g, leveled=False)
            acts = aset.enumerate(2 ** n + 1)
            assert len(acts) == 2 ** n + 1
            usage = np.sum(acts, axis=0)
            assert usage[g.shortcut_index] == 1
            # the four boundary edges touch source or sink on the long ladder
            boundary = [1, 2, len(g.edges) - 2, len(g.edges) - 1]
            for e in boundary:
                assert usage[e] == 2 ** (n - 1), (n, e)
            internal = [e for e in range(len(g.edges)) if e != 0 and e not in boundary]
            for e in internal:
                assert usage[e] == 2 ** (n - 2), (n, e)

    def test_path_lengths(self):
        g = domains.build_shortcut_dag(3)
        aset = domains.DagPaths(g, leveled=False)
        lengths = sorted(int(a.sum()) for a in aset.enumerate(100))
        assert lengths == [1] + [4] * 8


class TestEqualizePathLengths:
    def test_already_equal_is_unchanged(self):
        g = domains.Dag(4, [(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3)
        lev = domains.equalize_path_lengths(g)
        assert lev.edges == g.edges
        assert lev.n_vertices == g.n_vertices
        assert np.all(lev.origin == np.arange(len(g.edges)))

    def test_single_shortcut(self):
        # s->t plus s->a->t: one padding vertex on the shortcut
        g = domains.Dag(3, [(0, 2), (0, 1), (1, 2)], 0, 2)
        lev = domains.equalize_path_lengths(g)
        assert lev.n_vertices == 4
        aset = domains.DagPaths(lev, leveled=False)
        lengths = {int(a.sum()) for a in aset.enumerate(10)}
        assert lengths == {2}

    def test_shortcut_n2(self):
        g = domains.build_shortcut_dag(2)
        lev = domains.equalize_path_lengths(g)
        aset = domains.DagPaths(lev, leveled=False)
        acts = aset.enumerate(10)
        assert len(acts) == 5
        assert {int(a.sum()) for a in acts} == {3}
        k, nv = 3, g.n_vertices
        n_pad = int(np.sum(lev.origin < 0))
        assert len(lev.edges) - n_pad == len(g.edges)
        assert n_pad <= (k - 2) * (nv - 2) + 1

    def test_original_coordinates_preserved(self):
        g = domains.build_shortcut_dag(2)
        lev = domains.equalize_path_lengths(g)
        # original edges keep their indices; padding appended at the end
        assert list(lev.origin[: len(g.edges)]) == list(range(len(g.edges)))
        assert np.all(lev.origin[len(g.edges):] == -1)

    def test_lifted_rewards_preserved_per_path(self):
        rng = np.random.default_rng(4)
        g = domains.build_shortcut_dag(3)
        lev = domains.equalize_path_lengths(g)
        raw = domains.DagPaths(g, leveled=False)
        leveled = domains.DagPaths(lev, leveled=False)
        r = rng.random(len(g.edges))
        r_lift = domains.lift_rewards(lev, r)
        raw_vals = sorted(float(r @ a) for a in raw.enumerate(10))
        lev_vals = sorted(float(r_lift @ a) for a in leveled.enumerate(10))
        np.testing.assert_allclose(lev_vals, raw_vals, atol=1e-12)


class TestDagPaths:
    def line_with_shortcut(self):
        # s -> a -> t plus shortcut s -> t; edge order: shortcut last here
        return domains.Dag(3, [(0, 1), (1, 2), (0, 2)], 0, 2)

    def test_lmo_shortcut_example(self):
        g = self.line_with_shortcut()
        aset = domains.DagPaths(g, leveled=False)
        w = np.array([0.0, 0.0, 1.0])
        np.testing.assert_array_equal(aset.lmo(w), [0, 0, 1])

    def test_leveled_default_weight(self):
        aset = domains.DagPaths(domains.build_shortcut_dag(2))
        assert aset.fixed_weight
        assert aset.m == 3
        for a in aset.enumerate(10):
            assert int(a.sum()) == 3

    def test_lmo_vs_enumeration(self):
        diamond = domains.Dag(
            4, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)], 0, 3
        )
        instances = [
            domains.DagPaths(self.line_with_shortcut(), leveled=False),
            domains.DagPaths(domains.build_shortcut_dag(2), leveled=False),
            domains.DagPaths(domains.build_shortcut_dag(2)),
            domains.DagPaths(diamond, leveled=False),
            domains.DagPaths(domains.build_shortcut_dag(3)),
        ]
        for i, aset in enumerate(instances):
            check_lmo_matches(aset, seed=100 + i)

    def test_counting_guard(self):
        aset = domains.DagPaths(domains.build_shortcut_dag(8), leveled=False)
        assert aset.count() == 257
        with pytest.raises(TooLarge):
            aset.enumerate(100)

    def test_membership(self):
        aset = domains.DagPaths(domains.build_shortcut_dag(2), leveled=False)
        acts = aset.enumerate(10)
        for a in acts:
            assert aset.contains(a)
        bad = np.zeros(aset.d, dtype=np.int8)
        bad[1] = 1  # single dangling edge is not an s-t path
        assert not aset.contains(bad)


class TestSpanningTrees:
    def test_triangle_count(self):
        aset = domains.SpanningTrees(3, TRIANGLE)
        acts = aset.enumerate(10)
        assert len(acts) == 3
        assert aset.count() == 3

    def test_k4_count(self):
        # Cayley: 4^{4-2} = 16 spanning trees
        aset = domains.SpanningTrees(4, K4)
        assert aset.count() == 16
        assert len(aset.enumerate(20)) == 16

    def test_disconnected_raises(self):
        with pytest.raises(InfeasibleDomain):
            domains.SpanningTrees(4, [(0, 1), (2, 3)]).lmo(np.zeros(2))

    def test_lmo_vs_enumeration(self):
        square_diag = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
        for i, (n, edges) in enumerate([(3, TRIANGLE), (4, K4), (4, square_diag)]):
            check_lmo_matches(domains.SpanningTrees(n, edges), seed=200 + i)

    def test_membership(self):
        aset = domains.SpanningTrees(3, TRIANGLE)
        for a in aset.enumerate(10):
            assert aset.contains(a)
        assert not aset.contains([1, 1, 1])


class TestKForests:
    def test_lmo_vs_enumeration(self):
        for i, k in enumerate((1, 2, 3)):
            check_lmo_matches(domains.KForests(4, K4, k), seed=300 + i)

    def test_count_and_enumerate(self):
        aset = domains.KForests(3, TRIANGLE, 2)
        acts = aset.enumerate(10)
        assert len(acts) == 3  # any 2 of 3 triangle edges are acyclic
        assert aset.count() == 3

    def test_infeasible_k(self):
        with pytest.raises(InfeasibleDomain):
            domains.KForests(3, TRIANGLE, 3).lmo(np.ones(3))

    def test_membership(self):
        aset = domains.KForests(4, K4, 2)
        for a in aset.enumerate(20):
            assert aset.contains(a)
        assert not aset.contains([1, 1, 0, 1, 0, 0])  # triangle 0-1-2


class TestPermutations:
    def test_identity_example(self):
        aset = domains.Permutations(3)
        w = (10 * np.eye(3)).ravel()
        np.testing.assert_array_equal(aset.lmo(w), np.eye(3, dtype=np.int8).ravel())

    def test_count(self):
        assert domains.Permutations(4).count() == 24
        assert len(domains.Permutations(3).enumerate(10)) == 6

    def test_lmo_vs_enumeration(self):
        check_lmo_matches(domains.Permutations(3), seed=400)

    def test_membership(self):
        aset = domains.Permutations(3)
        for a in aset.enumerate(10):
            assert aset.contains(a)
        bad = np.zeros(9, dtype=np.int8)
        bad[0] = bad[3] = bad[8] = 1  # two marks in column 0
        assert not aset.contains(bad)


class TestTruncatedPermutations:
    def test_count(self):
        assert domains.TruncatedPermutations(2, 4).count() == 12

    def test_lmo_vs_enumeration(self):
        check_lmo_matches(domains.TruncatedPermutations(2, 3), seed=500)
        check_lmo_matches(domains.TruncatedPermutations(2, 4), seed=501, n_weights=60)

    def test_membership(self):
        aset = domains.TruncatedPermutations(2, 3)
        for a in aset.enumerate(10):
            assert aset.contains(a)
        bad = np.zeros(6, dtype=np.int8)
        bad[0] = bad[3] = 1  # same item twice
        assert not aset.contains(bad)


class TestEnumeratedInvariants:
    def test_every_enumerated_action_passes_membership_and_weight(self):
        sets = [
            domains.MSets(5, 2),
            domains.DagPaths(domains.build_shortcut_dag(2)),
            domains.SpanningTrees(4, K4),
            domains.KForests(4, K4, 2),
            domains.Permutations(3),
            domains.TruncatedPermutations(2, 3),
        ]
        for aset in sets:
            acts = aset.enumerate(100_000)
            assert len(acts) == aset.count()
            for a in acts:
                assert aset.contains(a)
                if aset.fixed_weight:
                    assert int(np.sum(a)) == aset.m
