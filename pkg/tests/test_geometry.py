"""Tests for polytope decomposition and KL projection."""

import numpy as np
import pytest

from swapcomb import domains, geometry
from swapcomb.errors import NotInHull
from swapcomb.policy import Policy

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def make_domains():
    return [
        domains.MSets(5, 2),
        domains.MSets(4, 3),
        domains.Permutations(3),
        domains.TruncatedPermutations(2, 3),
        domains.DagPaths(domains.build_shortcut_dag(2)),
        domains.SpanningTrees(4, K4_EDGES),
        domains.KForests(4, K4_EDGES, 2),
    ]


DOMAIN_IDS = [
    "msets-5-2",
    "msets-4-3",
    "perms-3",
    "trunc-2-3",
    "shortcut-2",
    "trees-k4",
    "forests-k4",
]


def reconstruction(dist: Policy) -> np.ndarray:
    return dist.weights @ np.asarray(dist.actions, dtype=float)


def generalized_kl(q, q_raw):
    q = np.asarray(q, dtype=float)
    q_raw = np.asarray(q_raw, dtype=float)
    terms = np.where(q > 0, q * np.log(np.where(q > 0, q, 1.0) / q_raw), 0.0)
    return float(terms.sum() - q.sum() + q_raw.sum())


class TestDecomposeExamples:
    def test_center_of_two_sets_of_three(self):
        aset = domains.MSets(3, 2)
        dist = geometry.decompose(aset, np.full(3, 1.0 / 3.0))
        assert dist.support_size == 3
        np.testing.assert_allclose(dist.weights, np.full(3, 1.0 / 3.0), atol=1e-9)
        np.testing.assert_allclose(reconstruction(dist), np.full(3, 2.0 / 3.0), atol=1e-9)

    def test_vertex_is_point_mass(self):
        aset = domains.MSets(3, 2)
        dist = geometry.decompose(aset, np.array([0.5, 0.5, 0.0]))
        assert dist.support_size == 1
        np.testing.assert_allclose(dist.actions[0], [1, 1, 0])
        np.testing.assert_allclose(dist.weights, [1.0], atol=1e-12)

    def test_birkhoff_center_of_permutations(self):
        aset = domains.Permutations(3)
        q = np.full(9, 1.0 / 9.0)
        dist = geometry.decompose(aset, q)
        # center of the Birkhoff polytope: three disjoint permutations, 1/3 each
        assert dist.support_size == 3
        np.testing.assert_allclose(dist.weights, np.full(3, 1.0 / 3.0), atol=1e-9)
        np.testing.assert_allclose(reconstruction(dist), np.full(9, 1.0 / 3.0), atol=1e-9)

    @pytest.mark.parametrize("aset", make_domains(), ids=DOMAIN_IDS)
    def test_every_vertex_decomposes_to_point_mass(self, aset):
        for m in aset.enumerate(100):
            dist = geometry.decompose(aset, np.asarray(m, dtype=float) / aset.m)
            assert dist.support_size == 1
            np.testing.assert_allclose(dist.actions[0], m)
            np.testing.assert_allclose(dist.weights, [1.0], atol=1e-9)

    def test_variable_length_paths_decompose(self):
        # raw (non-leveled) graph with paths of different lengths
        g = domains.Dag(3, [(0, 2), (0, 1), (1, 2)], 0, 2)
        aset = domains.DagPaths(g, leveled=False)
        assert not aset.fixed_weight
        short = np.array([1, 0, 0], dtype=float)
        long = np.array([0, 1, 1], dtype=float)
        x = 0.25 * short + 0.75 * long
        dist = geometry.decompose(aset, x / aset.m)
        np.testing.assert_allclose(reconstruction(dist), x, atol=1e-9)
        np.testing.assert_allclose(sum(dist.weights), 1.0, atol=1e-9)


class TestDecomposeRoundTrip:
    @pytest.mark.parametrize("aset", make_domains(), ids=DOMAIN_IDS)
    def test_interior_points_reconstruct(self, aset):
        rng = np.random.default_rng(20260823)
        actions = np.array(aset.enumerate(100_000), dtype=float)
        for _ in range(200):
            coeffs = rng.dirichlet(np.ones(len(actions)))
            x = coeffs @ actions
            dist = geometry.decompose(aset, x / aset.m)
            assert dist.support_size <= aset.d + 1
            np.testing.assert_allclose(reconstruction(dist), x, atol=1e-7)
            assert np.all(dist.weights >= 0)
            np.testing.assert_allclose(dist.weights.sum(), 1.0, atol=1e-9)

    @pytest.mark.parametrize("aset", make_domains(), ids=DOMAIN_IDS)
    def test_atoms_are_members(self, aset):
        rng = np.random.default_rng(7)
        actions = np.array(aset.enumerate(100_000), dtype=float)
        for _ in range(20):
            coeffs = rng.dirichlet(np.ones(len(actions)))
            dist = geometry.decompose(aset, (coeffs @ actions) / aset.m)
            for atom in dist.actions:
                assert aset.contains(np.asarray(atom))


class TestDecomposeErrors:
    def test_msets_cap_violation(self):
        aset = domains.MSets(4, 2)
        with pytest.raises(NotInHull):
            geometry.decompose(aset, np.array([0.9, 0.1, 0.0, 0.0]))

    def test_permutations_row_violation(self):
        aset = domains.Permutations(2)
        with pytest.raises(NotInHull):
            geometry.decompose(aset, np.array([0.5, 0.3, 0.1, 0.1]))

    def test_dag_conservation_violation(self):
        aset = domains.DagPaths(domains.build_shortcut_dag(2))
        q = np.zeros(aset.d)
        q[3] = 1.0  # an internal edge with no matching inflow/outflow
        with pytest.raises(NotInHull):
            geometry.decompose(aset, q)

    def test_trees_coordinate_violation(self):
        aset = domains.SpanningTrees(4, K4_EDGES)
        q = np.array([0.9, 0.1, 0.0, 0.0, 0.0, 0.0])
        with pytest.raises(NotInHull):
            geometry.decompose(aset, q)

    def test_very_negative_coordinate_rejected(self):
        aset = domains.MSets(3, 2)
        with pytest.raises(ValueError):
            geometry.decompose(aset, np.array([0.5, 0.6, -0.1]))


def msets_grid_min_kl(q_raw, m, resolution):
    """Dense grid search for the KL projection onto the m-sets polytope."""
    d = len(q_raw)
    cap = 1.0 / m
    axis = np.arange(0.0, cap + resolution / 2, resolution)
    grids = np.meshgrid(*([axis] * (d - 1)), indexing="ij")
    free = np.stack([g.ravel() for g in grids], axis=1)
    last = 1.0 - free.sum(axis=1)
    ok = (last >= -1e-12) & (last <= cap + 1e-12)
    pts = np.column_stack([free[ok], np.clip(last[ok], 0.0, cap)])
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(pts > 0, pts * np.log(pts / q_raw), 0.0)
    kl = logs.sum(axis=1) - pts.sum(axis=1) + q_raw.sum()
    return float(kl.min())


class TestKlProjectExamples:
    def test_fixed_point(self):
        aset = domains.MSets(3, 2)
        q = np.array([0.4, 0.35, 0.25])
        np.testing.assert_allclose(geometry.kl_project(aset, q), q, atol=1e-10)

    def test_uniform_center_fixed_point(self):
        aset = domains.MSets(5, 2)
        q = np.full(5, 0.2)
        np.testing.assert_allclose(geometry.kl_project(aset, q), q, atol=1e-10)

    def test_waterfilling_frozen_example(self):
        aset = domains.MSets(3, 2)
        got = geometry.kl_project(aset, np.array([0.8, 0.1, 0.1]))
        np.testing.assert_allclose(got, [0.5, 0.25, 0.25], atol=1e-9)

    def test_grid_optimality_d3(self):
        aset = domains.MSets(3, 2)
        q_raw = np.array([0.8, 0.1, 0.1])
        got = geometry.kl_project(aset, q_raw)
        grid_min = msets_grid_min_kl(q_raw, 2, 1e-3)
        assert generalized_kl(got, q_raw) <= grid_min + 1e-6

    def test_grid_optimality_d4(self):
        # resolution relaxed to keep the grid tractable in three free dims
        aset = domains.MSets(4, 2)
        rng = np.random.default_rng(11)
        for _ in range(3):
            q_raw = rng.uniform(0.05, 1.0, 4)
            got = geometry.kl_project(aset, q_raw)
            grid_min = msets_grid_min_kl(q_raw, 2, 5e-3)
            assert generalized_kl(got, q_raw) <= grid_min + 1e-6

    def test_unnormalized_input_handled(self):
        # multiplicative-weights iterates are not renormalized before projection
        aset = domains.MSets(3, 2)
        base = np.array([0.8, 0.1, 0.1])
        got = geometry.kl_project(aset, 3.7 * base)
        np.testing.assert_allclose(got, [0.5, 0.25, 0.25], atol=1e-9)

    def test_rejects_nonpositive(self):
        aset = domains.MSets(3, 2)
        with pytest.raises(ValueError):
            geometry.kl_project(aset, np.array([0.5, 0.5, 0.0]))


class TestKlProjectMembership:
    @pytest.mark.parametrize("aset", make_domains(), ids=DOMAIN_IDS)
    def test_output_admits_decomposition(self, aset):
        rng = np.random.default_rng(99)
        for _ in range(20):
            q_raw = rng.uniform(0.05, 2.0, aset.d)
            q = geometry.kl_project(aset, q_raw)
            assert np.all(q >= -1e-12)
            np.testing.assert_allclose(q.sum(), 1.0, atol=1e-8)
            dist = geometry.decompose(aset, q)
            np.testing.assert_allclose(
                reconstruction(dist), aset.m * q, atol=1e-6
            )

    @pytest.mark.parametrize("aset", make_domains(), ids=DOMAIN_IDS)
    def test_projection_idempotent(self, aset):
        rng = np.random.default_rng(5)
        q_raw = rng.uniform(0.1, 1.5, aset.d)
        q1 = geometry.kl_project(aset, q_raw)
        q2 = geometry.kl_project(aset, np.maximum(q1, 1e-300))
        np.testing.assert_allclose(q2, q1, atol=1e-6)

    def test_permutation_marginals(self):
        aset = domains.Permutations(3)
        rng = np.random.default_rng(13)
        q = geometry.kl_project(aset, rng.uniform(0.1, 1.0, 9))
        mat = (3 * q).reshape(3, 3)
        np.testing.assert_allclose(mat.sum(axis=1), np.ones(3), atol=1e-7)
        np.testing.assert_allclose(mat.sum(axis=0), np.ones(3), atol=1e-7)

    def test_raw_dag_projection(self):
        g = domains.Dag(3, [(0, 2), (0, 1), (1, 2)], 0, 2)
        aset = domains.DagPaths(g, leveled=False)
        q = geometry.kl_project(aset, np.array([0.6, 0.3, 0.2]))
        # unit flow scaled by 1/m: source outflow must be exactly 1/m
        np.testing.assert_allclose(q[0] + q[1], 1.0 / aset.m, atol=1e-8)
        np.testing.assert_allclose(q[1], q[2], atol=1e-8)  # conservation at 1
        dist = geometry.decompose(aset, q)
        np.testing.assert_allclose(reconstruction(dist), aset.m * q, atol=1e-6)
