"""Tests for the estimator linear algebra: co-occurrence matrices, Jacobi
eigendecomposition, pseudo-inverse, minimum nonzero eigenvalue, span projection.

Expected values marked "frozen" below were derived once by hand from closed
forms (small symmetric matrices with known spectra) and are committed as
constants, so regressions cannot hide behind a shared code path.
"""

import itertools

import numpy as np
import pytest

from swapcomb import linalg
from swapcomb.errors import EmptySupport, NotPSD
from swapcomb.policy import Policy


def two_sets_of_three():
    return np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1]], dtype=np.int8)


def m_sets(d, m):
    out = []
    for idx in itertools.combinations(range(d), m):
        v = np.zeros(d, dtype=np.int8)
        v[list(idx)] = 1
        out.append(v)
    return np.array(out)


def charpoly_coefficients(a):
    """Characteristic polynomial coefficients via Faddeev-LeVerrier.

    Uses only matrix products and traces -- independent of any
    eigendecomposition route, so it can serve as an oracle for one.
    """
    n = a.shape[0]
    m = np.zeros_like(a, dtype=float)
    c = 1.0
    coeffs = [1.0]
    for k in range(1, n + 1):
        m = a @ m + c * np.eye(n)
        c = -np.trace(a @ m) / k
        coeffs.append(c)
    return np.array(coeffs)


class TestCoOccurrence:
    def test_uniform_two_sets_of_three(self):
        # frozen: direct summation over the 3 support actions
        pol = Policy.uniform(two_sets_of_three())
        expected = np.array(
            [
                [2 / 3, 1 / 3, 1 / 3],
                [1 / 3, 2 / 3, 1 / 3],
                [1 / 3, 1 / 3, 2 / 3],
            ]
        )
        np.testing.assert_allclose(linalg.co_occurrence(pol), expected, atol=1e-15)

    def test_point_mass(self):
        m = np.array([1, 0, 1], dtype=np.int8)
        sigma = linalg.co_occurrence(Policy.point_mass(m))
        np.testing.assert_array_equal(sigma, np.outer(m, m).astype(float))

    def test_uniform_singletons(self):
        pol = Policy.uniform(np.eye(4, dtype=np.int8))
        np.testing.assert_allclose(linalg.co_occurrence(pol), np.eye(4) / 4, atol=1e-15)

    def test_symmetry_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            acts = m_sets(5, 2)
            w = rng.random(len(acts))
            pol = Policy(acts, w / w.sum())
            sigma = linalg.co_occurrence(pol)
            assert np.array_equal(sigma, sigma.T)

    def test_empty_support_raises(self):
        with pytest.raises(EmptySupport):
            Policy(np.zeros((0, 3), dtype=np.int8), [])


class TestJacobi:
    def test_agrees_with_lapack_spectrum(self):
        rng = np.random.default_rng(11)
        for n in (1, 2, 3, 5, 8, 13):
            b = rng.standard_normal((n, n))
            s = b @ b.T
            vals_j, vecs_j = linalg.eigh_jacobi(s)
            vals_ref = np.sort(np.linalg.eigvalsh(s))[::-1]
            np.testing.assert_allclose(vals_j, vals_ref, rtol=1e-10, atol=1e-10)
            # EigenDecomp invariants: reconstruction and orthonormality.
            recon = (vecs_j * vals_j) @ vecs_j.T
            scale = max(1.0, np.abs(s).max())
            assert np.abs(recon - s).max() <= 1e-10 * scale
            gram = vecs_j.T @ vecs_j
            assert np.abs(gram - np.eye(n)).max() <= 1e-10

    def test_eigenvalues_sorted_descending(self):
        s = np.diag([1.0, 3.0, 2.0])
        vals, _ = linalg.eigh_jacobi(s)
        np.testing.assert_allclose(vals, [3.0, 2.0, 1.0], atol=1e-14)

    def test_zero_matrix(self):
        vals, vecs = linalg.eigh_jacobi(np.zeros((3, 3)))
        np.testing.assert_array_equal(vals, np.zeros(3))
        np.testing.assert_allclose(vecs.T @ vecs, np.eye(3), atol=1e-14)

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        b = rng.standard_normal((6, 6))
        s = b @ b.T
        v1 = linalg.eigh_jacobi(s)
        v2 = linalg.eigh_jacobi(s)
        assert np.array_equal(v1[0], v2[0]) and np.array_equal(v1[1], v2[1])


class TestPseudoInverse:
    def test_closed_form_two_sets_of_three(self):
        # frozen: Sigma = (1/3)(I+J) so the inverse is 3I - (3/4)J
        sigma = linalg.co_occurrence(Policy.uniform(two_sets_of_three()))
        expected = 3.0 * np.eye(3) - 0.75 * np.ones((3, 3))
        got = linalg.pseudo_inverse(sigma)
        np.testing.assert_allclose(got, expected, atol=1e-10)
        np.testing.assert_allclose(sigma @ got, np.eye(3), atol=1e-10)

    def test_diagonal(self):
        np.testing.assert_allclose(
            linalg.pseudo_inverse(np.eye(4) / 4), 4 * np.eye(4), atol=1e-12
        )

    def test_rank_one(self):
        # frozen: pseudo-inverse of MM^T is uu^T/lambda with lambda = ||M||^2 = 2
        m = np.array([1.0, 1.0, 0.0])
        sigma = np.outer(m, m)
        np.testing.assert_allclose(linalg.pseudo_inverse(sigma), sigma / 4.0, atol=1e-12)

    def test_moore_penrose_identities(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            n = rng.integers(1, 7)
            r = rng.integers(1, n + 1)
            b = rng.standard_normal((n, r))
            s = b @ b.T
            sp = linalg.pseudo_inverse(s)
            np.testing.assert_allclose(s @ sp @ s, s, atol=1e-8)
            np.testing.assert_allclose(sp @ s @ sp, sp, atol=1e-8)

    def test_not_psd_raises(self):
        s = np.diag([1.0, -0.5])
        with pytest.raises(NotPSD):
            linalg.pseudo_inverse(s)

    def test_jacobi_backend_matches(self):
        rng = np.random.default_rng(5)
        b = rng.standard_normal((5, 3))
        s = b @ b.T
        a = linalg.pseudo_inverse(s, method="lapack")
        j = linalg.pseudo_inverse(s, method="jacobi")
        np.testing.assert_allclose(a, j, atol=1e-8)


class TestMinNonzeroEigenvalue:
    def test_two_sets_of_three(self):
        # frozen: eigenvalues of (1/3)(I+J) are {4/3, 1/3, 1/3}
        sigma = linalg.co_occurrence(Policy.uniform(two_sets_of_three()))
        assert abs(linalg.min_nonzero_eigenvalue(sigma) - 1 / 3) < 1e-12

    def test_identity(self):
        assert linalg.min_nonzero_eigenvalue(np.eye(3)) == pytest.approx(1.0)

    def test_rank_one(self):
        m = np.array([1.0, 1.0, 0.0])
        assert linalg.min_nonzero_eigenvalue(np.outer(m, m)) == pytest.approx(2.0)

    def test_zero_matrix_returns_zero(self):
        assert linalg.min_nonzero_eigenvalue(np.zeros((2, 2))) == 0.0

    def test_against_charpoly_roots(self):
        # Independent route: roots of the Faddeev-LeVerrier characteristic
        # polynomial, for d <= 4.  Spectra are kept away from zero so that
        # root-finding noise on repeated zero roots (~1e-8) cannot be mistaken
        # for a real eigenvalue by either route.
        rng = np.random.default_rng(41)
        for _ in range(40):
            n = int(rng.integers(1, 5))
            r = int(rng.integers(1, n + 1))
            q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            spectrum = np.zeros(n)
            spectrum[:r] = rng.uniform(0.5, 3.0, size=r)
            s = (q * spectrum) @ q.T
            s = (s + s.T) / 2
            roots = np.roots(charpoly_coefficients(s))
            roots = np.real(roots[np.abs(np.imag(roots)) < 1e-8])
            nz = roots[roots > 0.25]
            want = nz.min() if nz.size else 0.0
            got = linalg.min_nonzero_eigenvalue(s)
            assert abs(got - want) < 1e-6


class TestSpanProject:
    def test_full_rank_is_identity(self):
        rng = np.random.default_rng(2)
        b = rng.standard_normal((4, 4))
        s = b @ b.T + 4 * np.eye(4)
        sp = linalg.pseudo_inverse(s)
        x = rng.standard_normal(4)
        np.testing.assert_allclose(linalg.span_project(s, sp, x), x, atol=1e-8)

    def test_rank_one_projection(self):
        # frozen: projection of e_0 onto span{(1,1,0)} is (1/2,1/2,0)
        m = np.array([1.0, 1.0, 0.0])
        s = np.outer(m, m)
        sp = linalg.pseudo_inverse(s)
        got = linalg.span_project(s, sp, np.array([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(got, [0.5, 0.5, 0.0], atol=1e-12)

    def test_fixed_point_on_span(self):
        rng = np.random.default_rng(9)
        b = rng.standard_normal((5, 2))
        s = b @ b.T
        sp = linalg.pseudo_inverse(s)
        x = b @ rng.standard_normal(2)  # inside the span
        np.testing.assert_allclose(linalg.span_project(s, sp, x), x, atol=1e-8)

    def test_idempotent(self):
        rng = np.random.default_rng(17)
        b = rng.standard_normal((6, 3))
        s = b @ b.T
        sp = linalg.pseudo_inverse(s)
        x = rng.standard_normal(6)
        once = linalg.span_project(s, sp, x)
        twice = linalg.span_project(s, sp, once)
        np.testing.assert_allclose(twice, once, atol=1e-8)


class TestEstimatorProperties:
    def test_unbiasedness_spanning_support(self):
        # For a policy whose support spans R^d, sum_M p(M) (R.M) Sigma^+ M = R.
        rng = np.random.default_rng(101)
        acts = m_sets(4, 2)
        for _ in range(25):
            w = rng.random(len(acts)) + 0.05
            pol = Policy(acts, w / w.sum())
            sigma = linalg.co_occurrence(pol)
            sp = linalg.pseudo_inverse(sigma)
            reward = rng.random(4)
            got = linalg.estimator_mean(pol, reward, sp)
            np.testing.assert_allclose(got, reward, atol=1e-8)

    def test_unbiasedness_is_span_projection_when_deficient(self):
        rng = np.random.default_rng(55)
        acts = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], dtype=np.int8)
        pol = Policy(acts, [0.4, 0.6])
        sigma = linalg.co_occurrence(pol)
        sp = linalg.pseudo_inverse(sigma)
        reward = rng.random(4)
        got = linalg.estimator_mean(pol, reward, sp)
        np.testing.assert_allclose(got, linalg.span_project(sigma, sp, reward), atol=1e-8)

    def test_second_moment_bound(self):
        # E[M^T Sigma^{+2} M] <= d / lambda_min_nonzero(Sigma), exactly over support.
        rng = np.random.default_rng(77)
        families = [m_sets(4, 2), m_sets(5, 2), m_sets(5, 3), np.eye(5, dtype=np.int8)]
        for _ in range(50):
            acts = families[rng.integers(len(families))]
            w = rng.random(len(acts)) + 1e-3
            pol = Policy(acts, w / w.sum())
            sigma = linalg.co_occurrence(pol)
            sp = linalg.pseudo_inverse(sigma)
            second = float(
                pol.weights @ np.einsum("ij,jk,ik->i", pol.actions, sp @ sp, pol.actions)
            )
            d = acts.shape[1]
            lam = linalg.min_nonzero_eigenvalue(sigma)
            assert second <= d / lam + 1e-8
