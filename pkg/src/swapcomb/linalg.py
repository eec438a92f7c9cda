"""Dense symmetric linear algebra behind the one-sample reward estimator.

The estimator needs, per simulated day: the co-occurrence matrix
``Sigma = E[M M^T]`` of the current sparse policy, its Moore-Penrose
pseudo-inverse, its minimum nonzero eigenvalue, and projections onto the span
of the support actions.  Sizes stay at desk scale (d up to a few hundred), so
everything is dense.

Two eigendecomposition backends are provided.  ``eigh_jacobi`` is a cyclic
Jacobi sweep: deterministic, portable, and convergence-checked against the
off-diagonal Frobenius norm, useful as a cross-check oracle.  The default
backend for the derived operations is LAPACK's ``eigh`` — the decomposition
runs once per simulated day, and Jacobi in pure Python is two to three orders
of magnitude slower at d ~ 40.  Both are deterministic for a fixed build.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptySupport, NotPSD
from .policy import Policy

#: Relative cutoff under which an eigenvalue is treated as zero.  Path domains
#: and point-mass policies produce genuinely singular co-occurrence matrices.
RANK_TOL = 1e-10

_JACOBI_SWEEP_CAP = 100
_JACOBI_OFF_TOL = 1e-12  # times the Frobenius norm of the input


def co_occurrence(policy: Policy) -> np.ndarray:
    """Co-occurrence matrix ``Sigma[i,j] = sum_M p(M) M(i) M(j)``.

    Assembled from the sparse support (cost ``|support| * d^2``), never by
    enumerating the action set.

    Raises
    ------
    EmptySupport
        If the policy has no support (cannot happen for a validated Policy,
        but guarded for raw callers).
    """
    if policy.support_size == 0:
        raise EmptySupport("co_occurrence of an empty policy")
    acts = policy.actions.astype(float)
    sigma = (acts * policy.weights[:, None]).T @ acts
    # Exact symmetry by construction of the product; enforce bitwise anyway so
    # downstream equality checks never see representation noise.
    return (sigma + sigma.T) / 2.0


def eigh_jacobi(sym: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row-by-row over all off-diagonal pairs until the off-diagonal
    Frobenius norm falls below ``1e-12 * ||S||_F``, capped at 100 sweeps.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Eigenvalues sorted descending; eigenvectors as orthonormal columns in
        the matching order, sign-fixed so the largest-magnitude component of
        each vector is positive.
    """
    a = np.array(sym, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    v = np.eye(n)
    norm_f = float(np.linalg.norm(a))
    tol = _JACOBI_OFF_TOL * norm_f

    for _ in range(_JACOBI_SWEEP_CAP):
        off = np.sqrt(max(0.0, float(np.sum(a * a) - np.sum(np.diag(a) ** 2))))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # Symmetric Schur rotation annihilating (p, q).
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp, rq = a[p].copy(), a[q].copy()
                a[p] = c * rp - s * rq
                a[q] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = v[:, order]
    return vals, _fix_signs(vecs)


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            out[:, j] = -col
    return out


def sym_eig(sym: np.ndarray, method: str = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition dispatch; eigenvalues descending, orthonormal columns."""
    if method == "jacobi":
        return eigh_jacobi(sym)
    if method == "lapack":
        vals, vecs = np.linalg.eigh(np.asarray(sym, dtype=float))
        order = np.argsort(-vals, kind="stable")
        return vals[order], _fix_signs(vecs[:, order])
    raise ValueError(f"unknown eigendecomposition method {method!r}")


def _psd_spectrum(sym, rank_tol, method):
    vals, vecs = sym_eig(sym, method=method)
    lam_max = float(vals[0]) if vals.size else 0.0
    lam_max = max(lam_max, 0.0)
    if vals.size and vals[-1] < -1e-9 * max(lam_max, abs(float(vals[-1]))):
        raise NotPSD(f"eigenvalue {vals[-1]:.3e} with lambda_max {lam_max:.3e}")
    cutoff = rank_tol * lam_max
    return vals, vecs, cutoff


def pseudo_inverse(
    sym: np.ndarray, rank_tol: float = RANK_TOL, method: str = "lapack"
) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a PSD matrix.

    Eigenvalues at or below ``rank_tol * lambda_max`` invert to zero; the rest
    to their reciprocals.  Satisfies ``S S+ S = S`` and ``S+ S S+ = S+`` to
    1e-8 on well-scaled inputs.

    Raises
    ------
    NotPSD
        If a significantly negative eigenvalue (below ``-1e-9 * lambda_max``)
        is present.
    """
    vals, vecs, cutoff = _psd_spectrum(sym, rank_tol, method)
    inv = np.where(vals > cutoff, 1.0 / np.where(vals > cutoff, vals, 1.0), 0.0)
    out = (vecs * inv) @ vecs.T
    return (out + out.T) / 2.0


def min_nonzero_eigenvalue(
    sym: np.ndarray, rank_tol: float = RANK_TOL, method: str = "lapack"
) -> float:
    """Smallest eigenvalue strictly above the rank cutoff; 0 if none."""
    vals, _, cutoff = _psd_spectrum(sym, rank_tol, method)
    nz = vals[vals > cutoff]
    return float(nz[-1]) if nz.size else 0.0


def span_project(sym: np.ndarray, sym_plus: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Orthogonal projection ``S S+ x`` of x onto the span of the support."""
    return np.asarray(sym, dtype=float) @ (np.asarray(sym_plus, dtype=float) @ np.asarray(x, dtype=float))


def estimator_mean(policy: Policy, reward: np.ndarray, sigma_plus: np.ndarray) -> np.ndarray:
    """Exact expectation ``sum_M p(M) (R.M) Sigma^+ M`` of the one-sample estimator.

    Equals the span-projection of R when the support spans the reward
    direction; used by unbiasedness tests and the decomposition audit.
    """
    acts = policy.actions.astype(float)
    scal = acts @ np.asarray(reward, dtype=float)  # R.M per atom
    return (policy.weights * scal) @ (acts @ np.asarray(sigma_plus, dtype=float).T)
