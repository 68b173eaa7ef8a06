"""Dense complex linear algebra kernels.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The Hermitian
eigensolver is a cyclic Jacobi iteration; the square root and the SVD are
built on top of it so that every spectral quantity in the package comes from
one deterministic kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadInput, BadShape, NoConvergence, NotHermitian, NotPSD

DEFAULT_TOL = 1e-10

_EPS = np.finfo(float).eps


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    """Coerce ``m`` to a 2-d complex128 array, rejecting NaN/Inf entries."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.size == 0:
        raise BadShape(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise BadInput("matrix has non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise BadShape(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return m.shape[0] == m.shape[1] and max_abs(m - dagger(m)) <= tol


def is_unitary(u: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return max_abs(dagger(u) @ u - np.eye(u.shape[0])) <= tol


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _jacobi_rotation(a: np.ndarray, p: int, q: int) -> np.ndarray:
    # Phase-fix a[p, q] to a real positive number, then apply the real
    # symmetric Jacobi rotation that annihilates it.
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    ph = np.conj(phase)
    return np.array([[c, s], [-s * ph, c * ph]], dtype=np.complex128)


def _sort_eigenpairs(lam: np.ndarray, vecs: np.ndarray, tie_tol: float):
    n = lam.size
    dominant = np.empty(n, dtype=int)
    for k in range(n):
        col = vecs[:, k]
        i = int(np.argmax(np.abs(col)))
        dominant[k] = i
        # Fix the global phase so the dominant component is real positive.
        vecs[:, k] = col * (np.conj(col[i]) / abs(col[i]))

    order = sorted(range(n), key=lambda k: -lam[k])
    result = []
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and lam[order[stop - 1]] - lam[order[stop]] <= tie_tol:
            stop += 1
        group = sorted(order[start:stop], key=lambda k: (dominant[k], -lam[k]))
        result.extend(group)
        start = stop
    idx = np.array(result, dtype=int)
    return lam[idx], vecs[:, idx]


def hermitian_eig(m, tol: float = DEFAULT_TOL, max_sweeps: int | None = None) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix with the cyclic complex Jacobi method.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian within ``tol`` in the max-abs norm.
    tol : float
        Hermiticity tolerance; also the gap below which two eigenvalues count
        as tied for ordering purposes.
    max_sweeps : int, optional
        Iteration cap, defaults to ``100 * n**2`` sweeps.

    Returns
    -------
    EigenDecomposition
        Eigenvalues sorted descending.  Ties are ordered by the position of
        the largest-magnitude component of the eigenvector, and each
        eigenvector is phased so that component is real and positive.
    """
    a = as_matrix(m, square=True)
    if max_abs(a - dagger(a)) > tol:
        raise NotHermitian(f"matrix is not Hermitian within {tol:g}")
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if max_sweeps is None:
        max_sweeps = 100 * n * n

    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return EigenDecomposition(np.zeros(n), v)
    converged_at = n * _EPS * scale
    skip_below = 0.1 * _EPS * scale
    offdiag = ~np.eye(n, dtype=bool)

    for sweep in range(max_sweeps + 1):
        if np.sqrt(np.sum(np.abs(a[offdiag]) ** 2)) <= converged_at:
            break
        if sweep == max_sweeps:
            raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= skip_below:
                    continue
                g = _jacobi_rotation(a, p, q)
                pq = [p, q]
                a[:, pq] = a[:, pq] @ g
                a[pq, :] = dagger(g) @ a[pq, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, pq] = v[:, pq] @ g

    lam, vecs = _sort_eigenpairs(np.diag(a).real.copy(), v, tie_tol=tol)
    return EigenDecomposition(lam, vecs)


def psd_sqrt(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are treated as rounding noise and clipped to
    zero; anything more negative raises :class:`NotPSD`.
    """
    return sqrt_from_eig(hermitian_eig(rho, tol), tol)


def sqrt_from_eig(eig: EigenDecomposition, tol: float = DEFAULT_TOL) -> np.ndarray:
    lam = eig.eigenvalues
    if lam.size and lam.min() < -tol:
        raise NotPSD(f"eigenvalue {lam.min():.3e} below -{tol:g}")
    v = eig.eigenvectors
    s = (v * np.sqrt(np.clip(lam, 0.0, None))) @ dagger(v)
    return 0.5 * (s + dagger(s))


def _orthonormal_completion(u: np.ndarray, good: np.ndarray) -> np.ndarray:
    """Re-orthonormalize the columns of ``u`` in order (modified Gram-Schmidt,
    applied twice); columns flagged not ``good`` are rebuilt from standard
    basis vectors."""
    m, k = u.shape
    out = np.zeros_like(u)

    def project_out(x, j):
        for _ in range(2):
            x = x - out[:, :j] @ (dagger(out[:, :j]) @ x)
        return x

    for j in range(k):
        if good[j]:
            x = project_out(u[:, j], j)
            nrm = np.linalg.norm(x)
            if nrm > 0.5:
                out[:, j] = x / nrm
                continue
        # Standard basis vector with the largest component outside the span.
        residual = project_out(np.eye(m, dtype=np.complex128), j)
        norms = np.linalg.norm(residual, axis=0)
        i = int(np.argmax(norms))
        out[:, j] = residual[:, i] / norms[i]
    return out


def complete_to_unitary(cols) -> np.ndarray:
    """Extend orthonormal columns ``(m, k)`` to an ``m x m`` unitary whose
    first ``k`` columns are the given ones (up to rounding)."""
    a = as_matrix(cols)
    m, k = a.shape
    if k > m:
        raise BadShape(f"cannot extend {k} columns in dimension {m}")
    u = np.zeros((m, m), dtype=np.complex128)
    u[:, :k] = a
    good = np.zeros(m, dtype=bool)
    good[:k] = True
    return _orthonormal_completion(u, good)


def svd(m, tol: float = DEFAULT_TOL):
    """Thin singular value decomposition ``M = U @ diag(sigma) @ V^H``.

    Computed from the Jacobi eigendecomposition of ``M^H M`` (or of
    ``M M^H`` when ``M`` is wide).  Left vectors are recovered as
    ``M v / sigma`` and then re-orthonormalized, which also supplies
    orthonormal columns for the null space.

    Returns
    -------
    u : ndarray, shape (rows, r)
    sigma : ndarray, shape (r,)
        Non-negative, descending; ``r = min(rows, cols)``.
    v : ndarray, shape (cols, r)
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows < cols:
        u, sigma, v = svd(dagger(a), tol)
        return v, sigma, u

    gram = dagger(a) @ a
    gram = 0.5 * (gram + dagger(gram))
    eig = hermitian_eig(gram, tol=max(tol, 1e-12 * max(1.0, max_abs(gram))))
    v = eig.eigenvectors
    w = a @ v
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, v, w = sigma[order], v[:, order], w[:, order]

    cutoff = 1e-13 * sigma[0] if sigma[0] > 0 else 0.0
    good = sigma > cutoff
    u = np.zeros((rows, cols), dtype=np.complex128)
    u[:, good] = w[:, good] / sigma[good]
    u = _orthonormal_completion(u, good)
    return u, sigma, v


def nuclear_norms(stack: np.ndarray) -> np.ndarray:
    """Sum of singular values for each matrix in a ``(k, m, n)`` stack.

    Hot-loop helper for the optimizers; delegates to LAPACK.
    """
    return np.linalg.svd(stack, compute_uv=False).sum(axis=-1)


def haar_random_unitary(n: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a standard complex Gaussian matrix, with the columns of ``Q``
    rephased by the phases of ``diag(R)`` so the distribution is exactly
    Haar.  ``seed`` may be an integer or an existing ``Generator``.
    """
    if n < 1:
        raise BadShape("unitary dimension must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    d = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * d
