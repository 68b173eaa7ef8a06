"""Bipartite pure states, reduced density operators and Schmidt forms.

Index convention: the amplitude of ``|i>_a |j>_b`` sits at row ``i``, column
``j`` of the coefficient matrix ``C``.  A local unitary ``U (x) V`` acts as
``C -> U @ C @ V.T`` and the reduced densities are Gram matrices,
``rho_A = C C^H`` and ``rho_B = (C^H C)^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import linalg
from .errors import BadShape, NotHermitian, NotNormalized, NotPSD, OutOfRange
from .linalg import DEFAULT_TOL, EigenDecomposition

Subsystem = Literal["A", "B"]

ZERO_SCHMIDT = 1e-12

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class PureBipartiteState:
    coeffs: np.ndarray

    @property
    def dim_a(self) -> int:
        return self.coeffs.shape[0]

    @property
    def dim_b(self) -> int:
        return self.coeffs.shape[1]

    @property
    def n(self) -> int:
        """Dimension of the smaller subsystem."""
        return min(self.coeffs.shape)

    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1).copy()

    def projector(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite matrix with its spectrum.

    Build through :meth:`from_matrix`, which validates the input and runs the
    eigendecomposition once.
    """

    matrix: np.ndarray
    eig: EigenDecomposition

    @classmethod
    def from_matrix(cls, m, tol: float = DEFAULT_TOL) -> "DensityOperator":
        a = linalg.as_matrix(m, square=True)
        if not linalg.is_hermitian(a, tol):
            raise NotHermitian(f"density matrix is not Hermitian within {tol:g}")
        a = 0.5 * (a + linalg.dagger(a))
        tr = np.trace(a).real
        if abs(tr - 1.0) > tol:
            raise NotNormalized(f"density matrix has trace {tr!r}")
        eig = linalg.hermitian_eig(a, tol)
        if eig.eigenvalues.min() < -tol:
            raise NotPSD(f"density matrix has eigenvalue {eig.eigenvalues.min():.3e}")
        a.setflags(write=False)
        return cls(a, eig)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        """Spectrum, descending, with rounding noise set to exactly zero.

        Eigenvalues below ``8 * dim * eps`` are zeroed: the square root turns
        noise of order 1e-16 into errors of order 1e-8, which would otherwise
        dominate ``Tr sqrt(rho)`` for rank-deficient densities.
        """
        lam = self.eig.eigenvalues
        return np.where(lam < 8 * self.dim * _EPS, 0.0, lam)

    def sqrt(self) -> np.ndarray:
        v = self.eig.eigenvectors
        s = (v * np.sqrt(self.eigenvalues)) @ v.conj().T
        return 0.5 * (s + s.conj().T)

    def trace_sqrt(self) -> float:
        return float(np.sqrt(self.eigenvalues).sum())

    def rank(self, tol: float = DEFAULT_TOL) -> int:
        return int(np.count_nonzero(self.eig.eigenvalues > tol))


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def probabilities(self) -> np.ndarray:
        return self.coefficients**2

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    def reconstruct(self) -> np.ndarray:
        """Coefficient matrix of ``sum_i sqrt(p_i) |a_i> (x) |b_i>``."""
        return (self.basis_a * self.coefficients) @ self.basis_b.T


def _checked_dims(dim_a: int, dim_b: int) -> None:
    if dim_a < 1 or dim_b < 1:
        raise BadShape(f"subsystem dimensions must be positive, got {dim_a}x{dim_b}")


def new_state(dim_a: int, dim_b: int, amplitudes, *, strict: bool = False,
              norm_tol: float = 1e-6) -> PureBipartiteState:
    """Validated state from a flat row-major amplitude list.

    A norm within ``norm_tol`` of one is rescaled to exactly one; with
    ``strict=True`` any deviation beyond ``DEFAULT_TOL`` is rejected.
    """
    _checked_dims(dim_a, dim_b)
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.size != dim_a * dim_b:
        raise BadShape(f"expected {dim_a * dim_b} amplitudes, got {amps.size}")
    if not np.all(np.isfinite(amps)):
        raise BadShape("amplitudes must be finite")
    norm = float(np.linalg.norm(amps))
    limit = DEFAULT_TOL if strict else norm_tol
    if abs(norm - 1.0) > limit:
        raise NotNormalized(f"state norm is {norm!r}")
    coeffs = (amps / norm).reshape(dim_a, dim_b)
    coeffs.setflags(write=False)
    return PureBipartiteState(coeffs)


def reduced_density(psi: PureBipartiteState, subsystem: Subsystem = "A") -> DensityOperator:
    c = psi.coeffs
    if subsystem == "A":
        m = c @ c.conj().T
    elif subsystem == "B":
        m = (c.conj().T @ c).T
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return DensityOperator.from_matrix(m)


def smaller_reduction(psi: PureBipartiteState) -> DensityOperator:
    """Reduced density of whichever subsystem has dimension ``psi.n``."""
    return reduced_density(psi, "A" if psi.dim_a <= psi.dim_b else "B")


def schmidt_decompose(psi: PureBipartiteState) -> SchmidtDecomposition:
    u, sigma, v = linalg.svd(psi.coeffs)
    sigma = np.where(sigma < ZERO_SCHMIDT, 0.0, sigma)
    # C = U diag(s) V^H, so the b-side Schmidt vectors are conj(V).
    return SchmidtDecomposition(sigma, u, v.conj())


def schmidt_unitaries(psi: PureBipartiteState) -> tuple[np.ndarray, np.ndarray]:
    """Square local unitaries whose leading columns are the Schmidt vectors."""
    sd = schmidt_decompose(psi)
    return linalg.complete_to_unitary(sd.basis_a), linalg.complete_to_unitary(sd.basis_b)


def local_unitary(psi: PureBipartiteState, u_a, u_b) -> PureBipartiteState:
    """Apply ``u_a (x) u_b`` to ``psi``."""
    c = np.asarray(u_a) @ psi.coeffs @ np.asarray(u_b).T
    return new_state(psi.dim_a, psi.dim_b, c.reshape(-1))


def _diagonal_qutrit_state(amps) -> PureBipartiteState:
    c = np.zeros((3, 3), dtype=np.complex128)
    c[[0, 1, 2], [0, 1, 2]] = amps
    return new_state(3, 3, c.reshape(-1))


def make_psi1(theta: float) -> PureBipartiteState:
    """Two-qutrit family with amplitudes ``sqrt(2/3) sin t``, ``sqrt(2/3) cos t``
    and ``sqrt(1/3)`` on ``|++>``, ``|00>``, ``|-->``; maximally entangled at
    ``t = pi/4``."""
    if not -1e-12 <= theta <= np.pi / 2 + 1e-12:
        raise OutOfRange(f"theta must lie in [0, pi/2], got {theta!r}")
    s = np.sqrt(2.0 / 3.0)
    return _diagonal_qutrit_state([s * np.sin(theta), s * np.cos(theta), np.sqrt(1.0 / 3.0)])


def make_psi2(x: float) -> PureBipartiteState:
    """Two-qutrit family, a product state at ``x = 0`` and maximally entangled
    at ``x = 1``."""
    if not -1e-12 <= x <= 1.0 + 1e-12:
        raise OutOfRange(f"x must lie in [0, 1], got {x!r}")
    x = min(max(x, 0.0), 1.0)
    a = np.sqrt(x / 3.0)
    return _diagonal_qutrit_state([a, a, np.sqrt(1.0 - 2.0 * x / 3.0)])


def maximally_entangled(n: int) -> PureBipartiteState:
    _checked_dims(n, n)
    return new_state(n, n, (np.eye(n) / np.sqrt(n)).reshape(-1))


def product_state(dim_a: int, dim_b: int, i: int, j: int) -> PureBipartiteState:
    _checked_dims(dim_a, dim_b)
    if not (0 <= i < dim_a and 0 <= j < dim_b):
        raise BadShape(f"index ({i}, {j}) out of range for {dim_a}x{dim_b}")
    c = np.zeros((dim_a, dim_b), dtype=np.complex128)
    c[i, j] = 1.0
    return new_state(dim_a, dim_b, c.reshape(-1))


def random_state(dim_a: int, dim_b: int, seed: int | np.random.Generator) -> PureBipartiteState:
    """Haar-uniform unit vector: normalized complex Gaussian amplitudes."""
    _checked_dims(dim_a, dim_b)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(dim_a * dim_b) + 1j * rng.standard_normal(dim_a * dim_b)
    return new_state(dim_a, dim_b, z / np.linalg.norm(z))


def random_density(n: int, seed: int | np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random density matrix ``G G^H / Tr(G G^H)`` from an ``n x rank`` Ginibre matrix."""
    _checked_dims(n, n)
    k = n if rank is None else rank
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    m = g @ g.conj().T
    return DensityOperator.from_matrix(m / np.trace(m).real)


def density_from_state(psi: PureBipartiteState) -> DensityOperator:
    """Joint projector ``|psi><psi|`` as a density on the full space."""
    return DensityOperator.from_matrix(psi.projector())
