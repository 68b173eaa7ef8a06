"""Entanglement coherence and the quantities it is tied to.

Entanglement coherence ``C_E`` of a bipartite pure state is the normalized
l1 coherence of the state in its Schmidt basis,

    C_E = 1/(n-1) * sum_{j != k} sqrt(p_j p_k) = ((Tr sqrt(rho))**2 - 1) / (n-1),

where ``p`` is the Schmidt spectrum, ``rho`` either reduced density and ``n``
the smaller local dimension.  It equals the unified entropy ``S^2_{1/2}`` of
``rho`` up to the factor ``1/(n-1)``, and is an affine function of both the
Wigner-Yanase quantum uncertainty ``Q(rho) = n - (Tr sqrt(rho))**2`` and the
basis-optimized skew coherence ``1 - (Tr sqrt(rho))**2 / n``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import linalg
from .errors import (BadBasis, BadDistribution, BadInput, BadParameters,
                     DimensionMismatch, NotHermitian, NotUnitary)
from .linalg import DEFAULT_TOL, dagger
from .states import (DensityOperator, PureBipartiteState, schmidt_decompose,
                     smaller_reduction)


def _normalizer(n: int) -> float | None:
    # None flags the one-dimensional case, where C_E is defined as 0.
    if n < 1:
        raise BadParameters(f"dimension must be positive, got {n}")
    return None if n == 1 else 1.0 / (n - 1)


def ec_from_schmidt(p, n: int) -> float:
    """Normalized off-diagonal sum of ``|psi><psi|`` in the Schmidt basis.

    ``p`` holds the squared Schmidt coefficients; it may be shorter than
    ``n`` (missing entries are zero).
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or p.size > n:
        raise BadDistribution(f"need between 1 and n={n} probabilities, got {p.size}")
    if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-8:
        raise BadDistribution("Schmidt probabilities must be non-negative and sum to 1")
    scale = _normalizer(n)
    if scale is None:
        return 0.0
    amp = np.sqrt(np.clip(p, 0.0, None))
    pairs = np.outer(amp, amp)
    offdiag = pairs.sum() - np.trace(pairs)
    return max(scale * float(offdiag), 0.0)


def ec_from_density(rho: DensityOperator, n: int | None = None) -> float:
    """``((Tr sqrt(rho))**2 - 1) / (n - 1)``; ``n`` defaults to ``rho.dim``."""
    n = rho.dim if n is None else n
    scale = _normalizer(n)
    if scale is None:
        return 0.0
    return max(scale * (rho.trace_sqrt() ** 2 - 1.0), 0.0)


def ec_from_sqrt_matrix(sqrt_rho, n: int | None = None, tol: float = DEFAULT_TOL) -> float:
    """Entanglement coherence from the matrix of ``sqrt(rho)`` in any basis.

    Evaluates ``1/(n-1) * sum_{j != k} (s_jj s_kk - |s_jk|**2)``.
    """
    s = linalg.as_matrix(sqrt_rho, square=True)
    if not linalg.is_hermitian(s, tol):
        raise BadInput("square-root matrix is not Hermitian")
    if abs(np.trace(s @ s).real - 1.0) > 1e-8:
        raise BadInput("square-root matrix does not square to unit trace")
    if linalg.hermitian_eig(s, tol).eigenvalues.min() < -1e-8:
        raise BadInput("square-root matrix is not positive semidefinite")
    n = s.shape[0] if n is None else n
    scale = _normalizer(n)
    if scale is None:
        return 0.0
    d = np.diag(s).real
    terms = np.outer(d, d) - np.abs(s) ** 2
    np.fill_diagonal(terms, 0.0)
    return max(scale * float(terms.sum()), 0.0)


def entanglement_coherence(psi: PureBipartiteState) -> float:
    return ec_from_density(smaller_reduction(psi), psi.n)


def _rotate(m: np.ndarray, basis) -> np.ndarray:
    u = linalg.as_matrix(basis, square=True)
    if u.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"basis is {u.shape[0]}-dimensional, operator is {m.shape[0]}")
    if not linalg.is_unitary(u, 1e-8):
        raise NotUnitary("basis matrix is not unitary")
    return dagger(u) @ m @ u


def i_concurrence_sq(rho: DensityOperator, basis=None) -> float:
    """Squared I-concurrence ``2 (1 - Tr rho**2)``.

    With a unitary ``basis`` the off-diagonal form
    ``2 sum_{j != k} (rho_jj rho_kk - |rho_jk|**2)`` is evaluated in that
    basis instead; both forms agree for every basis.
    """
    if basis is None:
        purity = float(np.sum(np.abs(rho.matrix) ** 2))
        return 2.0 * (1.0 - purity)
    r = _rotate(rho.matrix, basis)
    d = np.diag(r).real
    terms = np.outer(d, d) - np.abs(r) ** 2
    np.fill_diagonal(terms, 0.0)
    return 2.0 * float(terms.sum())


def i_concurrence_norm(rho: DensityOperator, n: int | None = None) -> float:
    """I-concurrence divided by its largest value ``sqrt(2 (n-1) / n)``."""
    n = rho.dim if n is None else n
    if n == 1:
        return 0.0
    return float(np.sqrt(max(i_concurrence_sq(rho), 0.0) / (2.0 * (n - 1) / n)))


def entropy_of_entanglement(rho: DensityOperator, n: int | None = None,
                            normalized: bool = False) -> float:
    """Von Neumann entropy in nats, optionally divided by ``ln n``."""
    p = rho.eigenvalues
    p = p[p > 0.0]
    s = max(float(-np.sum(p * np.log(p))), 0.0)
    if not normalized:
        return s
    n = rho.dim if n is None else n
    return 0.0 if n == 1 else s / np.log(n)


def unified_entropy(rho: DensityOperator, r: float, s: float) -> float:
    """Hu-Ye unified entropy ``((Tr rho**r)**s - 1) / ((1 - r) s)``."""
    if not r > 0 or r == 1 or s == 0:
        raise BadParameters(f"need r > 0, r != 1, s != 0; got r={r}, s={s}")
    p = rho.eigenvalues
    p = p[p > 0.0]
    return float((np.sum(p**r) ** s - 1.0) / ((1.0 - r) * s))


def _check_observable(rho: DensityOperator, a, tol: float) -> np.ndarray:
    a = linalg.as_matrix(a, square=True)
    if a.shape[0] != rho.dim:
        raise DimensionMismatch(f"observable is {a.shape[0]}-dimensional, state is {rho.dim}")
    if not linalg.is_hermitian(a, tol):
        raise NotHermitian("observable is not Hermitian")
    return a


def skew_information(rho: DensityOperator, a, tol: float = DEFAULT_TOL) -> float:
    """Wigner-Yanase skew information ``-1/2 Tr([sqrt(rho), A]**2)``.

    The commutator of two Hermitian matrices is anti-Hermitian, so this is
    half its squared Frobenius norm and non-negative by construction.
    """
    a = _check_observable(rho, a, tol)
    s = rho.sqrt()
    comm = s @ a - a @ s
    return 0.5 * float(np.sum(np.abs(comm) ** 2))


def skew_coherence(rho: DensityOperator, basis) -> float:
    """Sum of skew informations of the projectors onto the columns of ``basis``."""
    r = _rotate(rho.matrix, basis)
    s = _rotate(rho.sqrt(), basis)
    return float(np.sum(np.diag(r).real) - np.sum(np.diag(s).real ** 2))


def max_skew_coherence_analytic(rho: DensityOperator) -> float:
    """Largest skew coherence over all bases, ``1 - (Tr sqrt(rho))**2 / n``."""
    return 1.0 - rho.trace_sqrt() ** 2 / rho.dim


@dataclass(frozen=True)
class ObservableBasis:
    """``n**2`` Hermitian operators orthonormal under ``<A, B> = Tr(AB)``."""

    operators: tuple

    @property
    def n(self) -> int:
        return self.operators[0].shape[0]

    def gram(self) -> np.ndarray:
        ops = np.array(self.operators)
        return np.einsum("aij,bji->ab", ops, ops)

    def validate(self, tol: float = 1e-9) -> None:
        if not self.operators:
            raise BadBasis("empty observable basis")
        n = self.n
        if len(self.operators) != n * n:
            raise BadBasis(f"need {n * n} operators, got {len(self.operators)}")
        for op in self.operators:
            if op.shape != (n, n) or not linalg.is_hermitian(op, tol):
                raise BadBasis("operators must be Hermitian and equally sized")
        if linalg.max_abs(self.gram() - np.eye(n * n)) > tol:
            raise BadBasis("operators are not orthonormal under Tr(AB)")


def standard_observable_basis(n: int) -> ObservableBasis:
    """Diagonal units plus ``(E_jk + E_kj)/sqrt 2`` and ``i(E_kj - E_jk)/sqrt 2``."""
    if n < 1:
        raise BadParameters("dimension must be positive")
    ops = []
    for j in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[j, j] = 1.0
        ops.append(e)
    h = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=np.complex128)
            sym[j, k] = sym[k, j] = h
            anti = np.zeros((n, n), dtype=np.complex128)
            anti[j, k] = -1j * h
            anti[k, j] = 1j * h
            ops.extend([sym, anti])
    return ObservableBasis(tuple(ops))


def random_observable_basis(n: int, seed: int | np.random.Generator) -> ObservableBasis:
    """Standard basis mixed by a random real orthogonal ``n**2 x n**2`` matrix."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n * n, n * n)))
    q = q * np.sign(np.diag(r))
    std = np.array(standard_observable_basis(n).operators)
    mixed = np.einsum("ab,bij->aij", q, std)
    return ObservableBasis(tuple(0.5 * (m + dagger(m)) for m in mixed))


def quantum_uncertainty(rho: DensityOperator, basis: ObservableBasis | None = None) -> float:
    """Total skew information over a complete observable basis.

    Without ``basis`` the closed form ``n - (Tr sqrt(rho))**2`` is returned;
    with one, the ``n**2`` skew informations are summed directly.
    """
    if basis is None:
        return rho.dim - rho.trace_sqrt() ** 2
    basis.validate()
    if basis.n != rho.dim:
        raise BadBasis(f"basis acts on dimension {basis.n}, state has {rho.dim}")
    return float(sum(skew_information(rho, x) for x in basis.operators))


def joint_basis_coherence(psi: PureBipartiteState, basis_a, basis_b) -> float:
    """Unnormalized l1 coherence of ``|psi><psi|`` in a product basis.

    ``basis_a`` and ``basis_b`` hold the local basis vectors as columns.
    Since the joint matrix is rank one, the off-diagonal sum of ``|c_x c_y|``
    collapses to ``(sum |c|)**2 - 1``.
    """
    ua = linalg.as_matrix(basis_a, square=True)
    ub = linalg.as_matrix(basis_b, square=True)
    if ua.shape[0] != psi.dim_a or ub.shape[0] != psi.dim_b:
        raise DimensionMismatch(
            f"bases are {ua.shape[0]}x{ub.shape[0]}, state is {psi.dim_a}x{psi.dim_b}")
    if not (linalg.is_unitary(ua, 1e-8) and linalg.is_unitary(ub, 1e-8)):
        raise NotUnitary("local bases must be unitary")
    c = np.abs(dagger(ua) @ psi.coeffs @ ub.conj())
    return max(float(c.sum() ** 2 - np.sum(c**2)), 0.0)


@dataclass(frozen=True)
class MeasureReport:
    n: int
    ec: float
    i_concurrence_sq: float
    i_concurrence_norm: float
    entropy: float
    entropy_norm: float
    quantum_uncertainty: float
    max_skew_coherence: float
    identity_residuals: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def max_residual(self) -> float:
        return max(self.identity_residuals.values(), default=0.0)


def identity_residuals(psi: PureBipartiteState, seed: int = 0) -> dict:
    """Absolute discrepancies between independently computed forms of the
    identities linking ``C_E`` to the other measures.

    The rotated-basis checks use a Haar-random basis drawn from ``seed``.
    """
    rho = smaller_reduction(psi)
    n = psi.n
    ec = ec_from_density(rho, n)
    p = schmidt_decompose(psi).probabilities
    u = linalg.haar_random_unitary(n, seed)
    rotated_sqrt = dagger(u) @ rho.sqrt() @ u

    q_direct = quantum_uncertainty(rho, standard_observable_basis(n))
    s_half = unified_entropy(rho, 0.5, 2.0)
    max_ci = max_skew_coherence_analytic(rho)
    if n > 1:
        unified = abs(ec - s_half / (n - 1))
        q_rel = abs(ec - (1.0 - q_direct / (n - 1)))
        skew_rel = abs(ec - (1.0 - n / (n - 1) * max_ci))
    else:
        unified, q_rel, skew_rel = abs(s_half), abs(q_direct), abs(max_ci)
    return {
        "trace_vs_schmidt": abs(ec - ec_from_schmidt(p, n)),
        "trace_vs_sqrt_matrix": abs(ec - ec_from_sqrt_matrix(rotated_sqrt, n)),
        "unified_entropy": unified,
        "quantum_uncertainty": q_rel,
        "q_closed_vs_direct": abs(quantum_uncertainty(rho) - q_direct),
        "max_skew_coherence": skew_rel,
        "i_concurrence_forms": abs(i_concurrence_sq(rho) - i_concurrence_sq(rho, u)),
    }


def full_report(psi: PureBipartiteState, seed: int = 0) -> MeasureReport:
    rho = smaller_reduction(psi)
    n = psi.n
    return MeasureReport(
        n=n,
        ec=ec_from_density(rho, n),
        i_concurrence_sq=i_concurrence_sq(rho),
        i_concurrence_norm=i_concurrence_norm(rho, n),
        entropy=entropy_of_entanglement(rho, n),
        entropy_norm=entropy_of_entanglement(rho, n, normalized=True),
        quantum_uncertainty=quantum_uncertainty(rho),
        max_skew_coherence=max_skew_coherence_analytic(rho),
        identity_residuals=identity_residuals(psi, seed),
    )
