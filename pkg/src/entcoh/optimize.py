"""Derivative-free searches over unitary matrices.

Both optimizers run a compass (pattern) search on the unitary group.  A poll
moves the current unitary along one elementary Hermitian generator,
``U -> U @ expm(+-1j * step * G)``, where ``G`` runs over the ``K**2``
generators: one diagonal phase per index and a symmetric and antisymmetric
off-diagonal pair per index pair.  Each of these exponentials is a phase or a
2x2 rotation, so a poll costs one objective evaluation per direction and the
iterate never leaves the group.  The step starts at 0.3 and halves after a
full sweep without improvement; the search stops once it falls below 1e-7
or when the poll budget is spent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import BadParameters, BadShape, RankDeficit
from .linalg import DEFAULT_TOL
from .measures import entanglement_coherence, max_skew_coherence_analytic, skew_coherence
from .states import DensityOperator, PureBipartiteState, new_state

STEP_INIT = 0.3
STEP_DECAY = 0.5
STEP_FLOOR = 1e-7
ZERO_WEIGHT = 1e-12


def generators(k: int) -> list[tuple[str, int, int]]:
    gens = [("phase", j, j) for j in range(k)]
    for j in range(k):
        for l in range(j + 1, k):
            gens.append(("sym", j, l))
            gens.append(("anti", j, l))
    return gens


def apply_generator(u: np.ndarray, gen: tuple[str, int, int], t: float) -> np.ndarray:
    """Return ``u @ expm(1j * t * G)`` for the elementary generator ``gen``."""
    kind, j, l = gen
    out = u.copy()
    if kind == "phase":
        out[:, j] *= np.exp(1j * t)
        return out
    c, s = np.cos(t), np.sin(t)
    uj, ul = u[:, j], u[:, l]
    if kind == "sym":
        out[:, j] = c * uj + 1j * s * ul
        out[:, l] = 1j * s * uj + c * ul
    else:
        out[:, j] = c * uj - s * ul
        out[:, l] = s * uj + c * ul
    return out


def pattern_search(objective: Callable[[np.ndarray], float], u0: np.ndarray, iterations: int,
                   step: float = STEP_INIT, decay: float = STEP_DECAY, floor: float = STEP_FLOOR):
    """Minimize ``objective`` over unitaries starting from ``u0``.

    ``iterations`` caps the number of polls; one poll tries a single
    generator in both directions and takes the first strict improvement.

    Returns
    -------
    (u, value, polls, converged)
        ``converged`` is true when the step fell below ``floor`` inside the
        budget.
    """
    u = np.array(u0, dtype=np.complex128)
    value = objective(u)
    gens = generators(u.shape[1])
    polls = 0
    while step >= floor and polls < iterations:
        improved = False
        for gen in gens:
            if polls >= iterations:
                break
            polls += 1
            for t in (step, -step):
                cand = apply_generator(u, gen, t)
                cv = objective(cand)
                if cv < value:
                    u, value, improved = cand, cv, True
                    break
        if not improved and polls < iterations:
            step *= decay
    return u, value, polls, step < floor


def restart_seed(seed: int, restart: int) -> int:
    """Independent per-restart seed, so restart ``r`` is the same run no
    matter how many restarts are requested."""
    return int(np.random.SeedSequence([seed, restart]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class BasisSearchResult:
    best_value: float
    best_basis: np.ndarray
    iterations_used: int
    analytic_target: float
    gap: float
    converged: bool


def maximize_skew_coherence(rho: DensityOperator, iterations: int = 2000, restarts: int = 8,
                            seed: int = 0) -> BasisSearchResult:
    """Search for the basis with the largest skew-information coherence.

    Each restart starts from a Haar-random basis.  The analytic maximum
    ``1 - (Tr sqrt(rho))**2 / n`` is returned alongside for comparison.
    """
    n = rho.dim
    if n < 2:
        raise BadParameters("basis search needs dimension >= 2")
    if restarts < 1 or iterations < 1:
        raise BadParameters("iterations and restarts must be positive")
    s = rho.sqrt()

    # C_I = Tr(rho) - sum_k <k|sqrt(rho)|k>^2 with Tr(rho) = 1 fixed.
    def objective(u):
        d = np.einsum("ik,ij,jk->k", u.conj(), s, u).real
        return float(d @ d)

    best = None
    used = 0
    for r in range(restarts):
        u0 = linalg.haar_random_unitary(n, restart_seed(seed, r))
        u, value, polls, converged = pattern_search(objective, u0, iterations)
        used += polls
        if best is None or value < best[1]:
            best = (u, value, converged)
    u, _, converged = best
    value = skew_coherence(rho, u)
    target = max_skew_coherence_analytic(rho)
    return BasisSearchResult(value, u, used, target, target - value, converged)


@dataclass(frozen=True)
class RoofEstimate:
    upper_bound: float
    decomposition: list
    restarts_used: int
    converged: bool
    ensemble_size: int
    iterations_used: int

    def reconstruct(self) -> np.ndarray:
        """``sum_k q_k |psi_k><psi_k|`` over the reported members."""
        return sum(q * psi.projector() for q, psi in self.decomposition)


def _roof_objective(a: np.ndarray, dims: tuple[int, int], n: int):
    d_a, d_b = dims

    # Unnormalized members psi~_k = (A W)[:, k]; for these
    # q_k C_E(psi_k) = (||C~_k||_*^2 - q_k) / (n - 1).
    def objective(w):
        members = a @ w
        stack = members.T.reshape(-1, d_a, d_b)
        weights = np.sum(np.abs(members) ** 2, axis=0)
        nuclear = linalg.nuclear_norms(stack)
        return float(np.sum(nuclear**2 - weights)) / (n - 1)

    return objective


def convex_roof_upper_bound(varrho: DensityOperator, dims: tuple[int, int],
                            ensemble_size: int | None = None, restarts: int = 8,
                            iterations: int = 2000, seed: int = 0,
                            tol: float = DEFAULT_TOL) -> RoofEstimate:
    """Upper bound on the convex-roof extension of entanglement coherence.

    Pure-state ensembles of size ``K`` for ``varrho`` are exactly the columns
    of ``A @ W``, with ``A`` the ``sqrt(lambda_i) |e_i>`` spectral vectors
    padded with zero columns to width ``K`` and ``W`` a ``K x K`` unitary.
    The ensemble average of ``C_E`` is minimized over ``W``; restart 0
    starts from the spectral ensemble (``W = I``), the rest from Haar-random
    unitaries.  The result is the best value found, which bounds the roof
    from above but is not certified to be the minimum.
    """
    d_a, d_b = dims
    if d_a < 1 or d_b < 1 or varrho.dim != d_a * d_b:
        raise BadShape(f"density of dimension {varrho.dim} does not match dims {d_a}x{d_b}")
    if restarts < 1 or iterations < 1:
        raise BadParameters("iterations and restarts must be positive")
    rank = varrho.rank(tol)
    k = rank + 2 if ensemble_size is None else ensemble_size
    if k < rank:
        raise RankDeficit(f"ensemble size {k} below rank {rank}")

    lam = varrho.eigenvalues[:rank]
    a = np.zeros((varrho.dim, k), dtype=np.complex128)
    a[:, :rank] = varrho.eig.eigenvectors[:, :rank] * np.sqrt(lam)
    a /= np.linalg.norm(a)

    n = min(d_a, d_b)
    best = None
    used = 0
    if n > 1:
        objective = _roof_objective(a, (d_a, d_b), n)
        for r in range(restarts):
            w0 = np.eye(k, dtype=np.complex128) if r == 0 else \
                linalg.haar_random_unitary(k, restart_seed(seed, r))
            w, value, polls, converged = pattern_search(objective, w0, iterations)
            used += polls
            if best is None or value < best[1]:
                best = (w, value, converged)
        w, _, converged = best
    else:
        w, converged = np.eye(k, dtype=np.complex128), True

    members = a @ w
    decomposition = []
    for col in members.T:
        q = float(np.sum(np.abs(col) ** 2))
        if q >= ZERO_WEIGHT:
            decomposition.append((q, new_state(d_a, d_b, col / np.sqrt(q))))
    bound = float(sum(q * entanglement_coherence(psi) for q, psi in decomposition))
    return RoofEstimate(bound, decomposition, restarts, converged, k, used)
