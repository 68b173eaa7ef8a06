"""End-to-end acceptance checks at their stated tolerances.

Every test records a one-line verdict in ``conftest.ACCEPTANCE_RESULTS``;
the terminal summary prints them in order as PASS/FAIL lines.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_RESULTS
from entcoh import cli, files, linalg, measures, optimize, states
from entcoh.states import DensityOperator


def record(key, ok, detail):
    ACCEPTANCE_RESULTS[key] = (bool(ok), detail)
    assert ok, f"{key}: {detail}"


def ensemble(count=500, seed=2024):
    """Seeded random pure states whose smaller side runs over 2..6."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = 2 + i % 5
        other = n + int(rng.integers(0, 3))
        dims = (n, other) if rng.random() < 0.5 else (other, n)
        out.append(states.random_state(*dims, rng))
    return out


@pytest.fixture(scope="module")
def states500():
    return ensemble()


def test_ac1_maximal_entanglement():
    start = time.perf_counter()
    errs = [abs(measures.entanglement_coherence(states.maximally_entangled(n)) - 1) for n in range(2, 7)]
    elapsed = time.perf_counter() - start
    record("AC1 maximal-entanglement anchor", max(errs) <= 1e-9 and elapsed < 1,
           f"max |ec-1| = {max(errs):.2e} (tol 1e-9), {elapsed:.3f}s (limit 1s)")


def test_ac2_separability():
    worst = 0.0
    rng = np.random.default_rng(2)
    for d_a in range(1, 6):
        for d_b in range(1, 6):
            for i in range(d_a):
                for j in range(d_b):
                    worst = max(worst, measures.entanglement_coherence(states.product_state(d_a, d_b, i, j)))
            # generic product states, rotated by random local unitaries
            for _ in range(5):
                a = rng.standard_normal(d_a) + 1j * rng.standard_normal(d_a)
                b = rng.standard_normal(d_b) + 1j * rng.standard_normal(d_b)
                psi = states.new_state(d_a, d_b, np.kron(a, b) / np.linalg.norm(np.kron(a, b)))
                worst = max(worst, measures.entanglement_coherence(psi))
    record("AC2 separability anchor", worst <= 1e-10, f"max ec = {worst:.2e} (tol 1e-10)")


def test_ac3_three_forms(states500):
    start = time.perf_counter()
    worst = 0.0
    for k, psi in enumerate(states500):
        rho = states.smaller_reduction(psi)
        n = psi.n
        trace_form = measures.ec_from_density(rho, n)
        schmidt_form = measures.ec_from_schmidt(states.schmidt_decompose(psi).probabilities, n)
        u = linalg.haar_random_unitary(n, k)
        sqrt_form = measures.ec_from_sqrt_matrix(u.conj().T @ rho.sqrt() @ u, n)
        vals = (trace_form, schmidt_form, sqrt_form)
        worst = max(worst, max(vals) - min(vals))
    elapsed = time.perf_counter() - start
    record("AC3 three-formula equivalence", worst <= 1e-9 and elapsed < 30,
           f"max discrepancy = {worst:.2e} (tol 1e-9) over 500 states, {elapsed:.2f}s (limit 30s)")


def test_ac4_identity_chain(states500):
    worst = {"unified": 0.0, "uncertainty": 0.0, "skew": 0.0}
    for psi in states500:
        rho = states.smaller_reduction(psi)
        n = psi.n
        ec = measures.ec_from_density(rho, n)
        worst["unified"] = max(worst["unified"], abs((n - 1) * ec - measures.unified_entropy(rho, 0.5, 2)))
        q = measures.quantum_uncertainty(rho, measures.standard_observable_basis(n))
        worst["uncertainty"] = max(worst["uncertainty"], abs(ec - (1 - q / (n - 1))))
        max_ci = measures.max_skew_coherence_analytic(rho)
        worst["skew"] = max(worst["skew"], abs(ec - (1 - n / (n - 1) * max_ci)))
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    record("AC4 identity chain", max(worst.values()) <= 1e-10, f"{detail} (tol 1e-10)")


def test_ac5_basis_independence():
    rng = np.random.default_rng(5)
    worst = 0.0
    for i in range(50):
        n = 2 + i % 3
        rho = states.random_density(n, rng, rank=int(rng.integers(1, n + 1)))
        closed = n - rho.trace_sqrt() ** 2
        for basis in (measures.standard_observable_basis(n), measures.random_observable_basis(n, rng)):
            worst = max(worst, abs(measures.quantum_uncertainty(rho, basis) - closed))
    record("AC5 Q basis independence", worst <= 1e-8,
           f"max |direct - closed| = {worst:.2e} (tol 1e-8) over 50 densities x 2 bases")


def test_ac6_basis_search():
    rng = np.random.default_rng(6)
    start = time.perf_counter()
    gaps = []
    for i in range(100):
        n = 2 + i % 3
        rho = states.random_density(n, rng, rank=int(rng.integers(1, n + 1)))
        gaps.append(optimize.maximize_skew_coherence(rho, seed=i).gap)
    elapsed = time.perf_counter() - start
    ok = max(gaps) <= 1e-3 and min(gaps) >= -1e-8 and elapsed < 120
    record("AC6 basis-search optimality", ok,
           f"gap in [{min(gaps):.2e}, {max(gaps):.2e}] (allowed [-1e-8, 1e-3]), {elapsed:.1f}s (limit 120s)")


def psi1_closed(theta):
    a = np.sqrt(2 / 3) * np.array([np.sin(theta), np.cos(theta)])
    return ((a.sum(axis=0) + np.sqrt(1 / 3)) ** 2 - 1) / 2


def test_ac7_sweep_endpoints_and_shape():
    psi1 = np.array(cli.sweep_rows("psi1", 201))
    psi2 = np.array(cli.sweep_rows("psi2", 201))
    quarter = psi1[np.argmin(np.abs(psi1[:, 0] - np.pi / 4))]
    checks = {
        "psi1 at pi/4": np.isclose(quarter[0], np.pi / 4, atol=1e-12)
        and np.all(np.abs(quarter[1:] - 1) <= 1e-9),
        "psi1 ec(0)": abs(psi1[0, 1] - np.sqrt(2) / 3) <= 1e-9,
        "psi1 closed form": np.allclose(psi1[:, 1], psi1_closed(psi1[:, 0]), atol=1e-9),
        "psi2 endpoints": np.all(np.abs(psi2[0, 1:]) <= 1e-9) and np.all(np.abs(psi2[-1, 1:] - 1) <= 1e-9),
        "psi2 non-decreasing": np.all(np.diff(psi2[:, 1]) >= -1e-12),
        "range [0,1]": all(np.all((r[:, 1:] >= -1e-12) & (r[:, 1:] <= 1 + 1e-9)) for r in (psi1, psi2)),
    }
    failed = [k for k, v in checks.items() if not v]
    record("AC7 sweep endpoints and shape", not failed,
           "all checks hold" if not failed else f"failed: {', '.join(failed)}")


def test_ac8_i_concurrence(bell):
    bell_err = abs(measures.i_concurrence_sq(states.reduced_density(bell)) - 1)
    rng = np.random.default_rng(8)
    worst = 0.0
    for i in range(100):
        n = 2 + i % 5
        rho = states.smaller_reduction(states.random_state(n, n + 1, rng))
        trace_form = measures.i_concurrence_sq(rho)
        for _ in range(5):
            worst = max(worst, abs(trace_form - measures.i_concurrence_sq(rho, linalg.haar_random_unitary(n, rng))))
    record("AC8 I-concurrence cross-check", bell_err <= 1e-10 and worst <= 1e-10,
           f"Bell |E^2-1| = {bell_err:.2e}, max form gap = {worst:.2e} over 100 states x 5 bases (tol 1e-10)")


def test_ac9_convex_roof():
    start = time.perf_counter()
    pure_err = 0.0
    for k, dims in enumerate([(2, 2), (2, 3), (3, 3)]):
        psi = states.random_state(*dims, 90 + k)
        est = optimize.convex_roof_upper_bound(states.density_from_state(psi), dims)
        pure_err = max(pure_err, abs(est.upper_bound - measures.entanglement_coherence(psi)))
    mixed = DensityOperator.from_matrix(np.eye(4) / 4)
    classical = DensityOperator.from_matrix(np.diag([0.5, 0, 0, 0.5]))
    bounds = [optimize.convex_roof_upper_bound(r, (2, 2)).upper_bound for r in (mixed, classical)]
    elapsed = time.perf_counter() - start
    ok = pure_err <= 1e-6 and max(bounds) <= 1e-3 and elapsed < 120
    record("AC9 convex-roof sanity", ok,
           f"pure |bound-ec| = {pure_err:.2e} (tol 1e-6), I/4 -> {bounds[0]:.2e}, "
           f"classical -> {bounds[1]:.2e} (tol 1e-3), {elapsed:.1f}s (limit 120s)")


def test_ac10_skew_reductions():
    rng = np.random.default_rng(10)
    commuting = variance_err = 0.0
    for i in range(100):
        n = 2 + i % 4
        rho = states.random_density(n, rng)
        v = rho.eig.eigenvectors
        a = (v * rng.standard_normal(n)) @ v.conj().T
        commuting = max(commuting, measures.skew_information(rho, 0.5 * (a + a.conj().T)))

        psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        psi /= np.linalg.norm(psi)
        pure = DensityOperator.from_matrix(np.outer(psi, psi.conj()))
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = h + h.conj().T
        mean = np.vdot(psi, h @ psi).real
        variance = np.vdot(psi, h @ h @ psi).real - mean**2
        variance_err = max(variance_err, abs(measures.skew_information(pure, h) - variance))
    record("AC10 skew-information reductions", commuting <= 1e-12 and variance_err <= 1e-10,
           f"commuting max = {commuting:.2e} (tol 1e-12), |I - Var| max = {variance_err:.2e} (tol 1e-10)")


def test_ac11_determinism(tmp_path):
    rho = states.random_density(3, 11).matrix
    files.write_density(tmp_path / "rho3.json", rho, (3,))
    files.write_density(tmp_path / "rho4.json", states.random_density(4, 12).matrix, (2, 2))
    commands = {
        "audit": ["audit", "--trials", "50", "--max-dim", "5", "--seed", "3"],
        "sweep": ["sweep", "--family", "psi1", "--steps", "41"],
        "optimize-basis": ["optimize-basis", str(tmp_path / "rho3.json"), "--seed", "4"],
        "convex-roof": ["convex-roof", str(tmp_path / "rho4.json"), "--dims", "2,2", "--seed", "4"],
    }
    differing = []
    for name, argv in commands.items():
        runs = [subprocess.run([sys.executable, "-m", "entcoh", *argv], capture_output=True, check=True).stdout
                for _ in range(2)]
        if runs[0] != runs[1] or not runs[0]:
            differing.append(name)
    record("AC11 determinism", not differing,
           "audit, sweep, optimize-basis, convex-roof byte-identical across two processes"
           if not differing else f"outputs differ: {', '.join(differing)}")
