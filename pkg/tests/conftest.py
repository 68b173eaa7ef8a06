import numpy as np
import pytest

from entcoh import states

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0][2:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")


@pytest.fixture
def bell():
    return states.new_state(2, 2, [2**-0.5, 0, 0, 2**-0.5])


@pytest.fixture
def hadamard():
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def fourier(n):
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def random_unitaries(n, seed, count):
    from entcoh.linalg import haar_random_unitary

    rng = np.random.default_rng(seed)
    return [haar_random_unitary(n, rng) for _ in range(count)]
