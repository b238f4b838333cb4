import numpy as np
import pytest

from dqcdiscord.haar import derive_substream, haar_unitary
from dqcdiscord.matcore import density_matrix, pure_state

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def bell_state():
    return pure_state(np.array([1, 0, 0, 1]) / np.sqrt(2))


def random_density(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def bell():
    return bell_state()


def haar(dim, index, seed=1234):
    return haar_unitary(dim, derive_substream(seed, index))


def product_state(rng, da=2, db=2):
    a = random_density(da, rng)
    b = random_density(db, rng)
    return density_matrix(np.kron(a, b), (da, db))


ACCEPTANCE_LINES = []


def record(number, ok, text):
    ACCEPTANCE_LINES.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES, key=lambda x: x[0]):
        terminalreporter.write_line(line)
