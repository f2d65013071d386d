import numpy as np
import pytest

from gme import linalg
from gme.states import DensityMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_pure(dims, rng):
    return DensityMatrix.from_vector(linalg.random_pure_vector(int(np.prod(dims)), rng), dims)


def random_mixed(dims, rng, rank=None):
    return DensityMatrix(linalg.random_density_matrix(int(np.prod(dims)), rng, rank), dims)


def random_local_unitary(dims, rng):
    return linalg.kron_all(*(linalg.haar_unitary(d, rng) for d in dims))


def conjugate(state, u):
    return DensityMatrix(u @ state.matrix @ u.conj().T, state.dims)


def biseparable_pure(d, split, rng):
    """Random pure state on d x d x d factorizing as party ``split`` | other two."""
    single = linalg.random_pure_vector(d, rng)
    pair = linalg.random_pure_vector(d * d, rng)
    psi = np.kron(single, pair).reshape(d, d, d)
    # move the single party from position 0 to position ``split``
    order = {0: (0, 1, 2), 1: (1, 0, 2), 2: (1, 2, 0)}[split]
    psi = psi.transpose(order).reshape(-1)
    return DensityMatrix.from_vector(psi, (d, d, d))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
