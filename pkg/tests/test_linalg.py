import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gme import linalg
from gme.states import werner

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def test_kron_identity_and_projectors():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    out = linalg.kron(np.diag([1, 0]), np.diag([0, 1]))
    assert np.array_equal(out, np.diag([0, 1, 0, 0]))


def test_kron_bell_expectation():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = np.outer(phi, phi)
    # hand-summed: <Phi+| X (x) X |Phi+> = 1
    assert np.trace(rho @ linalg.kron(SX, SX)).real == pytest.approx(1.0)


def test_permute_identity_and_swap(rng):
    a = linalg.random_density_matrix(2, rng)
    b = linalg.random_density_matrix(3, rng)
    m = np.kron(a, b)
    assert np.array_equal(linalg.permute_subsystems(m, (2, 3), (0, 1)), m)
    assert np.allclose(linalg.permute_subsystems(m, (2, 3), (1, 0)), np.kron(b, a))


def test_permute_regroup_preserves_spectrum():
    w = werner(-1, 2).matrix
    m = np.kron(w, w)
    out = linalg.permute_subsystems(m, (2, 2, 2, 2), (0, 2, 1, 3))
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(m), atol=1e-10)


def test_permute_rejects_bad_input():
    with pytest.raises(ValueError):
        linalg.permute_subsystems(np.eye(4), (2, 3), (1, 0))
    with pytest.raises(ValueError):
        linalg.permute_subsystems(np.eye(4), (2, 2), (0, 0))


def test_partial_trace_product(rng):
    a = linalg.random_density_matrix(2, rng)
    b = 3 * linalg.random_density_matrix(3, rng)
    assert np.allclose(linalg.partial_trace(np.kron(a, b), (2, 3), 0), a * 3)
    assert np.allclose(linalg.partial_trace(np.kron(a, b), (2, 3), [1]), b)


def test_partial_trace_ghz():
    psi = np.zeros(8)
    psi[[0, 7]] = 1 / np.sqrt(2)
    red = linalg.partial_trace(np.outer(psi, psi), (2, 2, 2), 0)
    assert np.allclose(red, np.eye(2) / 2)
    assert np.trace(red @ red) == pytest.approx(0.5)


def test_partial_trace_maximally_mixed():
    assert np.allclose(linalg.partial_trace(np.eye(8) / 8, (2, 2, 2), (0, 1)), np.eye(4) / 4)


def test_partial_trace_keeps_order(rng):
    a, b, c = (linalg.random_density_matrix(d, rng) for d in (2, 3, 2))
    m = linalg.kron_all(a, b, c)
    assert np.allclose(linalg.partial_trace(m, (2, 3, 2), (2, 0)), np.kron(a, c))


def test_partial_trace_errors():
    with pytest.raises(ValueError):
        linalg.partial_trace(np.eye(4), (2, 2), [])
    with pytest.raises(ValueError):
        linalg.partial_trace(np.eye(4), (2, 3), [0])


def test_partial_transpose_product(rng):
    a = linalg.random_density_matrix(2, rng)
    b = linalg.random_density_matrix(3, rng)
    out = linalg.partial_transpose(np.kron(a, b), (2, 3), 1)
    assert np.allclose(out, np.kron(a, b.T))
    assert np.linalg.eigvalsh(out)[0] > -1e-12


def test_partial_transpose_werner_cases():
    pt = linalg.partial_transpose(werner(-1, 2).matrix, (2, 2), 1)
    assert np.linalg.eigvalsh(pt)[0] < 0
    m = werner(0, 2).matrix
    assert np.allclose(linalg.partial_transpose(m, (2, 2), 1), m)


def test_singular_values():
    assert np.allclose(linalg.singular_values(np.eye(3)), [1, 1, 1])
    assert np.allclose(linalg.singular_values(np.diag([3.0, -4.0])), [4, 3])
    z = linalg.singular_values(np.zeros((3, 5)))
    assert z.shape == (3,) and np.all(z == 0)


def test_entropy_values():
    v = np.array([1, 1j]) / np.sqrt(2)
    assert linalg.von_neumann_entropy(np.outer(v, v.conj())) == pytest.approx(0, abs=1e-12)
    assert linalg.von_neumann_entropy(np.eye(5) / 5) == pytest.approx(np.log(5))
    # p=-1 is the singlet projector (pure); p=+1 spreads over the triplet
    assert np.allclose(np.linalg.eigvalsh(werner(-1, 2).matrix), [0, 0, 0, 1])
    assert linalg.von_neumann_entropy(werner(-1, 2).matrix) == pytest.approx(0, abs=1e-12)
    assert np.allclose(np.linalg.eigvalsh(werner(1, 2).matrix), [0, 1 / 3, 1 / 3, 1 / 3])
    assert linalg.von_neumann_entropy(werner(1, 2).matrix) == pytest.approx(np.log(3))


def test_entropy_rejects_non_psd():
    with pytest.raises(ValueError):
        linalg.von_neumann_entropy(np.diag([1.5, -0.5]))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), da=st.integers(1, 3), db=st.integers(1, 3), dc=st.integers(1, 3))
def test_kernel_properties(seed, da, db, dc):
    rng = np.random.default_rng(seed)
    dims = (da, db, dc)
    n = da * db * dc
    m = linalg.random_density_matrix(n, rng)
    assert np.abs(np.linalg.eigvalsh(m).imag).max(initial=0) == 0
    for sys in range(3):
        pt = linalg.partial_transpose(m, dims, sys)
        assert linalg.is_hermitian(pt)
        assert np.allclose(linalg.partial_transpose(pt, dims, sys), m, atol=1e-12)
    perm = rng.permutation(3)
    out = linalg.permute_subsystems(m, dims, perm)
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(m), atol=1e-10)
    m2 = linalg.random_density_matrix(n, rng)
    lhs = linalg.partial_trace(0.3 * m + 0.7 * m2, dims, [0, 2])
    rhs = 0.3 * linalg.partial_trace(m, dims, [0, 2]) + 0.7 * linalg.partial_trace(m2, dims, [0, 2])
    assert np.allclose(lhs, rhs, atol=1e-12)
    assert np.trace(linalg.partial_trace(m, dims, 1)).real == pytest.approx(1.0)
