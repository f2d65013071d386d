import itertools
import math

import numpy as np
import pytest

from gme import criteria as crit
from gme import linalg, states
from gme.basis import GeneratorBasis, generators, random_orthogonal
from gme.bloch import correlation_tensor

from conftest import biseparable_pure, random_pure


def paper_order_su4():
    """SU(4) generators in the order of the published listing (lambda_1 .. lambda_15)."""
    def sym(a, b):
        m = np.zeros((4, 4), complex); m[a, b] = m[b, a] = 1; return m

    def anti(a, b):
        m = np.zeros((4, 4), complex); m[a, b], m[b, a] = -1j, 1j; return m

    return [sym(0, 1), anti(0, 1), np.diag([1, -1, 0, 0]).astype(complex),
            np.diag([1, 1, -2, 0]) / math.sqrt(3), np.diag([1, 1, 1, -3]) / math.sqrt(6),
            sym(1, 2), sym(0, 2), anti(0, 2), anti(0, 3), anti(1, 3), anti(2, 3), anti(1, 2),
            sym(0, 3), sym(1, 3), sym(2, 3)]


def kyfan_oracle(rho, g, k):
    """Average Ky Fan norm via explicit traces and eigenvalues of M M^T."""
    n = len(g)
    t = np.zeros((n, n, n))
    for i, j, l in itertools.product(range(n), repeat=3):
        t[i, j, l] = np.trace(rho @ linalg.kron_all(g[i], g[j], g[l])).real
    total = 0.0
    for mat in (t.reshape(n, -1), t.transpose(1, 0, 2).reshape(n, -1), t.transpose(2, 0, 1).reshape(n, -1)):
        ev = np.sort(np.clip(np.linalg.eigvalsh(mat @ mat.T), 0, None))[::-1]
        total += np.sqrt(ev[:k]).sum()
    return total / 3


# value frozen from kyfan_oracle: matricization spectra are
# {sqrt7/2 (x3), sqrt3/2} twice and {1/sqrt2 (x9)} once
THM5_M4 = (3 * math.sqrt(7) + math.sqrt(3) + 2 * math.sqrt(2)) / 3


def test_kyfan_examples():
    m = np.diag([3.0, 2.0, 1.0])
    assert crit.kyfan_norm(np.eye(3), 2) == 2
    assert crit.kyfan_norm(m, 2) == pytest.approx(5)
    assert crit.kyfan_norm(m, 3) == pytest.approx(np.abs(np.linalg.svd(m)[1]).sum())
    with pytest.raises(ValueError):
        crit.kyfan_norm(m, 4)
    with pytest.raises(ValueError):
        crit.kyfan_norm(m, 0)


def test_kyfan_monotone_and_concave_in_k(rng):
    m = rng.standard_normal((5, 7))
    vals = np.array([crit.kyfan_norm(m, k) for k in range(1, 6)])
    inc = np.diff(np.concatenate([[0], vals]))
    assert np.all(inc >= 0) and np.all(np.diff(inc) <= 1e-12)


def test_bounds_closed_forms():
    assert crit.theorem2_bound(4, 4) == pytest.approx(2.5 * math.sqrt(2.5), rel=1e-14)
    assert crit.theorem2_bound(4, 4) == pytest.approx(3.95285, abs=1e-5)
    assert crit.theorem2_bound(3, 4) == pytest.approx(3.628874, abs=1e-6)
    assert crit.theorem2_bound(3, 8) == pytest.approx(8 / 9 * math.sqrt(2 / 3) * (1 + 4 * math.sqrt(2)), rel=1e-14)
    assert crit.theorem1_bound(3) == pytest.approx(8 / 3 * math.sqrt(2 / 3))
    assert crit.theorem1_bound(3) == pytest.approx(2.17732, abs=1e-5)
    assert crit.theorem1_bound(4) == pytest.approx(1.5 * math.sqrt(2.5))
    assert crit.theorem3_offset(2) == pytest.approx(0.5 * math.sqrt(1.5))
    assert crit.theorem3_offset(3) == pytest.approx(2 / 3 * math.sqrt(4 / 3))


def test_maximally_mixed_not_detected():
    t = correlation_tensor(states.DensityMatrix.maximally_mixed((3, 3, 3)))
    for r in crit.evaluate(t):
        assert not r.detected
        assert r.value == pytest.approx(0, abs=1e-14)
    assert crit.theorem3(t).concurrence_lower_bound == 0


def test_theorem2_range():
    t = correlation_tensor(states.ghz_state())
    with pytest.raises(ValueError):
        crit.theorem2(t, 4)
    with pytest.raises(ValueError):
        crit.evaluate(t, ["T9"])


def test_thm5_m4_matches_independent_oracle():
    rho = states.product_werner_state(-1, -1, 1)
    oracle = kyfan_oracle(rho.matrix, paper_order_su4(), 4)
    assert oracle == pytest.approx(THM5_M4, abs=1e-12)
    t = correlation_tensor(rho)
    assert crit.theorem2(t, 4).value == pytest.approx(THM5_M4, abs=1e-12)


@pytest.mark.parametrize("p1,p2", [(-1, -0.8), (-0.7, -0.95), (0.3, -1)])
def test_t2_pipeline_matches_oracle_off_diagonal(p1, p2):
    rho = states.product_werner_state(p1, p2, 1)
    t = correlation_tensor(rho)
    assert crit.average_kyfan(t, 4) == pytest.approx(kyfan_oracle(rho.matrix, paper_order_su4(), 4), abs=1e-10)


def test_report_fields():
    t = correlation_tensor(states.ghz_state())
    r = crit.theorem1(t)
    assert r.margin == pytest.approx(2 - math.sqrt(3))
    assert r.detected
    d = r.to_dict()
    assert d["margin"] == r.margin and d["detected"] is True
    r3 = crit.theorem3(t)
    assert r3.concurrence_lower_bound == pytest.approx(1 / math.sqrt(2) - 0.5 * math.sqrt(1.5))


def test_boundary_is_not_a_detection():
    # the qutrit example at x=1 sits exactly on the T1 bound
    t = correlation_tensor(states.qutrit_psi())
    assert abs(crit.theorem1(t).margin) < 1e-12
    assert not crit.theorem1(t).detected
    assert not crit.theorem3(t).detected


def test_ge_concurrence_pure():
    prod = states.DensityMatrix.from_vector(np.kron(np.kron([1, 0], [0, 1]), [1, 1]), (2, 2, 2))
    assert crit.ge_concurrence_pure(prod) == pytest.approx(0, abs=1e-12)
    assert crit.ge_concurrence_pure(states.ghz_state()) == pytest.approx(1 / math.sqrt(2))
    assert crit.ge_concurrence_pure(states.w_state()) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        crit.ge_concurrence_pure(states.ghz_w_mixture(0.5, 0.2))


def test_theorem3_below_pure_concurrence(rng):
    candidates = [states.ghz_state(), states.w_state(), states.qutrit_psi()]
    for d in (2, 3):
        ghz = np.zeros(d**3, complex)
        for i in range(d):
            ghz[i * (d * d + d + 1)] = 1
        for _ in range(30):
            # perturbed GHZ-like states reach the regime where the bound is positive
            v = ghz + rng.uniform(0, 0.6) * linalg.random_pure_vector(d**3, rng)
            candidates.append(states.DensityMatrix.from_vector(v, (d, d, d)))
            candidates.append(random_pure((d, d, d), rng))
    positive = 0
    for rho in candidates:
        r = crit.theorem3(correlation_tensor(rho))
        if r.concurrence_lower_bound > 0:
            positive += 1
            assert crit.ge_concurrence_pure(rho) >= r.concurrence_lower_bound - 1e-8
    assert positive >= 10


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("split", [0, 1, 2])
def test_no_detection_on_biseparable(d, split, rng):
    for _ in range(20):
        t = correlation_tensor(biseparable_pure(d, split, rng))
        for r in crit.evaluate(t):
            assert r.margin <= 1e-9
        assert crit.theorem3(t).concurrence_lower_bound <= 1e-9


@pytest.mark.parametrize("family,build,d", [
    ("thm5", lambda x: states.product_werner_state(-1, -1, x), 4),
    ("ex2", lambda x: states.ghz_w_mixture(x, 0), 2),
    ("ex3", lambda x: states.noisy_qutrit_psi(x), 3),
])
def test_margins_increase_with_signal(family, build, d):
    xs = np.linspace(0, 1, 6)
    ks = [1, 2, 3]
    rows = [[r.margin for r in crit.evaluate(correlation_tensor(build(x)), ks=ks)] for x in xs]
    assert np.all(np.diff(np.array(rows), axis=0) > 0)


def test_basis_independence(rng):
    rho = states.noisy_qutrit_psi(0.9)
    base = crit.evaluate(correlation_tensor(rho))
    b = generators(3)
    reordered = GeneratorBasis(3, b.matrices[rng.permutation(8)])
    mixed = b.mixed(random_orthogonal(8, rng))
    for basis in (reordered, mixed):
        other = crit.evaluate(correlation_tensor(rho, basis))
        for r1, r2 in zip(base, other):
            assert r1.value == pytest.approx(r2.value, abs=1e-8)
