"""Bloch correlation tensors of tripartite qudit states.

For a state on ``C^d (x) C^d (x) C^d`` and generators ``g_i`` of SU(d),

    t1_i = Tr(rho g_i (x) I (x) I),  t12_ij = Tr(rho g_i (x) g_j (x) I),
    t123_ijk = Tr(rho g_i (x) g_j (x) g_k),   etc.

All seven families are obtained from one contraction against the basis
extended by the identity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import GeneratorBasis, generators
from .linalg import ATOL
from .states import DensityMatrix


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    d: int
    t1: np.ndarray
    t2: np.ndarray
    t3: np.ndarray
    t12: np.ndarray
    t13: np.ndarray
    t23: np.ndarray
    t123: np.ndarray

    @property
    def n(self) -> int:
        """Number of generators, ``d**2 - 1``."""
        return self.d * self.d - 1

    def norms(self) -> dict[str, float]:
        return {
            name: float(np.linalg.norm(getattr(self, name)))
            for name in ("t1", "t2", "t3", "t12", "t13", "t23", "t123")
        }

    def swap_parties(self, perm) -> "CorrelationTensor":
        """Tensor of the state with parties reordered (output party i = input party perm[i])."""
        singles = (self.t1, self.t2, self.t3)
        pairs = {(0, 1): self.t12, (0, 2): self.t13, (1, 2): self.t23}

        def pair(a, b):
            return pairs[(a, b)] if a < b else pairs[(b, a)].T

        p = list(perm)
        return CorrelationTensor(
            self.d,
            singles[p[0]], singles[p[1]], singles[p[2]],
            pair(p[0], p[1]), pair(p[0], p[2]), pair(p[1], p[2]),
            self.t123.transpose(p),
        )


def _real(z: np.ndarray, atol: float = ATOL) -> np.ndarray:
    worst = np.abs(z.imag).max(initial=0.0)
    if worst > atol:
        raise ValueError(f"correlation components have imaginary part {worst:.3g}; input not Hermitian?")
    return np.ascontiguousarray(z.real)


def full_correlations(rho: np.ndarray, d: int, ops: np.ndarray) -> np.ndarray:
    """``F_ijk = Tr(rho ops_i (x) ops_j (x) ops_k)`` for a ``d^3 x d^3`` matrix."""
    r = rho.reshape((d,) * 6)
    # contract one party at a time: cost O(m d^6) per stage instead of O(m^3 d^6)
    t = np.einsum("abcxyz,ixa->ibcyz", r, ops, optimize=True)
    t = np.einsum("ibcyz,jyb->ijcz", t, ops, optimize=True)
    return np.einsum("ijcz,kzc->ijk", t, ops, optimize=True)


def correlation_tensor(state: DensityMatrix, basis: GeneratorBasis | None = None) -> CorrelationTensor:
    """All Bloch components of a tripartite state with equal local dimensions.

    States with unequal local dimensions must be embedded first
    (:func:`gme.states.embed`).
    """
    if len(state.dims) != 3 or len(set(state.dims)) != 1:
        raise ValueError(f"need a tripartite state with equal local dims, got {state.dims}")
    d = state.dims[0]
    basis = generators(d) if basis is None else basis
    if basis.d != d:
        raise ValueError(f"basis is for d={basis.d} but state has d={d}")
    ops = np.concatenate([np.eye(d, dtype=complex)[None], basis.matrices])
    f = _real(full_correlations(state.matrix, d, ops))
    return CorrelationTensor(
        d,
        t1=f[1:, 0, 0], t2=f[0, 1:, 0], t3=f[0, 0, 1:],
        t12=f[1:, 1:, 0], t13=f[1:, 0, 1:], t23=f[0, 1:, 1:],
        t123=f[1:, 1:, 1:],
    )


def reconstruct(t: CorrelationTensor, basis: GeneratorBasis | None = None) -> np.ndarray:
    """Rebuild the density matrix from its Bloch components."""
    d = t.d
    basis = generators(d) if basis is None else basis
    g = basis.matrices
    eye = np.eye(d)

    def k3(a, b, c):
        return np.kron(np.kron(a, b), c)

    rho = k3(eye, eye, eye) / d**3
    rho = rho + (
        k3(np.einsum("i,iab->ab", t.t1, g), eye, eye)
        + k3(eye, np.einsum("i,iab->ab", t.t2, g), eye)
        + k3(eye, eye, np.einsum("i,iab->ab", t.t3, g))
    ) / (2 * d * d)
    pair = np.zeros((d**3, d**3), dtype=complex)
    for i in range(len(g)):
        pair += k3(g[i], np.einsum("j,jab->ab", t.t12[i], g), eye)
        pair += k3(g[i], eye, np.einsum("k,kab->ab", t.t13[i], g))
        pair += k3(eye, g[i], np.einsum("k,kab->ab", t.t23[i], g))
    rho = rho + pair / (4 * d)
    three = np.zeros((d**3, d**3), dtype=complex)
    for i in range(len(g)):
        for j in range(len(g)):
            three += k3(g[i], g[j], np.einsum("k,kab->ab", t.t123[i, j], g))
    return rho + three / 8


def matricize(t: CorrelationTensor | np.ndarray, pivot: int) -> np.ndarray:
    """Flatten the three-body tensor with party ``pivot`` (0, 1 or 2) as rows.

    Columns enumerate the two remaining indices in their original order with
    the later one varying fastest: for pivot 0, entry ``[a, n*b + c]`` is
    ``t123[a, b, c]``.
    """
    arr = t.t123 if isinstance(t, CorrelationTensor) else np.asarray(t)
    if pivot not in (0, 1, 2):
        raise ValueError(f"pivot must be 0, 1 or 2, got {pivot}")
    order = [pivot] + [i for i in range(3) if i != pivot]
    n = arr.shape[pivot]
    return arr.transpose(order).reshape(n, -1)


def frobenius_t123(t: CorrelationTensor) -> float:
    return float(np.sqrt(np.sum(t.t123**2)))
