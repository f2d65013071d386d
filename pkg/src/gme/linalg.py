"""Dense matrix kernel for multipartite density matrices.

Matrices are plain ``numpy.ndarray`` objects. A subsystem shape is a sequence
of local dimensions, ordered the same way as the Kronecker factors, e.g.
``(2, 2, 4)``. Subsystem indices are 0-based throughout.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

#: structural checks (hermiticity, trace, positivity)
ATOL = 1e-10
#: spectral / entropic comparisons
SPECTRAL_ATOL = 1e-8


def _check_shape(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(x) for x in dims)
    if any(x < 1 for x in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (total, total):
        raise ValueError(f"matrix of shape {m.shape} does not match subsystem dims {dims}")
    return dims


def _subsystems(idx: int | Iterable[int], n: int) -> list[int]:
    out = [idx] if isinstance(idx, (int, np.integer)) else list(idx)
    for i in out:
        if not 0 <= i < n:
            raise ValueError(f"subsystem index {i} out of range for {n} subsystems")
    return sorted(set(int(i) for i in out))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_all(*ms: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1))
    for m in ms:
        out = np.kron(out, m)
    return out


def permute_subsystems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: output factor ``i`` is input factor ``perm[i]``.

    >>> a, b = np.diag([1., 2.]), np.diag([3., 4., 5.])
    >>> np.allclose(permute_subsystems(np.kron(a, b), (2, 3), (1, 0)), np.kron(b, a))
    True
    """
    dims = _check_shape(m, dims)
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} subsystems")
    t = m.reshape(dims + dims)
    t = t.transpose(perm + [p + n for p in perm])
    total = m.shape[0]
    return t.reshape(total, total)


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: int | Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems stay in their original relative order.
    """
    dims = _check_shape(m, dims)
    n = len(dims)
    keep = _subsystems(keep, n)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    t = m.reshape(dims + dims)
    # einsum labels: row index i -> letter i, column index -> letter n+i, traced ones share a letter
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    col = [letters[n + i] if i in keep else letters[i] for i in range(n)]
    out = [letters[i] for i in keep] + [letters[n + i] for i in keep]
    spec = "".join(letters[:n]) + "".join(col) + "->" + "".join(out)
    dk = int(np.prod([dims[i] for i in keep]))
    return np.einsum(spec, t).reshape(dk, dk)


def partial_transpose(m: np.ndarray, dims: Sequence[int], sys: int | Iterable[int]) -> np.ndarray:
    dims = _check_shape(m, dims)
    n = len(dims)
    sys = _subsystems(sys, n)
    axes = list(range(2 * n))
    for i in sys:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    total = m.shape[0]
    return m.reshape(dims + dims).transpose(axes).reshape(total, total)


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values in non-increasing order, ``min(rows, cols)`` of them."""
    m = np.asarray(m)
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def eigvalsh(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(m)


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    return m.shape[0] == m.shape[1] and bool(np.abs(m - m.conj().T).max(initial=0.0) <= atol)


def von_neumann_entropy(m: np.ndarray, atol: float = SPECTRAL_ATOL) -> float:
    """Entropy in nats. Eigenvalues within ``atol`` of zero are treated as 0."""
    if not is_hermitian(m, atol):
        raise ValueError("entropy requires a Hermitian matrix")
    ev = eigvalsh(m)
    if ev[0] < -atol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {ev[0]:.3g})")
    ev = ev[ev > atol]
    return float(-np.sum(ev * np.log(ev)))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state from the Hilbert-Schmidt (Ginibre) ensemble."""
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
