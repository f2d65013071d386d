"""Density matrices used in the tripartite entanglement experiments."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import linalg
from .linalg import ATOL

#: refuse to build states whose total dimension exceeds this
MAX_DIM = 4096


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dims = tuple(int(x) for x in self.dims)
        linalg._check_shape(m, dims)
        if not linalg.is_hermitian(m, ATOL):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1) > ATOL:
            raise ValueError(f"density matrix has trace {tr}")
        lo = linalg.eigvalsh(m)[0]
        if lo < -ATOL:
            raise ValueError(f"density matrix is not positive semidefinite (min eigenvalue {lo:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def rank(self, atol: float = ATOL) -> int:
        return int(np.sum(linalg.eigvalsh(self.matrix) > atol))

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.matrix, self.matrix).real)

    def reduced(self, keep) -> "DensityMatrix":
        keep = linalg._subsystems(keep, len(self.dims))
        m = linalg.partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(m, tuple(self.dims[i] for i in keep))

    def entropy(self) -> float:
        return linalg.von_neumann_entropy(self.matrix)

    @classmethod
    def from_vector(cls, psi: np.ndarray, dims: Sequence[int]) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), tuple(dims))

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityMatrix":
        n = int(np.prod(dims))
        return cls(np.eye(n) / n, tuple(dims))


def swap_operator(d: int) -> np.ndarray:
    """``sum_ij |i,j><j,i|`` on C^d (x) C^d."""
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1
    return s


def werner(p: float, d: int = 2) -> DensityMatrix:
    """Werner state ``(I + p SWAP) / (d^2 + p d)`` for ``p`` in [-1, 1].

    Separable for ``p >= -1/d``, NPT below.
    """
    if not -1 <= p <= 1:
        raise ValueError(f"Werner parameter must lie in [-1, 1], got {p}")
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    m = (np.eye(d * d) + p * swap_operator(d)) / (d * d + p * d)
    return DensityMatrix(m, (d, d))


def _basis_vector(digits: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    v = np.zeros(int(np.prod(dims)))
    v[np.ravel_multi_index(tuple(digits), tuple(dims))] = 1
    return v


def _superpose(terms, dims) -> np.ndarray:
    return sum(_basis_vector(t, dims) for t in terms)


def ghz_vector() -> np.ndarray:
    return _superpose([(0, 0, 0), (1, 1, 1)], (2, 2, 2)) / np.sqrt(2)


def w_vector() -> np.ndarray:
    return _superpose([(0, 0, 1), (0, 1, 0), (1, 0, 0)], (2, 2, 2)) / np.sqrt(3)


def qutrit_psi_vector() -> np.ndarray:
    return _superpose([(0, 1, 2), (0, 2, 1), (1, 1, 1)], (3, 3, 3)) / np.sqrt(3)


def ghz_state() -> DensityMatrix:
    return DensityMatrix.from_vector(ghz_vector(), (2, 2, 2))


def w_state() -> DensityMatrix:
    return DensityMatrix.from_vector(w_vector(), (2, 2, 2))


def qutrit_psi() -> DensityMatrix:
    """Projector onto ``(|012> + |021> + |111>)/sqrt(3)``."""
    return DensityMatrix.from_vector(qutrit_psi_vector(), (3, 3, 3))


# --- completely symmetric 4x4 family --------------------------------------

CS_LOCAL_VECTORS = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 1, 1, 1],
        [1, 2, 3, 4],
        [1, -2, 3, -4],
    ],
    dtype=complex,
)


def cs_product_vectors() -> np.ndarray:
    """The seven symmetric product vectors ``|x_i, x_i>`` (unnormalized), as rows."""
    return np.array([np.kron(x, x) for x in CS_LOCAL_VECTORS])


#: the eighth real point where the span of the seven |x_i, x_i> meets the
#: symmetric product vectors; found by solving the three defining quadrics
CS_EIGHTH_VECTOR = np.array([3, -8, 3, -8], dtype=complex)


def cs_default_phi7() -> np.ndarray:
    """Default subtracted vector ``|x7, x7>`` (normalized), with x7 = CS_EIGHTH_VECTOR.

    It lies in the span of the seven product vectors, and being real its
    projector is invariant under partial transpose, so every PSD member of
    the family is also PPT.
    """
    v = np.kron(CS_EIGHTH_VECTOR, CS_EIGHTH_VECTOR)
    return v / np.linalg.norm(v)


def _cs_unnormalized(lambdas, lam, phi7) -> np.ndarray:
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.shape != (7,) or np.any(lambdas <= 0):
        raise ValueError("cs_state needs seven positive weights")
    if lam < 0:
        raise ValueError("lam must be non-negative")
    vecs = cs_product_vectors()
    m = np.einsum("i,ia,ib->ab", lambdas, vecs, vecs.conj())
    phi7 = cs_default_phi7() if phi7 is None else np.asarray(phi7, dtype=complex)
    return m - lam * np.outer(phi7, phi7.conj())


def cs_max_lambda(lambdas=None, phi7=None) -> float:
    """Largest ``lam`` for which the completely symmetric operator stays PSD.

    With ``phi7`` in the span of the product vectors this is
    ``1 / <phi7| A^+ |phi7>`` where ``A`` is the positive part; at this value
    the rank drops from seven to six.
    """
    lambdas = np.ones(7) if lambdas is None else lambdas
    a = _cs_unnormalized(lambdas, 0.0, phi7)
    phi7 = cs_default_phi7() if phi7 is None else np.asarray(phi7, dtype=complex)
    pinv = np.linalg.pinv(a, rcond=1e-12, hermitian=True)
    resid = phi7 - a @ (pinv @ phi7)
    if np.linalg.norm(resid) > 1e-9:
        return 0.0  # outside the range, any positive lam breaks positivity
    return float(1 / np.real(phi7.conj() @ pinv @ phi7))


def cs_state(lambdas=None, lam: float = 0.0, phi7=None) -> DensityMatrix:
    """``sum_i lambdas_i |x_i x_i><x_i x_i| - lam |phi7><phi7|``, trace-normalized.

    Raises ValueError when ``lam`` makes the operator non-positive.
    """
    lambdas = np.ones(7) if lambdas is None else lambdas
    m = _cs_unnormalized(lambdas, lam, phi7)
    lo = linalg.eigvalsh(m)[0]
    if lo < -ATOL * max(1.0, np.abs(m).max()):
        raise ValueError(f"cs_state is not PSD for lam={lam} (min eigenvalue {lo:.3g})")
    return DensityMatrix(m / np.trace(m).real, (4, 4))


def beta_state() -> DensityMatrix:
    """The rank-ten 4x4 PPT state built from two GHZ-like vectors and eight product terms."""
    dims = (4, 4)
    v1 = _superpose([(0, 0), (1, 1), (2, 2)], dims)
    v2 = _superpose([(0, 1), (1, 0), (3, 3)], dims)
    m = np.outer(v1, v1) + np.outer(v2, v2)
    for t in [(1, 2), (1, 3), (3, 0), (2, 1), (0, 2), (2, 0), (0, 3), (3, 1)]:
        e = _basis_vector(t, dims)
        m = m + np.outer(e, e)
    return DensityMatrix(m / np.trace(m), dims)


# --- combinations -----------------------------------------------------------

def noisy_mix(cores: Sequence[DensityMatrix] | DensityMatrix, weights, noise_weight: float) -> DensityMatrix:
    """``noise_weight * I/D + sum_i weights_i * cores_i``.

    Weights must be non-negative and sum to one together with ``noise_weight``.
    """
    if isinstance(cores, DensityMatrix):
        cores = [cores]
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if len(cores) == 0 or len(weights) != len(cores):
        raise ValueError("need one weight per component state")
    if np.any(weights < 0) or noise_weight < 0:
        raise ValueError("mixing weights must be non-negative")
    if abs(weights.sum() + noise_weight - 1) > 1e-12:
        raise ValueError(f"mixing weights sum to {weights.sum() + noise_weight}, not 1")
    dims = cores[0].dims
    if any(c.dims != dims for c in cores):
        raise ValueError("all component states must share one subsystem shape")
    n = cores[0].dim
    m = noise_weight * np.eye(n) / n
    for w, c in zip(weights, cores):
        m = m + w * c.matrix
    return DensityMatrix(m, dims)


def tensor_and_regroup(alpha: DensityMatrix, beta: DensityMatrix, max_dim: int = MAX_DIM) -> DensityMatrix:
    """Build ``alpha_{A C1} (x) beta_{B C2}`` as a tripartite state on ``A|B|C``.

    Factors are reordered from (A, C1, B, C2) to (A, B, C1, C2) and C1, C2
    merged into one subsystem C with index ``c1 * dim(C2) + c2``.
    """
    if len(alpha.dims) != 2 or len(beta.dims) != 2:
        raise ValueError("tensor_and_regroup expects two bipartite states")
    (da, dc1), (db, dc2) = alpha.dims, beta.dims
    total = alpha.dim * beta.dim
    if total > max_dim:
        raise ValueError(f"total dimension {total} exceeds cap {max_dim}")
    m = linalg.permute_subsystems(np.kron(alpha.matrix, beta.matrix), (da, dc1, db, dc2), (0, 2, 1, 3))
    return DensityMatrix(m, (da, db, dc1 * dc2))


def embedding_isometry(d_from: int, d_to: int) -> np.ndarray:
    """``d_to x d_from`` matrix sending ``|i>`` to ``|i>``."""
    if d_to < d_from:
        raise ValueError(f"cannot embed dimension {d_from} into {d_to}")
    return np.eye(d_to, d_from)


def embed(state: DensityMatrix, target_dims: Sequence[int]) -> DensityMatrix:
    """Zero-pad every subsystem up to ``target_dims``."""
    target_dims = tuple(int(x) for x in target_dims)
    if len(target_dims) != len(state.dims):
        raise ValueError("target_dims must have one entry per subsystem")
    v = linalg.kron_all(*(embedding_isometry(a, b) for a, b in zip(state.dims, target_dims)))
    return DensityMatrix(v @ state.matrix @ v.T, target_dims)


def is_werner_invariant(state: DensityMatrix, trials: int = 5, seed: int = 0, atol: float = 1e-9) -> bool:
    """Spot-check ``U (x) U`` invariance with a few Haar-random unitaries."""
    d = state.dims[0]
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        u = linalg.haar_unitary(d, rng)
        uu = np.kron(u, u)
        if np.abs(uu @ state.matrix @ uu.conj().T - state.matrix).max() > atol:
            return False
    return True


def werner_project(state: DensityMatrix, check: bool = True) -> DensityMatrix:
    """Compress a ``d x d`` Werner state onto the first two levels of each side.

    The result is the two-qubit Werner state with the same ``p``. With
    ``check=True`` the input is first tested for ``U (x) U`` invariance.
    """
    if len(state.dims) != 2 or state.dims[0] != state.dims[1] or state.dims[0] < 2:
        raise ValueError("werner_project expects a d x d state with d >= 2")
    if check and not is_werner_invariant(state):
        raise ValueError("input is not U (x) U invariant, so not a Werner state")
    d = state.dims[0]
    q = embedding_isometry(2, d).T
    qq = np.kron(q, q)
    m = qq @ state.matrix @ qq.T
    tr = np.trace(m).real
    if tr <= ATOL:
        raise ValueError("projection has zero trace")
    return DensityMatrix(m / tr, (2, 2))


class PPTResult(NamedTuple):
    ppt: bool
    min_eigenvalue: float


def is_ppt(state: DensityMatrix, cut=(0,), atol: float = ATOL) -> PPTResult:
    """Partial-transpose test across the bipartition ``cut | rest``."""
    pt = linalg.partial_transpose(state.matrix, state.dims, cut)
    lo = float(linalg.eigvalsh(pt)[0])
    return PPTResult(lo >= -atol, lo)


# --- tripartite families -------------------------------------------------

def product_werner_state(p1: float, p2: float, x: float = 1.0, embedded: bool = True) -> DensityMatrix:
    """``(1-x) I/16 + x rho_w(p1,2)_{AC1} (x) rho_w(p2,2)_{BC2}`` on A|B|C.

    Built on (2, 2, 4) and, when ``embedded``, zero-padded to (4, 4, 4) so a
    single SU(4) basis applies to every party.
    """
    core = tensor_and_regroup(werner(p1, 2), werner(p2, 2))
    rho = noisy_mix(core, [x], 1 - x)
    return embed(rho, (4, 4, 4)) if embedded else rho


def ghz_w_mixture(x: float, y: float) -> DensityMatrix:
    """``(1-x-y) I/8 + x |GHZ><GHZ| + y |W><W|``; needs ``x + y <= 1``."""
    noise = 1 - x - y
    if -1e-12 < noise < 0:
        noise = 0.0  # round-off on the x + y = 1 edge
    return noisy_mix([ghz_state(), w_state()], [x, y], noise)


def noisy_qutrit_psi(x: float) -> DensityMatrix:
    return noisy_mix(qutrit_psi(), [x], 1 - x)
