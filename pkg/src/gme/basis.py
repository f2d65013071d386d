"""Generalized Gell-Mann generators of SU(d).

Ordering is the usual one: all symmetric ``E_jk + E_kj`` (j < k, row-major),
then all antisymmetric ``-i(E_jk - E_kj)``, then the ``d - 1`` diagonal
generators ``sqrt(2/(l(l+1))) diag(1, ..., 1, -l, 0, ..., 0)``.
Every generator is normalized to ``Tr(g_k g_l) = 2 delta_kl``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from .linalg import ATOL


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """``d**2 - 1`` traceless Hermitian generators stacked as ``(n, d, d)``.

    ``exact`` is optional metadata: for each generator a pair
    ``(scale_sq, pattern)`` with ``generator = sqrt(scale_sq) * pattern``,
    ``scale_sq`` a Fraction and ``pattern`` a matrix of Gaussian integers.
    It lets :func:`verify_orthogonality` work without round-off. Bases built
    from arbitrary arrays (e.g. after an orthogonal mixing) leave it unset.
    """

    d: int
    matrices: np.ndarray
    exact: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        m = np.array(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[1:] != (self.d, self.d):
            raise ValueError(f"expected generators of shape (n, {self.d}, {self.d}), got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    def __len__(self) -> int:
        return self.matrices.shape[0]

    def __getitem__(self, i):
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def mixed(self, orthogonal: np.ndarray) -> "GeneratorBasis":
        """New basis ``g'_k = sum_l O_kl g_l`` for a real orthogonal ``O``."""
        o = np.asarray(orthogonal, dtype=float)
        return GeneratorBasis(self.d, np.einsum("kl,lab->kab", o, self.matrices))

    def with_identity(self) -> np.ndarray:
        """Generators prefixed by ``sqrt(2/d) I`` so all share the same trace norm."""
        eye = np.eye(self.d, dtype=complex) * math.sqrt(2 / self.d)
        return np.concatenate([eye[None], self.matrices])


def _exact_generators(d: int) -> list[tuple[Fraction, np.ndarray]]:
    sym, anti, diag = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            p = np.zeros((d, d), dtype=complex)
            p[j, k] = p[k, j] = 1
            sym.append((Fraction(1), p))
            p = np.zeros((d, d), dtype=complex)
            p[j, k], p[k, j] = -1j, 1j
            anti.append((Fraction(1), p))
    for l in range(1, d):
        p = np.zeros((d, d), dtype=complex)
        p[np.arange(l), np.arange(l)] = 1
        p[l, l] = -l
        diag.append((Fraction(2, l * (l + 1)), p))
    return sym + anti + diag


@lru_cache(maxsize=None)
def generators(d: int) -> GeneratorBasis:
    """Generalized Gell-Mann basis for SU(d), ``d >= 2``.

    ``generators(2)`` gives (sigma_x, sigma_y, sigma_z); ``generators(3)`` the
    eight Gell-Mann matrices with ``diag(1, 1, -2)/sqrt(3)`` last.
    """
    if int(d) != d or d < 2:
        raise ValueError(f"local dimension must be an integer >= 2, got {d}")
    d = int(d)
    exact = _exact_generators(d)
    mats = np.array([math.sqrt(s) * p for s, p in exact])
    return GeneratorBasis(d, mats, exact=tuple(exact))


def _exact_gram_deviation(exact) -> float:
    worst = 0.0
    n = len(exact)
    for a in range(n):
        sa, pa = exact[a]
        for b in range(a, n):
            sb, pb = exact[b]
            tr = np.einsum("ij,ji->", pa, pb)
            # patterns are Gaussian integers so the trace is exact in floating point
            re, im = int(round(tr.real)), int(round(tr.imag))
            if a == b:
                dev = abs(sa * re - 2) if im == 0 else math.inf
                dev = float(dev)
            else:
                dev = math.sqrt(float(sa * sb)) * math.hypot(re, im)
            worst = max(worst, dev)
    return worst


def verify_orthogonality(basis: GeneratorBasis, atol: float = ATOL) -> tuple[bool, float]:
    """Check ``Tr(g_k g_l) = 2 delta_kl``; returns ``(ok, max deviation)``.

    Uses exact arithmetic when the basis carries exact metadata.
    """
    if basis.exact is not None:
        dev = _exact_gram_deviation(basis.exact)
    else:
        m = basis.matrices
        gram = np.einsum("kab,lba->kl", m, m)
        dev = float(np.abs(gram - 2 * np.eye(len(m))).max())
    return dev < atol, dev


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
