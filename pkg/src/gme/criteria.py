"""Genuine tripartite entanglement tests on correlation tensors.

* ``T1``: Frobenius norm of the three-body tensor against
  ``sqrt(8 (d-1)(d^2-1) / d^3)``.
* ``T2``: average Ky Fan k-norm of the three matricizations against
  ``(2 sqrt2 / 3)(2 sqrt(k) + 1)((d-1)/d) sqrt((d+1)/d)``.
* ``T3``: lower bound on the GME concurrence,
  ``max(|T123| / (2 sqrt2) - ((d-1)/d) sqrt((d+1)/d), 0)``.

All inequalities are strict. A margin within ``DETECT_ATOL`` of zero counts
as zero, so states sitting exactly on a bound are not reported as detected
because of round-off.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
import math
from typing import Iterable

import numpy as np

from . import linalg
from .bloch import CorrelationTensor, frobenius_t123, matricize
from .states import DensityMatrix

CRITERIA = ("T1", "T2", "T3")
DETECT_ATOL = 1e-10


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    d: int
    value: float
    bound: float
    k: int | None = None
    concurrence_lower_bound: float | None = None

    @property
    def margin(self) -> float:
        return self.value - self.bound

    @property
    def detected(self) -> bool:
        return self.margin > DETECT_ATOL

    def to_dict(self) -> dict:
        out = asdict(self)
        out["margin"] = self.margin
        out["detected"] = self.detected
        return out


def kyfan_norm(m: np.ndarray, k: int) -> float:
    """Sum of the ``k`` largest singular values."""
    s = linalg.singular_values(m)
    if not 1 <= k <= len(s):
        raise ValueError(f"Ky Fan order {k} outside 1..{len(s)}")
    return float(np.sum(s[:k]))


def _noise_term(d: int) -> float:
    return (d - 1) / d * math.sqrt((d + 1) / d)


def theorem1_bound(d: int) -> float:
    return math.sqrt(8 * (d - 1) * (d * d - 1) / d**3)


def theorem2_bound(d: int, k: int) -> float:
    return 2 * math.sqrt(2) / 3 * (2 * math.sqrt(k) + 1) * _noise_term(d)


def theorem3_offset(d: int) -> float:
    return _noise_term(d)


def average_kyfan(t: CorrelationTensor, k: int) -> float:
    """Mean Ky Fan k-norm over the three matricizations."""
    return sum(kyfan_norm(matricize(t, p), k) for p in range(3)) / 3


def theorem1(t: CorrelationTensor) -> CriterionReport:
    return CriterionReport("T1", t.d, frobenius_t123(t), theorem1_bound(t.d))


def theorem2(t: CorrelationTensor, k: int) -> CriterionReport:
    if not 1 <= k <= t.n:
        raise ValueError(f"Ky Fan order {k} outside 1..{t.n}")
    return CriterionReport("T2", t.d, average_kyfan(t, k), theorem2_bound(t.d, k), k=k)


def theorem2_all(t: CorrelationTensor, ks: Iterable[int] | None = None) -> list[CriterionReport]:
    """Per-k reports; the state counts as detected if any of them is."""
    ks = range(1, t.n + 1) if ks is None else ks
    # matricization spectra are shared across k
    spectra = [linalg.singular_values(matricize(t, p)) for p in range(3)]
    out = []
    for k in ks:
        if not 1 <= k <= t.n:
            raise ValueError(f"Ky Fan order {k} outside 1..{t.n}")
        value = sum(float(np.sum(s[:k])) for s in spectra) / 3
        out.append(CriterionReport("T2", t.d, value, theorem2_bound(t.d, k), k=k))
    return out


def theorem3(t: CorrelationTensor) -> CriterionReport:
    value = frobenius_t123(t) / (2 * math.sqrt(2))
    offset = theorem3_offset(t.d)
    return CriterionReport("T3", t.d, value, offset, concurrence_lower_bound=max(value - offset, 0.0))


def evaluate(t: CorrelationTensor, criteria: Iterable[str] = CRITERIA, ks: Iterable[int] | None = None) -> list[CriterionReport]:
    reports = []
    for c in criteria:
        if c == "T1":
            reports.append(theorem1(t))
        elif c == "T2":
            reports.extend(theorem2_all(t, ks))
        elif c == "T3":
            reports.append(theorem3(t))
        else:
            raise ValueError(f"unknown criterion {c!r}; expected one of {CRITERIA}")
    return reports


def ge_concurrence_pure(state: DensityMatrix, atol: float = 1e-8) -> float:
    """GME concurrence of a pure tripartite state from its single-party purities."""
    if len(state.dims) != 3:
        raise ValueError("need a tripartite state")
    if state.purity() < 1 - atol:
        raise ValueError("state is mixed; the pure-state formula does not apply")
    lin = min(1 - state.reduced(i).purity() for i in range(3))
    # sqrt would blow round-off of order 1e-16 up to 1e-8
    return math.sqrt(lin) if lin > 1e-12 else 0.0
