"""Parameter sweeps, threshold bisection and reproduction runs.

Every margin here comes from the full pipeline: build the density matrix,
compute its correlation tensor, then evaluate the criteria. No closed forms.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
import csv
import io
import itertools
import json
import math
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import criteria as crit
from .bloch import correlation_tensor
from .states import DensityMatrix, ghz_w_mixture, noisy_qutrit_psi, product_werner_state


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[str, ...]
    defaults: dict
    ranges: dict
    build: Callable[..., DensityMatrix]
    feasible: Callable[..., bool] = lambda **kw: True

    def state(self, **params) -> DensityMatrix:
        full = self.resolve(params)
        if not self.feasible(**full):
            raise ValueError(f"{self.name}: infeasible parameters {full}")
        return self.build(**full)

    def resolve(self, params: dict) -> dict:
        unknown = set(params) - set(self.params)
        if unknown:
            raise ValueError(f"{self.name}: unknown parameters {sorted(unknown)}; expected {self.params}")
        full = {**self.defaults, **{k: float(v) for k, v in params.items()}}
        for k, v in full.items():
            lo, hi = self.ranges[k]
            if not lo <= v <= hi:
                raise ValueError(f"{self.name}: {k}={v} outside [{lo}, {hi}]")
        return full


FAMILIES: dict[str, Family] = {
    "thm5": Family(
        "thm5", ("p1", "p2", "x"), {"p1": -1.0, "p2": -1.0, "x": 1.0},
        {"p1": (-1, 1), "p2": (-1, 1), "x": (0, 1)},
        lambda p1, p2, x: product_werner_state(p1, p2, x),
    ),
    "ex2": Family(
        "ex2", ("x", "y"), {"x": 0.0, "y": 0.0}, {"x": (0, 1), "y": (0, 1)},
        lambda x, y: ghz_w_mixture(x, y),
        feasible=lambda x, y: x + y <= 1 + 1e-12,
    ),
    "ex3": Family("ex3", ("x",), {"x": 1.0}, {"x": (0, 1)}, lambda x: noisy_qutrit_psi(x)),
}


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None


def column_names(criteria: Sequence[str], k_values: Sequence[int]) -> list[str]:
    cols = []
    for c in criteria:
        if c == "T2":
            cols += [f"T2_k{k}" for k in k_values]
        elif c == "T3":
            cols += ["T3", "T3_lb"]
        else:
            cols.append(c)
    return cols


def evaluate_point(family: str | Family, params: dict, criteria=crit.CRITERIA, k_values=(4,)) -> dict[str, float]:
    """Criterion margins (and the T3 concurrence bound) at one parameter point."""
    fam = get_family(family) if isinstance(family, str) else family
    t = correlation_tensor(fam.state(**params))
    out = {}
    for r in crit.evaluate(t, criteria, k_values if "T2" in criteria else None):
        if r.criterion == "T2":
            out[f"T2_k{r.k}"] = r.margin
        elif r.criterion == "T3":
            out["T3"] = r.margin
            out["T3_lb"] = r.concurrence_lower_bound
        else:
            out[r.criterion] = r.margin
    return out


def margin(family: str, criterion: str, params: dict, k: int | None = None) -> float:
    ks = (k,) if criterion == "T2" else ()
    col = f"T2_k{k}" if criterion == "T2" else criterion
    return evaluate_point(family, params, (criterion,), ks)[col]


# --- sweeps --------------------------------------------------------------

@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass
class SweepConfig:
    family: str
    axes: list[Axis]
    criteria: list[str] = field(default_factory=lambda: list(crit.CRITERIA))
    k_values: list[int] = field(default_factory=lambda: [4])
    fixed: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        fam = get_family(self.family)
        self.axes = [a if isinstance(a, Axis) else Axis(**a) for a in self.axes]
        if not self.axes:
            raise ValueError("sweep needs at least one axis")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("duplicate axis names")
        for a in self.axes:
            if a.name not in fam.params:
                raise ValueError(f"{self.family} has no parameter {a.name!r}")
            if not a.lo < a.hi or a.steps < 2:
                raise ValueError(f"axis {a.name}: need lo < hi and steps >= 2")
            lo, hi = fam.ranges[a.name]
            if a.lo < lo or a.hi > hi:
                raise ValueError(f"axis {a.name}: [{a.lo}, {a.hi}] outside [{lo}, {hi}]")
        fam.resolve(self.fixed)
        for c in self.criteria:
            if c not in crit.CRITERIA:
                raise ValueError(f"unknown criterion {c!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        data = dict(data)
        out = data.pop("output", None)
        if isinstance(out, dict):
            data["output"] = out.get("path")
            data["format"] = out.get("format", data.get("format", "csv"))
        else:
            data["output"] = out
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class SweepResult:
    axis_names: list[str]
    columns: list[str]
    points: np.ndarray
    values: np.ndarray

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.axis_names + self.columns)
        for p, v in zip(self.points, self.values):
            w.writerow([f"{x:.9g}" for x in p] + ["" if math.isnan(x) else f"{x:.9g}" for x in v])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_json(self, path=None) -> str:
        rows = [
            {**dict(zip(self.axis_names, map(float, p))),
             **{c: (None if math.isnan(x) else float(x)) for c, x in zip(self.columns, v)}}
            for p, v in zip(self.points, self.values)
        ]
        text = json.dumps({"axes": self.axis_names, "columns": self.columns, "rows": rows}, indent=1)
        if path is not None:
            Path(path).write_text(text)
        return text

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.columns.index(name)]


def sweep(config: SweepConfig) -> SweepResult:
    """Evaluate criteria on the Cartesian grid of the config axes (row-major).

    Grid points outside a family's feasible region get NaN margins.
    """
    fam = get_family(config.family)
    cols = column_names(config.criteria, config.k_values)
    names = [a.name for a in config.axes]
    pts, vals = [], []
    for combo in itertools.product(*(a.values() for a in config.axes)):
        params = {**config.fixed, **dict(zip(names, combo))}
        if fam.feasible(**fam.resolve(params)):
            res = evaluate_point(fam, params, config.criteria, config.k_values)
            vals.append([res[c] for c in cols])
        else:
            vals.append([math.nan] * len(cols))
        pts.append(combo)
    result = SweepResult(names, cols, np.array(pts, dtype=float), np.array(vals, dtype=float))
    if config.output:
        (result.to_csv if config.format == "csv" else result.to_json)(config.output)
    return result


# --- thresholds ----------------------------------------------------------

@dataclass(frozen=True)
class ThresholdResult:
    parameter: str
    threshold: float
    criterion: str
    k: int | None
    bracket_width: float
    residual_margin: float


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-7) -> tuple[float, float]:
    """Sign-change bisection; returns ``(midpoint, final bracket width)``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, 0.0
    if fhi == 0:
        return hi, 0.0
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}] (f={flo:.6g}, {fhi:.6g})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid, 0.0
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi), hi - lo


def find_threshold(family: str, criterion: str, parameter: str, lo: float, hi: float,
                   fixed: dict | None = None, k: int | None = None, tol: float = 1e-7) -> ThresholdResult:
    """Locate where the criterion margin crosses zero along one parameter."""
    fixed = dict(fixed or {})
    if criterion == "T2" and k is None:
        k = 4

    def f(v):
        return margin(family, criterion, {**fixed, parameter: v}, k)

    thr, width = bisect(f, lo, hi, tol)
    return ThresholdResult(parameter, thr, criterion, k if criterion == "T2" else None, width, f(thr))


@dataclass
class BoundaryResult:
    criterion: str
    k: int | None
    x: float
    points: list[tuple[float, float]]
    p1_extreme: float
    p2_extreme: float
    diagonal: float


def boundary_curve(criterion: str = "T2", k: int | None = 4, x: float = 1.0,
                   p1_values: Sequence[float] | None = None, tol: float = 1e-7,
                   p_max: float = -0.5) -> BoundaryResult:
    """Zero set of the margin in the (p1, p2) plane of the Werner-product family.

    Detection is strongest at p1 = p2 = -1, so for each p1 with a positive
    margin at p2 = -1 the boundary p2 is bisected on [-1, p_max]. Also returns
    the extreme p1 (at p2 = -1), extreme p2 (at p1 = -1) and the diagonal
    crossing p1 = p2.
    """
    k = k if criterion == "T2" else None

    def m(p1, p2):
        return margin("thm5", criterion, {"p1": p1, "p2": p2, "x": x}, k)

    if m(-1.0, -1.0) <= 0:
        raise ValueError(f"{criterion} detects nothing at x={x}")
    p1_ext, _ = bisect(lambda p: m(p, -1.0), -1.0, p_max, tol)
    p2_ext, _ = bisect(lambda p: m(-1.0, p), -1.0, p_max, tol)
    diag, _ = bisect(lambda p: m(p, p), -1.0, p_max, tol)
    if p1_values is None:
        p1_values = np.linspace(-1.0, p1_ext, 21)
    pts = []
    for p1 in p1_values:
        if m(p1, -1.0) <= 0:
            continue
        p2, _ = bisect(lambda p: m(p1, p), -1.0, p_max, tol)
        pts.append((float(p1), float(p2)))
    return BoundaryResult(criterion, k, x, pts, p1_ext, p2_ext, diag)


def boundary_to_csv(b: BoundaryResult, path=None) -> str:
    lines = ["p1,p2"] + [f"{p1:.9g},{p2:.9g}" for p1, p2 in b.points]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
