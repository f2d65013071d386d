"""Command line interface: ``gme <subcommand> ...``.

Exit codes: 0 success, 1 reproduction mismatch, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import criteria as crit
from . import states
from .basis import generators, verify_orthogonality
from .bloch import correlation_tensor, frobenius_t123, matricize
from .reproduce import TARGETS, reproduce
from .sweep import FAMILIES, SweepConfig, find_threshold, sweep

STATE_FAMILIES = ("werner", "ghz", "w", "qutrit-psi", "beta", "cs", "thm5", "ex2", "ex3")


class UsageError(Exception):
    pass


def parse_params(text: str | None) -> dict:
    """``"p=-1,d=2"`` -> ``{"p": -1.0, "d": 2.0}``; ``lam=max`` is kept as a string."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"bad parameter {item!r}, expected key=value")
        val = val.strip()
        try:
            out[key.strip()] = float(val)
        except ValueError:
            out[key.strip()] = val
    return out


def build_state(family: str, params: dict) -> states.DensityMatrix:
    p = dict(params)

    def take(name, default):
        return p.pop(name, default)

    if family == "werner":
        rho = states.werner(float(take("p", -1.0)), int(take("d", 2)))
    elif family == "ghz":
        rho = states.ghz_state()
    elif family == "w":
        rho = states.w_state()
    elif family == "qutrit-psi":
        rho = states.qutrit_psi()
    elif family == "beta":
        rho = states.beta_state()
    elif family == "cs":
        lambdas = [float(take(f"l{i}", 1.0)) for i in range(7)]
        lam = take("lam", 0.0)
        if lam == "max":
            lam = states.cs_max_lambda(lambdas)
        rho = states.cs_state(lambdas, float(lam))
    elif family in FAMILIES:
        rho = FAMILIES[family].state(**p)
        p = {}
    else:
        raise UsageError(f"unknown family {family!r}; expected one of {STATE_FAMILIES}")
    if p:
        raise UsageError(f"unused parameters for {family}: {sorted(p)}")
    return rho


def _complex_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def cmd_basis(args) -> int:
    b = generators(args.d)
    out = {"d": b.d, "count": len(b), "generators": [_complex_json(g) for g in b]}
    if args.check:
        ok, dev = verify_orthogonality(b)
        out["orthogonal"] = ok
        out["max_deviation"] = dev
    print(json.dumps(out))
    return 0


def cmd_state(args) -> int:
    rho = build_state(args.family, parse_params(args.params))
    n = len(rho.dims)
    cuts = [[0]] if n == 2 else [[i] for i in range(n)]
    ppt = {}
    for cut in cuts:
        res = states.is_ppt(rho, cut)
        ppt["|".join(map(str, cut))] = {"ppt": res.ppt, "min_eigenvalue": res.min_eigenvalue}
    print(json.dumps({
        "family": args.family,
        "dims": list(rho.dims),
        "rank": rho.rank(),
        "ppt": ppt,
        "matrix": _complex_json(rho.matrix),
    }))
    return 0


def _tripartite_tensor(args):
    rho = build_state(args.family, parse_params(args.params))
    if len(rho.dims) != 3:
        raise UsageError(f"{args.family} is not a tripartite family")
    return correlation_tensor(rho)


def cmd_bloch(args) -> int:
    t = _tripartite_tensor(args)
    if args.emit == "norms":
        out = {"d": t.d, **t.norms(), "trace_norms": [float(np.sum(np.linalg.svd(matricize(t, p), compute_uv=False)))
                                                      for p in range(3)]}
    else:
        out = {"d": t.d, **{k: getattr(t, k).tolist() for k in ("t1", "t2", "t3", "t12", "t13", "t23", "t123")}}
    print(json.dumps(out))
    return 0


def cmd_criteria(args) -> int:
    t = _tripartite_tensor(args)
    ks = [int(k) for k in args.k.split(",")] if args.k else None
    reports = crit.evaluate(t, crit.CRITERIA, ks)
    print(json.dumps([r.to_dict() for r in reports]))
    return 0


def cmd_sweep(args) -> int:
    try:
        config = SweepConfig.from_json(args.config)
    except (OSError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read sweep config: {exc}") from exc
    res = sweep(config)
    if not config.output:
        sys.stdout.write(res.to_csv() if config.format == "csv" else res.to_json() + "\n")
    return 0


def cmd_threshold(args) -> int:
    r = find_threshold(args.family, args.criterion, args.param, args.lo, args.hi,
                       parse_params(args.params), k=args.k, tol=args.tol)
    print(json.dumps(r.__dict__))
    return 0


def cmd_reproduce(args) -> int:
    reports = reproduce(args.target, args.out, steps=args.steps)
    if args.json:
        print(json.dumps([r.to_dict() for r in reports], indent=1))
    else:
        for r in reports:
            print(r.text())
    return 0 if all(r.ok for r in reports) else 1


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gme", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="print SU(d) generators as JSON")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--check", action="store_true", help="include the orthogonality verdict")
    p.set_defaults(func=cmd_basis)

    def family_args(p, choices):
        p.add_argument("--family", required=True, choices=choices)
        p.add_argument("--params", default="", help="comma separated key=value pairs")

    p = sub.add_parser("state", help="print a density matrix with metadata")
    family_args(p, STATE_FAMILIES)
    p.set_defaults(func=cmd_state)

    tri = ("ghz", "w", "qutrit-psi", "thm5", "ex2", "ex3")
    p = sub.add_parser("bloch", help="correlation tensor components or norms")
    family_args(p, tri)
    p.add_argument("--emit", choices=("components", "norms"), default="norms")
    p.set_defaults(func=cmd_bloch)

    p = sub.add_parser("criteria", help="evaluate T1, T2, T3")
    family_args(p, tri)
    p.add_argument("--k", default="", help="comma separated Ky Fan orders (default all)")
    p.set_defaults(func=cmd_criteria)

    p = sub.add_parser("sweep", help="grid sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", help="bisect for the zero of a criterion margin")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--criterion", required=True, choices=crit.CRITERIA)
    p.add_argument("--param", required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--params", default="", help="fixed parameters, key=value pairs")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("reproduce", help="recompute published numbers")
    p.add_argument("target", choices=TARGETS + ("all",))
    p.add_argument("--out", default=None, help="directory for CSV plot data")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"gme {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
