"""Command-line front end: ``bitension <command> [options]``.

Exit status: 0 when every check passes, 2 when a verification fails (the
report is still written), 1 on usage or I/O errors.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import closed_form as cf
from .classify import (DEFAULT_TOL, NUMERIC_RTOL, TANGENTIAL_RTOL, classify, cross_check_scale,
                       find_loci, sign_changes, sweep)
from .errors import BiharmonicError, CrossCheckError
from .immersions import ProductImmersion
from .numeric import DerivativeConfig, bitension_numeric
from .quadric import QuadricSpec
from .report import SCHEMA, check, dumps, quantity, sweep_csv
from .verify import DEFAULT_SEED, make_rng, verify_composition, verify_theorem1, verify_theorem2

COMMANDS = ("verify-theorem1", "verify-theorem2", "verify-composition", "classify", "sweep", "bitension")
TOL_ENV = "BITENSION_TOL"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int
    q: int = 0
    c: float = 1.0
    d: float = 1.0
    a: Optional[float] = None
    b: Optional[float] = None
    t: Optional[float] = None
    locus: Optional[str] = None
    inner: Optional[str] = None
    inner2: Optional[str] = None
    derivatives: DerivativeConfig = field(default_factory=DerivativeConfig)
    output: str = "json"
    out: Optional[str] = None
    seed: int = DEFAULT_SEED
    samples: int = 64
    points: int = 20
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output not in ("json", "csv"):
            raise UsageError("--output must be json or csv")
        if self.output == "csv" and self.command != "sweep":
            raise UsageError("csv output is only available for sweep")
        if self.command == "verify-theorem1" and self.q < 1:
            raise UsageError("verify-theorem1 needs --q >= 1")
        if self.command == "verify-theorem2" and self.q != 0:
            raise UsageError("verify-theorem2 is for hyperspheres; omit --q or pass --q 0")
        if self.command == "verify-composition" and not self.inner:
            raise UsageError("verify-composition needs --inner")
        if self.command in ("classify", "bitension"):
            given = sum(x is not None for x in (self.a, self.t, self.locus))
            if given != 1:
                raise UsageError("give exactly one of --a/--b, --t or --locus")
            if self.a is not None and self.b is None:
                raise UsageError("--a needs --b")
        if self.points < 1 or self.samples < 1:
            raise UsageError("--points and --samples must be positive")

    def radii(self):
        """(a, b) selected by --a/--b, --t or --locus."""
        if self.a is not None:
            return self.a, self.b
        if self.t is not None:
            return self.c * math.cos(self.t), self.d * math.sin(self.t)
        if self.locus == "minimal":
            if self.q == 0:
                return self.c, 0.0
            r = cf.minimality_radii(self.p, self.q, self.c, self.d)
        else:
            r = cf.biharmonic_radii(self.p, self.q, self.c, self.d)
        return r.a, r.b

    def describe(self) -> dict:
        h = self.derivatives
        out = {"command": self.command, "p": quantity(self.p, "quadric"), "q": quantity(self.q, "quadric"),
               "c": quantity(self.c, "quadric"), "d": quantity(self.d, "quadric")}
        for key in ("a", "b", "t"):
            val = getattr(self, key)
            if val is not None:
                out[key] = quantity(val, "constraint" if key != "t" else "t")
        for key in ("locus", "inner", "inner2"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        out["scheme"] = h.scheme
        out["h1"] = quantity(h.h1, "step")
        out["h2"] = quantity(h.h2, "step")
        out["seed"] = quantity(self.seed, "seed")
        out["points"] = quantity(self.points, "count")
        out["tolerance"] = quantity(self.tol, "tolerance")
        return out


def _classify(cfg: RunConfig):
    a, b = cfg.radii()
    res = classify(cfg.p, cfg.q, cfg.c, cfg.d, a, b, cfg.tol, cfg.derivatives)
    checks = [check("numeric evidence agrees with the verdict", res.numeric_consistent,
                    res.residuals["normal_bitension_error"], NUMERIC_RTOL * res.residuals["cross_check_scale"],
                    "normal_bitension")]
    refs = {"tau": "tau", "delta_tau": "delta_tau", "tau2": "tau2", "tangential": "tangential",
            "normal_bitension_numeric": "normal_bitension", "normal_bitension_error": "normal_bitension",
            "cross_check_scale": "normal_bitension"}
    results = {
        "a": quantity(a, "constraint"),
        "b": quantity(b, "constraint"),
        "verdict": res.verdict,
        "lambda": quantity(res.lambda_, "lambda"),
        "normal_bitension": quantity(res.normal_bitension, "normal_bitension"),
        "residuals": {k: quantity(v, refs[k]) for k, v in res.residuals.items()},
    }
    return checks, results


def _bitension(cfg: RunConfig):
    a, b = cfg.radii()
    spec = QuadricSpec(cfg.p, cfg.q, cfg.c, cfg.d)
    imm = ProductImmersion(spec, a, b)
    exact = cf.torus_scalars(cfg.p, cfg.q, cfg.c, cfg.d, imm.a, imm.b)
    scale = cross_check_scale(cfg.p, cfg.q, cfg.c, cfg.d, imm.a, imm.b)
    rng = make_rng(cfg.seed)
    pts = [imm.base_point()] + [imm.random_point(rng) for _ in range(cfg.points - 1)]
    samples, worst_nb, worst_tan, worst_tau = [], 0.0, 0.0, 0.0
    for pt in pts:
        rep = bitension_numeric(imm, pt, cfg.derivatives)
        n = rep.norms()
        err = abs(rep.normal_component - exact.normal_bitension)
        worst_nb = max(worst_nb, err / scale if scale > 0 else err)
        worst_tan = max(worst_tan, rep.tangential_residual / (1.0 + n["tau2"]))
        worst_tau = max(worst_tau, n["tau"])
        samples.append({
            "point": quantity(pt, "quadric"),
            "tau_norm": quantity(n["tau"], "tau"),
            "lambda_numeric": quantity(rep.tension.lambda_est, "lambda"),
            "mu_numeric": quantity(rep.mu_est, "mu"),
            "delta_tau_norm": quantity(n["delta_tau"], "delta_tau"),
            "curvature_term_norm": quantity(float(np.linalg.norm(rep.curvature_term)), "curvature_term"),
            "tau2_norm": quantity(n["tau2"], "tau2"),
            "normal_bitension_numeric": quantity(rep.normal_component, "normal_bitension"),
            "tangential_residual": quantity(rep.tangential_residual, "tangential"),
        })
    if scale > 0:
        first = check("normal bitension vs closed form", worst_nb <= NUMERIC_RTOL, worst_nb, NUMERIC_RTOL,
                      "normal_bitension")
    else:
        # tau vanishes, so tau2 is only difference noise; check tau itself
        first = check("minimal radii: |tau|", worst_tau <= 1e-8, worst_tau, 1e-8, "tau")
    checks = [
        first,
        check("tangential part of tau2", worst_tan <= TANGENTIAL_RTOL, worst_tan, TANGENTIAL_RTOL, "tangential"),
    ]
    results = {
        "a": quantity(imm.a, "constraint"),
        "b": quantity(imm.b, "constraint"),
        "lambda": quantity(float(exact.lambda_), "lambda"),
        "mu": quantity(float(exact.mu), "mu"),
        "normal_bitension": quantity(float(exact.normal_bitension), "normal_bitension"),
        "samples": samples,
    }
    return checks, results


def _sweep_json(cfg: RunConfig, rows, passed_rows):
    loci = find_loci(cfg.p, cfg.q, cfg.c, cfg.d)
    checks = [check("every row: closed form vs numeric", passed_rows, 0.0, NUMERIC_RTOL, "normal_bitension",
                    "within")]
    results = {
        "samples": quantity(len(rows), "count"),
        "t_minimal": quantity(loci.t_minimal, "minimal_radii") if loci.t_minimal is not None else None,
        "t_biharmonic": quantity(np.asarray(loci.t_biharmonic, dtype=float), "biharmonic_radii"),
        "lambda_sign_changes": quantity(sign_changes([r.lambda_ for r in rows]), "sign_changes"),
        "normal_bitension_sign_changes": quantity(
            sign_changes([r.normal_bitension_closed for r in rows]), "sign_changes"),
        "rows": [{name: (v if isinstance(v, str) else quantity(v, ref)) for name, v, ref in
                  zip(r.FIELDS, r.values(),
                      ("t", "constraint", "constraint", "lambda", "mu", "normal_bitension",
                       "normal_bitension", "tangential", ""))} for r in rows],
    }
    return checks, results


def _report(cfg, checks, results) -> str:
    return dumps({
        "schema": SCHEMA,
        "config": cfg.describe(),
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "results": results,
    })


def run(cfg: RunConfig):
    """Execute ``cfg``. Returns (exit status, artifact text)."""
    h = cfg.derivatives
    if cfg.command == "sweep":
        try:
            rows, ok = sweep(cfg.p, cfg.q, cfg.c, cfg.d, cfg.samples, h, cfg.tol), True
        except CrossCheckError as exc:
            rows, ok = exc.rows, False
        if cfg.output == "csv":
            return (0 if ok else 2), sweep_csv(rows)
        checks, results = _sweep_json(cfg, rows, ok)
    elif cfg.command == "verify-theorem1":
        checks, results = verify_theorem1(cfg.p, cfg.q, cfg.c, cfg.d, h, cfg.seed, cfg.points, cfg.tol)
    elif cfg.command == "verify-theorem2":
        checks, results = verify_theorem2(cfg.p, cfg.c, cfg.d, h, cfg.seed, cfg.points, cfg.tol)
    elif cfg.command == "verify-composition":
        checks, results = verify_composition(cfg.p, cfg.q, cfg.c, cfg.d, cfg.inner, cfg.inner2, h,
                                             cfg.seed, min(cfg.points, 10), cfg.tol)
    elif cfg.command == "classify":
        checks, results = _classify(cfg)
    else:
        checks, results = _bitension(cfg)
    status = 0 if all(c["passed"] for c in checks) else 2
    return status, _report(cfg, checks, results)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bitension", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--q", type=int, default=0)
        sp.add_argument("--c", type=float, required=True)
        sp.add_argument("--d", type=float, required=True)
        if name in ("classify", "bitension"):
            sp.add_argument("--a", type=float)
            sp.add_argument("--b", type=float)
            sp.add_argument("--t", type=float)
            sp.add_argument("--locus", choices=("minimal", "biharmonic"))
        if name == "verify-composition":
            sp.add_argument("--inner", required=True,
                            help="identity, great_sphere:m or clifford_pair:m1,m2")
            sp.add_argument("--inner2", help="inner immersion into the second sphere factor")
        sp.add_argument("--h1", type=float, help="first-derivative step")
        sp.add_argument("--h2", type=float, help="second-derivative step")
        sp.add_argument("--scheme", choices=("central_2nd_order", "central_4th_order"),
                        default="central_2nd_order")
        sp.add_argument("--output", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="output path (default: standard output)")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"Philox key for random check points (default {DEFAULT_SEED})")
        sp.add_argument("--samples", type=int, default=64, help="sweep sample count")
        sp.add_argument("--points", type=int, default=20, help="random check points")
    return parser


def config_from_args(argv: Sequence[str], environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    ns = build_parser().parse_args(argv)
    base = (DerivativeConfig.fourth_order() if ns.scheme == "central_4th_order" else DerivativeConfig())
    try:
        deriv = DerivativeConfig(ns.h1 if ns.h1 is not None else base.h1,
                                 ns.h2 if ns.h2 is not None else base.h2, ns.scheme)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    tol = DEFAULT_TOL
    if environ.get(TOL_ENV):
        try:
            tol = float(environ[TOL_ENV])
        except ValueError:
            raise UsageError(f"{TOL_ENV} must be a number, got {environ[TOL_ENV]!r}") from None
        if not (tol > 0 and math.isfinite(tol)):
            raise UsageError(f"{TOL_ENV} must be positive")
    return RunConfig(
        command=ns.command, p=ns.p, q=ns.q, c=ns.c, d=ns.d,
        a=getattr(ns, "a", None), b=getattr(ns, "b", None), t=getattr(ns, "t", None),
        locus=getattr(ns, "locus", None), inner=getattr(ns, "inner", None),
        inner2=getattr(ns, "inner2", None), derivatives=deriv, output=ns.output, out=ns.out,
        seed=ns.seed, samples=ns.samples, points=ns.points, tol=tol,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = config_from_args(argv)
        status, text = run(cfg)
    except (UsageError, BiharmonicError, ValueError) as exc:
        print(f"bitension: error: {exc}", file=sys.stderr)
        return 1
    try:
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"bitension: error: cannot write {cfg.out}: {exc}", file=sys.stderr)
        return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
