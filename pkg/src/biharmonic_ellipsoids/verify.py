"""Verification runs behind the command-line front end.

Each ``verify_*`` function returns ``(checks, results)``: a list of check
records (see :func:`report.check`) and a dict of tagged quantities.
"""
from __future__ import annotations

import math

import numpy as np

from . import closed_form as cf
from .classify import NUMERIC_RTOL, TANGENTIAL_RTOL, classify, cross_check_scale
from .immersions import ComposedImmersion, MinimalInner, ProductImmersion
from .numeric import (DEFAULT_CONFIG, bitension_numeric, normal_derivative_residual,
                      sff_T, tension_numeric)
from .quadric import QuadricSpec
from .report import check, quantity

DEFAULT_SEED = 20130607


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox generator keyed by ``seed``."""
    return np.random.Generator(np.random.Philox(key=int(seed)))


def _sample_points(sub, rng, points):
    return [sub.base_point()] + [sub.random_point(rng) for _ in range(points)]


def _biharmonic_checks(label, sub, pts, cfg):
    worst_ratio, worst_tan, min_tau = 0.0, 0.0, math.inf
    last = None
    for pt in pts:
        rep = bitension_numeric(sub, pt, cfg)
        n = rep.norms()
        worst_ratio = max(worst_ratio, n["tau2"] / n["delta_tau"] if n["delta_tau"] > 0 else math.inf)
        worst_tan = max(worst_tan, rep.tangential_residual / (1.0 + n["tau2"]))
        min_tau = min(min_tau, n["tau"])
        last = rep
    checks = [
        check(f"{label}: |tau2| / |Delta tau|", worst_ratio <= NUMERIC_RTOL, worst_ratio, NUMERIC_RTOL, "tau2"),
        check(f"{label}: tangential part of tau2", worst_tan <= TANGENTIAL_RTOL, worst_tan,
              TANGENTIAL_RTOL, "tangential"),
    ]
    return checks, last, min_tau


def verify_theorem1(p, q, c, d, cfg=DEFAULT_CONFIG, seed=DEFAULT_SEED, points=20, tol=1e-6):
    spec = QuadricSpec(p, q, c, d)
    if q < 1:
        raise ValueError("verify-theorem1 needs q >= 1; use verify-theorem2 for hyperspheres")
    rng = make_rng(seed)
    checks, results = [], {}

    rmin = cf.minimality_radii(p, q, c, d)
    tmin = ProductImmersion.from_radii_sq(spec, rmin.a_sq, rmin.b_sq)
    worst_tau = max(np.linalg.norm(tension_numeric(tmin, pt, cfg).tau)
                    for pt in _sample_points(tmin, rng, points))
    checks.append(check("minimal radii: |tau|", worst_tau < 1e-8, worst_tau, 1e-8, "tau"))
    results["minimal_radii"] = {"a_sq": quantity(rmin.a_sq, "minimal_radii"),
                                "b_sq": quantity(rmin.b_sq, "minimal_radii")}

    rbih = cf.biharmonic_radii(p, q, c, d)
    tb = ProductImmersion.from_radii_sq(spec, rbih.a_sq, rbih.b_sq)
    scal = cf.torus_scalars(p, q, c, d, tb.a, tb.b)
    verdict = classify(p, q, c, d, tb.a, tb.b, tol, cfg).verdict
    if rbih.proper:
        bchecks, rep, _ = _biharmonic_checks("biharmonic radii", tb, _sample_points(tb, rng, points), cfg)
        checks += bchecks
        checks.append(check("biharmonic radii: |lambda| (proper)", abs(scal.lambda_) > tol,
                            abs(scal.lambda_), tol, "lambda", ">"))
        checks.append(check("biharmonic radii classified proper_biharmonic",
                            verdict == "proper_biharmonic", 0.0, 0.0, "normal_bitension", "=="))
        results["numeric_tau2_norm"] = quantity(float(np.linalg.norm(rep.tau2)), "tau2")
        results["numeric_delta_tau_norm"] = quantity(float(np.linalg.norm(rep.delta_tau)), "delta_tau")
    else:
        checks.append(check("coincident radii (c q = d p) classified minimal", verdict == "minimal",
                            abs(scal.lambda_), tol, "lambda"))
    results["biharmonic_radii"] = {"a_sq": quantity(rbih.a_sq, "biharmonic_radii"),
                                   "b_sq": quantity(rbih.b_sq, "biharmonic_radii"),
                                   "proper": bool(rbih.proper), "verdict": verdict}
    results["lambda"] = quantity(float(scal.lambda_), "lambda")
    results["mu"] = quantity(float(scal.mu), "mu")
    results["normal_bitension"] = quantity(float(scal.normal_bitension), "normal_bitension")

    worst_nb, worst_lam, worst_tan = 0.0, 0.0, 0.0
    for _ in range(points):
        t = float(rng.uniform(0.05, math.pi / 2 - 0.05))
        imm = ProductImmersion.from_t(spec, t)
        pt = imm.random_point(rng)
        rep = bitension_numeric(imm, pt, cfg)
        exact = cf.torus_scalars(p, q, c, d, imm.a, imm.b)
        worst_nb = max(worst_nb, abs(rep.normal_component - exact.normal_bitension)
                       / cross_check_scale(p, q, c, d, imm.a, imm.b))
        worst_lam = max(worst_lam, abs(rep.tension.lambda_est - exact.lambda_))
        worst_tan = max(worst_tan, rep.tangential_residual / (1.0 + np.linalg.norm(rep.tau2)))
    checks.append(check("random points: normal bitension vs closed form (relative)",
                        worst_nb <= NUMERIC_RTOL, worst_nb, NUMERIC_RTOL, "normal_bitension"))
    checks.append(check("random points: lambda vs closed form", worst_lam <= 1e-8, worst_lam, 1e-8, "lambda"))
    checks.append(check("random points: tangential part of tau2", worst_tan <= TANGENTIAL_RTOL,
                        worst_tan, TANGENTIAL_RTOL, "tangential"))
    return checks, results


def verify_theorem2(p, c, d, cfg=DEFAULT_CONFIG, seed=DEFAULT_SEED, points=20, tol=1e-6):
    spec = QuadricSpec(p, 0, c, d)
    rng = make_rng(seed)
    checks, results = [], {}

    eq = ProductImmersion(spec, float(c), 0.0)
    worst_b, worst_tau = 0.0, 0.0
    for pt in _sample_points(eq, rng, points):
        P = eq.tangent_projector(pt)
        w1, w2 = P @ rng.standard_normal(spec.n), P @ rng.standard_normal(spec.n)
        for method in ("closed", "hessian", "weingarten"):
            worst_b = max(worst_b, np.linalg.norm(sff_T(eq, pt, w1, w2, method, cfg)))
        worst_tau = max(worst_tau, np.linalg.norm(tension_numeric(eq, pt, cfg).tau))
    checks.append(check("equator: second fundamental form", worst_b <= 1e-10, worst_b, 1e-10, "sff_T"))
    checks.append(check("equator: |tau|", worst_tau <= 1e-10, worst_tau, 1e-10, "tau"))

    r = cf.biharmonic_radii(p, 0, c, d)
    for sign, name in ((1.0, "b_plus"), (-1.0, "b_minus")):
        imm = ProductImmersion.from_radii_sq(spec, r.a_sq, r.b_sq, sign)
        bchecks, rep, min_tau = _biharmonic_checks(f"hypersphere {name}", imm,
                                                   _sample_points(imm, rng, points), cfg)
        checks += bchecks
        checks.append(check(f"hypersphere {name}: |tau| > 0", min_tau > tol, min_tau, tol, "tau", ">"))
        scal = cf.hypersphere_scalars(p, c, d, imm.a, imm.b)
        results[name] = {
            "a": quantity(imm.a, "hypersphere_radii"),
            "b": quantity(imm.b, "hypersphere_radii"),
            "lambda": quantity(float(scal.lambda_), "lambda"),
            "mu": quantity(float(scal.mu), "mu"),
            "normal_bitension": quantity(float(scal.normal_bitension), "normal_bitension"),
            "numeric_tau2_norm": quantity(float(np.linalg.norm(rep.tau2)), "tau2"),
        }
    return checks, results


def composed_immersion(p, q, c, d, inner, inner2=None, sign=1.0):
    """Minimal composition with the proper-biharmonic outer immersion of (p, q, c, d)."""
    spec = QuadricSpec(p, q, c, d)
    r = cf.biharmonic_radii(p, q, c, d)
    outer = ProductImmersion.from_radii_sq(spec, r.a_sq, r.b_sq, sign)
    if isinstance(inner, str):
        inner = MinimalInner.parse(inner, p, outer.a)
    if isinstance(inner2, str):
        inner2 = MinimalInner.parse(inner2, q, outer.b)
    return ComposedImmersion(inner, outer, inner2)


def composed_closed_form(comp):
    outer = comp.outer
    spec = outer.spec
    if outer.kind == "hypersphere":
        return cf.composed_scalars(comp.inner.dim, spec.c, spec.d, outer.a, outer.b)
    return cf.composed_pair_scalars(comp.inner.dim, comp.inner2.dim, spec.c, spec.d, outer.a, outer.b)


def verify_composition(p, q, c, d, inner, inner2=None, cfg=DEFAULT_CONFIG, seed=DEFAULT_SEED,
                       points=10, tol=1e-6):
    rng = make_rng(seed)
    checks, results = [], {}
    signs = (1.0, -1.0) if q == 0 else (1.0,)
    for sign in signs:
        comp = composed_immersion(p, q, c, d, inner, inner2, sign)
        label = "composed" if q else ("composed b_plus" if sign > 0 else "composed b_minus")
        pts = _sample_points(comp, rng, points)
        bchecks, rep, min_tau = _biharmonic_checks(label, comp, pts, cfg)
        checks += bchecks
        checks.append(check(f"{label}: |tau| > 0", min_tau > tol, min_tau, tol, "tau", ">"))
        scal = composed_closed_form(comp)
        nu_err = max(abs(np.linalg.norm(tension_numeric(comp, pt, cfg).tau) - scal.nu) / scal.nu for pt in pts)
        checks.append(check(f"{label}: |tau| vs nu", nu_err <= 1e-8, nu_err, 1e-8, "nu"))
        worst_par = 0.0
        for pt in pts:
            tau_norm = np.linalg.norm(tension_numeric(comp, pt, cfg).tau)
            e = comp.tangent_projector(pt) @ rng.standard_normal(comp.spec.n)
            e /= np.linalg.norm(e)
            worst_par = max(worst_par, normal_derivative_residual(comp, pt, e, cfg) / tau_norm)
        checks.append(check(f"{label}: parallel mean curvature", worst_par <= 1e-5, worst_par, 1e-5, "parallel"))
        results[label.replace(" ", "_")] = {
            "inner": comp.inner.describe(),
            "inner2": comp.inner2.describe() if comp.inner2 else None,
            "dimension": quantity(comp.dim, "count"),
            "a": quantity(comp.outer.a, "biharmonic_radii"),
            "b": quantity(comp.outer.b, "biharmonic_radii"),
            "nu": quantity(float(scal.nu), "nu"),
            "composed_bracket": quantity(float(scal.composed_bracket), "composed_bracket"),
            "numeric_tau2_norm": quantity(float(np.linalg.norm(rep.tau2)), "tau2"),
        }
    return checks, results
