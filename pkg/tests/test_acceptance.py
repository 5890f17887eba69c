"""Acceptance suite: ten criteria at their stated tolerances.

Each test prints one ``criterion N: PASS|FAIL`` line with the worst measured
value and its limit. Run it alone with

    pytest tests/test_acceptance.py -v

or as a script, ``python tests/test_acceptance.py``, which prints the ten
lines and exits non-zero if any criterion fails.
"""
from __future__ import annotations

import functools
import importlib
import itertools
import math
import subprocess
import sys
from dataclasses import dataclass

import numpy as np
import pytest

from biharmonic_ellipsoids import closed_form as cf
from biharmonic_ellipsoids.cli import main as cli_main
from biharmonic_ellipsoids.immersions import ComposedImmersion, MinimalInner, ProductImmersion, submanifold_normal
from biharmonic_ellipsoids.numeric import (DerivativeConfig, bitension_numeric, covariant_derivative_Q,
                                           normal_derivative_residual, rough_laplacian_numeric, sff_T,
                                           tension_numeric, tension_vector)
from biharmonic_ellipsoids.quadric import QuadricSpec

cl = importlib.import_module("biharmonic_ellipsoids.classify")

DIMS = list(itertools.product([1, 2, 3], repeat=2))
AXES = list(itertools.product([0.5, 1.0, 2.0, 3.0], repeat=2))
GRID = [(p, q, c, d) for p, q in DIMS for c, d in AXES]
POINTS = 20
# the 4th-order preset is the one meant for acceptance runs; at the default
# 2nd-order steps, rounding costs up to ~5e-3 of the normal bitension once
# the axes are far apart (c/d = 4 or 6), which is above the 1e-4 tolerance
ACCEPT_CFG = DerivativeConfig.fourth_order()


@dataclass
class Outcome:
    passed: bool
    detail: str


def rng_for(label: str) -> np.random.Generator:
    key = int.from_bytes(label.encode()[:8].ljust(8, b"\0"), "little")
    return np.random.Generator(np.random.Philox(key=key))


def points_on(sub, rng, k):
    return [sub.base_point()] + [sub.random_point(rng) for _ in range(k - 1)]


def unit_tangent(sub, pt, rng):
    e = sub.tangent_projector(pt) @ rng.standard_normal(sub.spec.n)
    return e / np.linalg.norm(e)


def report(k: int, outcome: Outcome, capsys=None):
    line = f"criterion {k}: {'PASS' if outcome.passed else 'FAIL'}  {outcome.detail}"
    if capsys is None:
        print(line, flush=True)
    else:
        # bypass capture so the line lands in the pytest log as well
        with capsys.disabled():
            print(f"\n{line}", flush=True)
    return outcome


def biharmonic_torus(p, q, c, d, sign=1.0):
    r = cf.biharmonic_radii(p, q, c, d)
    return ProductImmersion.from_radii_sq(QuadricSpec(p, q, c, d), r.a_sq, r.b_sq, sign), r.proper


# 1. special radii of the torus ------------------------------------------------

def criterion_1() -> Outcome:
    rng = rng_for("crit1")
    worst_tau, worst_ratio, min_lambda, coincident, wrong = 0.0, 0.0, math.inf, 0, []
    for p, q, c, d in GRID:
        spec = QuadricSpec(p, q, c, d)
        r = cf.minimality_radii(p, q, c, d)
        imm = ProductImmersion.from_radii_sq(spec, r.a_sq, r.b_sq)
        for pt in points_on(imm, rng, 3):
            worst_tau = max(worst_tau, np.linalg.norm(tension_numeric(imm, pt).tau))
        imm, proper = biharmonic_torus(p, q, c, d)
        if proper:
            for pt in points_on(imm, rng, 3):
                rep = bitension_numeric(imm, pt)
                n = rep.norms()
                worst_ratio = max(worst_ratio, n["tau2"] / n["delta_tau"])
                min_lambda = min(min_lambda, abs(rep.tension.lambda_est))
        else:
            coincident += 1
            verdict = cl.classify(p, q, c, d, imm.a, imm.b).verdict
            if verdict != "minimal":
                wrong.append((p, q, c, d, verdict))
    ok = worst_tau < 1e-8 and worst_ratio < 1e-4 and min_lambda > 1e-6 and not wrong
    return Outcome(ok, f"max|tau| at minimal radii {worst_tau:.2e} (<1e-8); max|tau2|/|Delta tau| "
                       f"{worst_ratio:.2e} (<1e-4); min|lambda| {min_lambda:.3g} (>1e-6); "
                       f"{coincident} coincident geometries, misclassified {wrong}")


# 2 and 3 share one set of random constraint points ----------------------------

@functools.lru_cache(maxsize=1)
def constraint_samples():
    rng = rng_for("crit23")
    out = []
    for p, q, c, d in GRID:
        spec = QuadricSpec(p, q, c, d)
        for _ in range(POINTS):
            t = float(rng.uniform(0.02, math.pi / 2 - 0.02))
            imm = ProductImmersion.from_t(spec, t)
            rep = bitension_numeric(imm, imm.random_point(rng), ACCEPT_CFG)
            exact = cf.torus_scalars(p, q, c, d, imm.a, imm.b)
            scale = cl.cross_check_scale(p, q, c, d, imm.a, imm.b)
            out.append({
                "geom": (p, q, c, d, t),
                "nb_rel": abs(rep.normal_component - exact.normal_bitension) / scale,
                "lambda_err": abs(rep.tension.lambda_est - exact.lambda_),
                "tangential": rep.tangential_residual / (1.0 + np.linalg.norm(rep.tau2)),
            })
    return out


def criterion_2() -> Outcome:
    rows = constraint_samples()
    nb = max(rows, key=lambda r: r["nb_rel"])
    lam = max(r["lambda_err"] for r in rows)
    ok = nb["nb_rel"] <= 1e-4 and lam <= 1e-8
    return Outcome(ok, f"{len(rows)} points: max rel normal-bitension error {nb['nb_rel']:.2e} (<=1e-4, at "
                       f"(p,q,c,d,t)={nb['geom'][:4]},{nb['geom'][4]:.3f}); max lambda error {lam:.2e} (<=1e-8)")


def criterion_3() -> Outcome:
    rows = constraint_samples()
    worst = max(rows, key=lambda r: r["tangential"])
    ok = worst["tangential"] < 1e-6
    return Outcome(ok, f"{len(rows)} points: max tangential residual / (1+|tau2|) "
                       f"{worst['tangential']:.2e} (<1e-6)")


# 4. hyperspheres ----------------------------------------------------------------

def criterion_4() -> Outcome:
    rng = rng_for("crit4")
    worst_b, worst_ratio, min_tau = 0.0, 0.0, math.inf
    for p in (1, 2, 3):
        for c, d in AXES:
            spec = QuadricSpec(p, 0, c, d)
            eq = ProductImmersion(spec, c, 0.0)
            for pt in points_on(eq, rng, 4):
                w1, w2 = (unit_tangent(eq, pt, rng) for _ in range(2))
                for method in ("closed", "hessian", "weingarten"):
                    worst_b = max(worst_b, np.linalg.norm(sff_T(eq, pt, w1, w2, method)))
            for sign in (1.0, -1.0):
                imm, _ = biharmonic_torus(p, 0, c, d, sign)
                for pt in points_on(imm, rng, 3):
                    rep = bitension_numeric(imm, pt, ACCEPT_CFG)
                    n = rep.norms()
                    worst_ratio = max(worst_ratio, n["tau2"] / n["delta_tau"])
                    min_tau = min(min_tau, n["tau"])
    ok = worst_b <= 1e-10 and worst_ratio < 1e-4 and min_tau > 1e-6
    return Outcome(ok, f"equator max|B^T| {worst_b:.2e} (<=1e-10); both signs of b: max|tau2|/|Delta tau| "
                       f"{worst_ratio:.2e} (<1e-4), min|tau| {min_tau:.3g} (>0)")


# 5. round-sphere reduction -------------------------------------------------------

def criterion_5() -> Outcome:
    worst = 0.0
    for p, q in DIMS:
        r = cf.biharmonic_radii(p, q, 1.0, 1.0)
        worst = max(worst, abs(r.a_sq - 0.5), abs(r.b_sq - 0.5))
        t = cl.find_loci(p, q, 1.0, 1.0).t_biharmonic
        worst = max(worst, abs(math.cos(t[0]) ** 2 - 0.5), abs(math.sin(t[0]) ** 2 - 0.5))
    return Outcome(worst <= 1e-12, f"max |a^2 - 1/2|, |b^2 - 1/2| over (p,q) in {{1,2,3}}^2 "
                                   f"(formula and root finder) {worst:.2e} (<=1e-12)")


# 6. compositions -----------------------------------------------------------------

def composed_cases():
    """(label, submanifold, expect nonzero tension) for every composition exercised."""
    cases = []
    for p, c, d in itertools.product((2, 3), (0.5, 1.0, 2.0, 3.0), (0.5, 1.0, 2.0, 3.0)):
        for sign in (1.0, -1.0):
            outer, _ = biharmonic_torus(p, 0, c, d, sign)
            inners = [MinimalInner.great_sphere(m, p, outer.a) for m in range(1, p)]
            if p == 3:
                inners.append(MinimalInner.clifford_pair(1, 1, outer.a))
            for inner in inners:
                cases.append((f"S {inner.describe()} p={p} c={c} d={d} b{'+' if sign > 0 else '-'}",
                              ComposedImmersion(inner, outer), True))
    pairs = [((3, 3), "clifford_pair:1,1", "great_sphere:2"), ((3, 3), "great_sphere:1", "clifford_pair:1,1"),
             ((2, 3), "great_sphere:1", "great_sphere:2"), ((3, 2), "identity", "great_sphere:1")]
    for (p, q), s1, s2 in pairs:
        for c, d in AXES:
            outer, proper = biharmonic_torus(p, q, c, d)
            if not proper:
                continue
            inner = MinimalInner.parse(s1, p, outer.a)
            inner2 = MinimalInner.parse(s2, q, outer.b)
            # the composition is minimal when the inner dimensions hit the coincidence c m2 = d m1
            nonzero = not math.isclose(c * inner2.dim, d * inner.dim, rel_tol=1e-12)
            cases.append((f"T {s1} x {s2} c={c} d={d}", ComposedImmersion(inner, outer, inner2), nonzero))
    return cases


def criterion_6() -> Outcome:
    rng = rng_for("crit6")
    worst_ratio, min_tau, max_minimal_tau, n = 0.0, math.inf, 0.0, 0
    for _, comp, nonzero in composed_cases():
        for pt in points_on(comp, rng, 3):
            rep = bitension_numeric(comp, pt, ACCEPT_CFG)
            norms = rep.norms()
            n += 1
            if nonzero:
                worst_ratio = max(worst_ratio, norms["tau2"] / norms["delta_tau"])
                min_tau = min(min_tau, norms["tau"])
            else:
                max_minimal_tau = max(max_minimal_tau, norms["tau"])
    ok = worst_ratio < 1e-4 and min_tau > 1e-6 and max_minimal_tau < 1e-8
    return Outcome(ok, f"{n} evaluations: max|tau2|/|Delta tau| {worst_ratio:.2e} (<1e-4); min|tau| "
                       f"{min_tau:.3g} (>0); max|tau| of minimal products {max_minimal_tau:.1e}")


# 7. parallel mean curvature ---------------------------------------------------------

def biharmonic_family():
    subs = []
    for p, q, c, d in GRID:
        imm, proper = biharmonic_torus(p, q, c, d)
        if proper:
            subs.append(imm)
    for p in (1, 2, 3):
        for c, d in AXES:
            for sign in (1.0, -1.0):
                subs.append(biharmonic_torus(p, 0, c, d, sign)[0])
    subs += [comp for _, comp, nonzero in composed_cases() if nonzero]
    return subs


def criterion_7() -> Outcome:
    rng = rng_for("crit7")
    worst, count = 0.0, 0
    for sub in biharmonic_family():
        for pt in points_on(sub, rng, 10):
            tau = np.linalg.norm(tension_vector(sub, pt))
            e = unit_tangent(sub, pt, rng)
            worst = max(worst, normal_derivative_residual(sub, pt, e) / tau)
            count += 1
    return Outcome(worst <= 1e-5, f"{count} point/direction pairs: max |normal part of nabla_e tau| / |tau| "
                                  f"{worst:.2e} (<=1e-5)")


# 8. root finding ------------------------------------------------------------------------

def criterion_8() -> Outcome:
    worst_b, worst_m, worst_h = 0.0, 0.0, 0.0
    for p, q, c, d in GRID:
        loci = cl.find_loci(p, q, c, d)
        tb = loci.t_biharmonic
        if len(tb) != 1:
            return Outcome(False, f"{len(tb)} biharmonic roots for {(p, q, c, d)}")
        worst_b = max(worst_b, abs(math.cos(tb[0]) ** 2 - c / (c + d)))
        worst_m = max(worst_m, abs(math.tan(loci.t_minimal) ** 2 - q / p))
    for p in (1, 2, 3):
        for c, d in AXES:
            tb = cl.find_loci(p, 0, c, d).t_biharmonic
            if len(tb) != 2:
                return Outcome(False, f"{len(tb)} hypersphere roots for {(p, c, d)}")
            worst_h = max(worst_h, *(abs(math.cos(t) ** 2 - c / (c + d)) for t in tb), abs(tb[0] + tb[1]))
    worst = max(worst_b, worst_m, worst_h)
    return Outcome(worst <= 1e-10, f"max |cos^2 t_bih - c/(c+d)| {worst_b:.1e}, |tan^2 t_min - q/p| "
                                   f"{worst_m:.1e}, hypersphere {worst_h:.1e} (<=1e-10)")


# 9. convergence order -----------------------------------------------------------------

def convergence_ratios():
    """Error ratio under step halving, 2nd-order scheme, for three smooth probe fields."""
    rng = rng_for("crit9")
    imm = ProductImmersion.from_t(QuadricSpec(2, 1, 2, 1), 0.7)
    pt = imm.random_point(rng)
    ratios = {}

    # nonlinear ambient field, rough Laplacian in a rotated chart; reference from the 4th-order scheme
    M = rng.standard_normal((5, 5))
    field = lambda x: np.sin(M @ x)  # noqa: E731
    chart = imm.chart(center=pt, mix=np.linalg.qr(rng.standard_normal((3, 3)))[0])
    ref = rough_laplacian_numeric(imm, field, pt, DerivativeConfig(1e-3, 2e-3, "central_4th_order"), chart=chart)
    ratios["Delta sin(Mx)"] = _ratio(lambda h: rough_laplacian_numeric(imm, field, pt, DerivativeConfig(h, h),
                                                                       chart=chart), ref, 4e-3)

    # the tension field, against Delta tau = mu eta1_T
    exact = cf.mu_torus(2, 1, 2, 1, imm.a, imm.b) * submanifold_normal(imm, pt).eta1_T
    tau = lambda x: tension_vector(imm, x)  # noqa: E731
    ratios["Delta tau"] = _ratio(lambda h: rough_laplacian_numeric(imm, tau, pt, DerivativeConfig(h, h),
                                                                   chart=chart), exact, 1e-2)

    # eta1_T along an off-centre chart line, against nabla_e eta1_T = ((c^2/a^2) X, -(d^2/b^2) Y)
    e = unit_tangent(imm, pt, rng)
    exact = np.concatenate([4 / imm.a**2 * e[:3], -1 / imm.b**2 * e[3:]])
    off = imm.chart(center=imm.chart(center=pt).point(np.array([0.05, -0.03, 0.04])))
    eta = lambda x: submanifold_normal(imm, x).eta1_T  # noqa: E731
    ratios["nabla eta1_T"] = _ratio(lambda h: covariant_derivative_Q(imm, eta, pt, e, DerivativeConfig(h, h),
                                                                     chart=off), exact, 1e-2)
    return ratios


def _ratio(approx, reference, h):
    return float(np.linalg.norm(approx(h) - reference) / np.linalg.norm(approx(h / 2) - reference))


def criterion_9() -> Outcome:
    ratios = convergence_ratios()
    ok = all(3.5 <= r <= 4.5 for r in ratios.values())
    return Outcome(ok, "ratios " + ", ".join(f"{k}: {v:.4f}" for k, v in ratios.items()) + " (in [3.5, 4.5])")


# 10. determinism ---------------------------------------------------------------------------

CLI_RUNS = [
    ["verify-theorem1", "--p", "2", "--q", "1", "--c", "2", "--d", "1"],
    ["verify-theorem2", "--p", "2", "--c", "1", "--d", "1"],
    ["verify-composition", "--p", "3", "--c", "1", "--d", "2", "--inner", "clifford_pair:1,1"],
    ["classify", "--p", "1", "--q", "1", "--c", "2", "--d", "1", "--t", "0.5"],
    ["sweep", "--p", "1", "--q", "1", "--c", "2", "--d", "1", "--samples", "64", "--output", "csv"],
    ["sweep", "--p", "2", "--q", "0", "--c", "1", "--d", "2", "--samples", "32"],
    ["bitension", "--p", "2", "--q", "2", "--c", "1", "--d", "3", "--locus", "biharmonic", "--seed", "99"],
]


def criterion_10(tmp_dir) -> Outcome:
    differing, statuses = [], set()
    for k, args in enumerate(CLI_RUNS):
        outs = []
        for run in range(2):
            path = tmp_dir / f"run{k}_{run}"
            statuses.add(cli_main(args + ["--out", str(path)]))
            outs.append(path.read_bytes())
        if outs[0] != outs[1]:
            differing.append(args[0])
    # and across separate interpreter processes
    procs = [subprocess.run([sys.executable, "-m", "biharmonic_ellipsoids"] + CLI_RUNS[4],
                            capture_output=True, check=False).stdout for _ in range(2)]
    if procs[0] != procs[1] or not procs[0]:
        differing.append("sweep (separate processes)")
    ok = not differing and statuses == {0}
    return Outcome(ok, f"{len(CLI_RUNS)} commands run twice in-process plus one in two processes; "
                       f"differing: {differing or 'none'}; exit statuses {sorted(statuses)}")


# pytest entry points -------------------------------------------------------------------------

@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k, capsys):
    outcome = report(k, globals()[f"criterion_{k}"](), capsys)
    assert outcome.passed, outcome.detail


def test_criterion_10(tmp_path, capsys):
    outcome = report(10, criterion_10(tmp_path), capsys)
    assert outcome.passed, outcome.detail


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    results = []
    for k in range(1, 10):
        results.append(report(k, globals()[f"criterion_{k}"]()).passed)
    with tempfile.TemporaryDirectory() as tmp:
        results.append(report(10, criterion_10(Path(tmp))).passed)
    sys.exit(0 if all(results) else 1)
