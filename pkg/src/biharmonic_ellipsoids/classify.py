"""Classification along the constraint curve, root finding for the special radii, sweeps.

The constraint curve a^2/c^2 + b^2/d^2 = 1 is parametrized by
``a = c cos t, b = d sin t`` with t in (0, pi/2) for tori and
t in (-pi/2, pi/2) for hyperspheres (negative t gives negative heights).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import mpmath
import numpy as np

from . import closed_form as cf
from .errors import CrossCheckError, InvalidInputError
from .immersions import ProductImmersion
from .numeric import DEFAULT_CONFIG, DerivativeConfig, bitension_numeric
from .quadric import QuadricSpec

DEFAULT_TOL = 1e-6
NUMERIC_RTOL = 1e-4
TANGENTIAL_RTOL = 1e-6
GRID = 512
# working precision for root refinement; double roots of the bitension need it
REFINE_DPS = 40

VERDICTS = ("minimal", "proper_biharmonic", "neither", "equator_totally_geodesic")


@dataclass(frozen=True)
class ConstraintParam:
    t: float
    kind: str = "torus"

    def __post_init__(self):
        lo = 0.0 if self.kind == "torus" else -math.pi / 2
        if not lo < self.t < math.pi / 2:
            raise InvalidInputError(f"t = {self.t!r} outside the {self.kind} parameter interval")
        if self.kind == "torus" and self.t == 0:
            raise InvalidInputError("t = 0 is degenerate for a torus")

    def radii(self, c, d):
        return c * math.cos(self.t), d * math.sin(self.t)


@dataclass
class Classification:
    verdict: str
    lambda_: float
    normal_bitension: float
    tol: float
    residuals: dict = field(default_factory=dict)
    numeric_consistent: bool = True


@dataclass(frozen=True)
class SweepRow:
    t: float
    a: float
    b: float
    lambda_: float
    mu: float
    normal_bitension_closed: float
    normal_bitension_numeric: float
    tangential_residual: float
    verdict: str

    FIELDS = ("t", "a", "b", "lambda", "mu", "normal_bitension_closed",
              "normal_bitension_numeric", "tangential_residual", "verdict")

    def values(self):
        return (self.t, self.a, self.b, self.lambda_, self.mu, self.normal_bitension_closed,
                self.normal_bitension_numeric, self.tangential_residual, self.verdict)


@dataclass(frozen=True)
class Loci:
    t_minimal: Optional[float]
    t_biharmonic: List[float]


def _on_constraint(c, d, a, b):
    res = a**2 / c**2 + b**2 / d**2 - 1.0
    if abs(res) > 1e-9:
        raise InvalidInputError(f"(a, b) violates a^2/c^2 + b^2/d^2 = 1 (residual {res:.3e})")
    # snap onto the curve so the immersion can be built at full precision
    s = math.sqrt(res + 1.0)
    return a / s, b / s


def cross_check_scale(p, q, c, d, a, b):
    """Natural size of <tau2, eta1_T>: |lambda| times the larger brace term."""
    if q == 0 and b == 0:
        return 0.0
    lam = cf.torus_scalars(p, q, c, d, a, b, check=False).lambda_
    if q == 0:
        t1 = p * c**4 / a**4
        t2 = 1 / cf.eta_Q_norm_sq(c, d, a, b) * (c**2 / a**2 + d**2 / b**2) * (p / c**2)
    else:
        t1, t2 = cf.normal_terms(p, q, c, d, a, b)
    return abs(lam) * max(abs(t1), abs(t2))


def _verdict(q, b, lam, nb, tol):
    if q == 0 and b == 0:
        return "equator_totally_geodesic"
    if q >= 1 and abs(lam) <= tol:
        return "minimal"
    if abs(nb) <= tol:
        return "proper_biharmonic"
    return "neither"


def classify(p, q, c, d, a, b, tol=DEFAULT_TOL, cfg: DerivativeConfig = DEFAULT_CONFIG,
             numeric=True) -> Classification:
    """Minimal / proper biharmonic / neither for the product immersion with radii (a, b).

    The verdict uses the exact scalars with absolute tolerance ``tol``; a
    tie at the coincidence c q = d p resolves to ``minimal``. With
    ``numeric`` the finite-difference bitension at the base point is
    recorded and compared against the verdict.
    """
    a, b = _on_constraint(c, d, a, b)
    rep = cf.torus_scalars(p, q, c, d, a, b)
    verdict = _verdict(q, b, rep.lambda_, rep.normal_bitension, tol)
    out = Classification(verdict, float(rep.lambda_), float(rep.normal_bitension), tol)
    if not numeric:
        return out
    imm = ProductImmersion(QuadricSpec(p, q, c, d), a, b)
    num = bitension_numeric(imm, imm.base_point(), cfg)
    norms = num.norms()
    scale = cross_check_scale(p, q, c, d, a, b)
    out.residuals = {
        "tau": norms["tau"],
        "delta_tau": norms["delta_tau"],
        "tau2": norms["tau2"],
        "tangential": num.tangential_residual,
        "normal_bitension_numeric": num.normal_component,
        "normal_bitension_error": abs(num.normal_component - rep.normal_bitension),
        "cross_check_scale": scale,
    }
    checks = [num.tangential_residual <= TANGENTIAL_RTOL * (1.0 + norms["tau2"])]
    if verdict == "equator_totally_geodesic":
        checks.append(norms["tau"] <= 1e-10)
    elif verdict == "minimal":
        checks.append(norms["tau"] <= 1e-8)
    elif verdict == "proper_biharmonic":
        checks.append(norms["tau2"] <= NUMERIC_RTOL * norms["delta_tau"])
    else:
        checks.append(abs(num.normal_component - rep.normal_bitension) <= NUMERIC_RTOL * scale)
    out.numeric_consistent = all(checks)
    return out


def _interval(q):
    return (0.0, math.pi / 2) if q >= 1 else (-math.pi / 2, math.pi / 2)


def _minimal_fn(p, q, c, d):
    def g(t, cos=math.cos, sin=math.sin):
        a, b = c * cos(t), d * sin(t)
        return p * c**2 / a**2 - q * d**2 / b**2
    return g


def _biharmonic_fn(p, q, c, d):
    def g(t, cos=math.cos, sin=math.sin):
        a, b = c * cos(t), d * sin(t)
        if q == 0:
            return cf.hypersphere_scalars(p, c, d, a, b, check=False).normal_bitension
        return cf.normal_bitension_torus(p, q, c, d, a, b, check=False)
    return g


def _bisect(g, lo, hi, width=1e-15):
    """Bisection in extended precision on a bracket [lo, hi] with a sign change."""
    with mpmath.workdps(REFINE_DPS):
        lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
        glo = g(lo, mpmath.cos, mpmath.sin)
        while hi - lo > width:
            mid = (lo + hi) / 2
            gm = g(mid, mpmath.cos, mpmath.sin)
            if gm == 0:
                return float(mid)
            if (gm > 0) == (glo > 0):
                lo, glo = mid, gm
            else:
                hi = mid
        return float((lo + hi) / 2)


def _roots(g, lo, hi, grid):
    # cell midpoints: never hits the interval centre (t = pi/4, or t = 0 for hyperspheres)
    ts = lo + (hi - lo) * (np.arange(grid) + 0.5) / grid
    vals = np.array([g(float(t)) for t in ts])
    signs = np.sign(vals)
    roots = []
    for k in range(grid - 1):
        if signs[k] == 0:
            roots.append(float(ts[k]))
        elif signs[k] * signs[k + 1] < 0:
            roots.append(_bisect(g, ts[k], ts[k + 1]))
    if signs[-1] == 0:
        roots.append(float(ts[-1]))
    return roots


def find_loci(p, q, c, d, grid=GRID) -> Loci:
    """Parameters t of the minimal and proper-biharmonic radii on the constraint curve.

    Sign changes are located on a uniform grid and refined by bisection. The
    minimal locus is the sign change of p c^2/a^2 - q d^2/b^2; the
    biharmonic locus is every sign change of <tau2, eta1_T>. (The brace
    factor alone also changes sign at the minimal radii, where lambda
    does, so it cannot separate the two loci.) For hyperspheres the
    minimal locus is the equator t = 0.
    """
    lo, hi = _interval(q)
    bih = _roots(_biharmonic_fn(p, q, c, d), lo, hi, grid)
    if q == 0:
        return Loci(0.0, bih)
    mins = _roots(_minimal_fn(p, q, c, d), lo, hi, grid)
    return Loci(mins[0] if mins else None, bih)


def chebyshev_nodes(lo, hi, n):
    k = np.arange(n)
    ts = (lo + hi) / 2 + (hi - lo) / 2 * np.cos((2 * k + 1) * np.pi / (2 * n))
    ts = np.sort(ts)
    ts[np.abs(ts) < 1e-12] = 0.0
    return ts


def sweep(p, q, c, d, n_samples=64, cfg: DerivativeConfig = DEFAULT_CONFIG, tol=DEFAULT_TOL,
          strict=True) -> List[SweepRow]:
    """Closed-form and numeric normal bitension at Chebyshev-spaced points of the curve.

    Every row must satisfy |closed - numeric| <= 1e-4 times the cross-check
    scale; otherwise :class:`CrossCheckError` names the worst row (it has
    the computed rows attached as ``rows``).
    """
    if n_samples < 8:
        raise InvalidInputError("n_samples must be at least 8")
    spec = QuadricSpec(p, q, c, d)
    lo, hi = _interval(q)
    rows, worst = [], (0.0, None)
    for t in chebyshev_nodes(lo, hi, n_samples):
        t = float(t)
        a, b = c * math.cos(t), d * math.sin(t)
        rep = cf.torus_scalars(p, q, c, d, a, b, check=False)
        imm = ProductImmersion(spec, a, b)
        num = bitension_numeric(imm, imm.base_point(), cfg)
        verdict = _verdict(q, b, rep.lambda_, rep.normal_bitension, tol)
        row = SweepRow(t, a, b, float(rep.lambda_), float(rep.mu), float(rep.normal_bitension),
                       num.normal_component, num.tangential_residual, verdict)
        rows.append(row)
        scale = cross_check_scale(p, q, c, d, a, b)
        err = abs(num.normal_component - rep.normal_bitension)
        bad = max(err / (NUMERIC_RTOL * scale) if scale > 0 else err / 1e-10,
                  num.tangential_residual / (TANGENTIAL_RTOL * (1.0 + float(np.linalg.norm(num.tau2)))))
        if bad > worst[0]:
            worst = (bad, row)
    if strict and worst[0] > 1.0:
        row = worst[1]
        exc = CrossCheckError(
            f"closed-form / numeric mismatch at t = {row.t:.17g}: closed {row.normal_bitension_closed:.6e}, "
            f"numeric {row.normal_bitension_numeric:.6e}, tangential {row.tangential_residual:.3e}")
        exc.rows = rows
        raise exc
    return rows


def sign_changes(values) -> int:
    s = np.sign(np.asarray(values, dtype=float))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))
