"""Exact scalar coefficients of the tension and bitension fields.

All formulas are written with plain arithmetic in the order they are usually
printed, so they accept floats as well as ``mpmath.mpf`` values (used by the
root refinement in :mod:`classify`).

Notation: the immersion is S^p(a) x S^q(b) -> Q^(p+q+1)(c, d) with
a^2/c^2 + b^2/d^2 = 1, eta1_T = ((c^2/a^2) x, -(d^2/b^2) y) and
eta1_Q = (x/c^2, y/d^2). Then

    tau           = lambda eta1_T
    Delta tau     = mu eta1_T
    <tau2, eta1_T> = -lambda {T1 - T2}
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidInputError, NotApplicableError

CONSTRAINT_TOL = 1e-9


@dataclass(frozen=True)
class RadiiPair:
    """Squared radii on the constraint curve. ``proper`` is None when not meaningful."""

    a_sq: float
    b_sq: float
    proper: Optional[bool] = None

    @property
    def a(self) -> float:
        return math.sqrt(self.a_sq)

    @property
    def b(self) -> float:
        return math.sqrt(self.b_sq)


@dataclass(frozen=True)
class ClosedFormReport:
    lambda_: float
    mu: float
    normal_bitension: float
    nu: Optional[float] = None
    composed_bracket: Optional[float] = None
    # tau vanishes identically (equator hypersphere)
    totally_geodesic: bool = False


def _check_constraint(c, d, a, b):
    res = a**2 / c**2 + b**2 / d**2 - 1
    if abs(res) > CONSTRAINT_TOL:
        raise InvalidInputError(f"(a, b) violates a^2/c^2 + b^2/d^2 = 1 (residual {float(res):.3e})")


def eta_T_norm_sq(c, d, a, b):
    """|eta1_T|^2 = c^4/a^2 + d^4/b^2 on the submanifold."""
    return c**4 / a**2 + d**4 / b**2


def eta_Q_norm_sq(c, d, a, b):
    """|eta1_Q|^2 = a^2/c^4 + b^2/d^4, the value taken on the product submanifold.

    |eta1_Q| is not constant on Q; this is its restriction to the product
    S^p(a) x S^q(b) (or S^p(a) x {b}).
    """
    return a**2 / c**4 + b**2 / d**4


def lambda_torus(p, q, c, d, a, b):
    """lambda = -[c^4/a^2 + d^4/b^2]^-1 [p c^2/a^2 - q d^2/b^2]."""
    return -(c**4 / a**2 + d**4 / b**2) ** -1 * (p * c**2 / a**2 - q * d**2 / b**2)


def mu_torus(p, q, c, d, a, b):
    """mu = (lambda/|eta1_T|^2) [p c^4/a^4 + q d^4/b^4]."""
    lam = lambda_torus(p, q, c, d, a, b)
    return lam / eta_T_norm_sq(c, d, a, b) * (p * c**4 / a**4 + q * d**4 / b**4)


def normal_terms(p, q, c, d, a, b):
    """The two terms of the brace in <tau2, eta1_T>.

    T1 = p c^4/a^4 + q d^4/b^4 comes from the rough Laplacian, T2 =
    (1/|eta1_Q|^2)[c^2/a^2 + d^2/b^2][p/c^2 + q/d^2] from the curvature trace.
    """
    t1 = p * c**4 / a**4 + q * d**4 / b**4
    t2 = 1 / eta_Q_norm_sq(c, d, a, b) * (c**2 / a**2 + d**2 / b**2) * (p / c**2 + q / d**2)
    return t1, t2


def normal_brace(p, q, c, d, a, b):
    t1, t2 = normal_terms(p, q, c, d, a, b)
    return t1 - t2


def normal_bitension_torus(p, q, c, d, a, b, check=True):
    """<tau2, eta1_T> = -lambda {T1 - T2}; requires (a, b) on the constraint."""
    if check:
        _check_constraint(c, d, a, b)
    return -lambda_torus(p, q, c, d, a, b) * normal_brace(p, q, c, d, a, b)


def minimality_radii(p, q, c, d) -> RadiiPair:
    """a^2 = c^2 p/(p+q), b^2 = d^2 q/(p+q)."""
    if q == 0:
        raise NotApplicableError("hyperspheres S^p(a) x {b} are minimal only at the equator b = 0")
    return RadiiPair(c**2 * p / (p + q), d**2 * q / (p + q), proper=False)


def coincidence(p, q, c, d) -> bool:
    """Minimal and biharmonic radii coincide exactly when c q = d p."""
    return q >= 1 and math.isclose(c * q, d * p, rel_tol=1e-12, abs_tol=0.0)


def biharmonic_radii(p, q, c, d) -> RadiiPair:
    """a^2 = c^3/(c+d), b^2 = d^3/(c+d) (same values for the hypersphere, b of either sign).

    ``proper`` is False when these radii are also the minimal ones (c q = d p).
    """
    return RadiiPair(c**2 * (c / (c + d)), d**2 * (d / (c + d)), proper=not coincidence(p, q, c, d))


def hypersphere_scalars(p, c, d, a, b, check=True) -> ClosedFormReport:
    """Coefficients for S^p(a) x {b} in Q^(p+1)(c, d).

    ``b = 0`` is the totally geodesic equator: tau vanishes and every
    coefficient is reported as zero.
    """
    if check:
        _check_constraint(c, d, a, b)
    if b == 0:
        return ClosedFormReport(0.0, 0.0, 0.0, totally_geodesic=True)
    lam = -(c**4 / a**2 + d**4 / b**2) ** -1 * (p * c**2 / a**2)
    mu = lam / eta_T_norm_sq(c, d, a, b) * (p * c**4 / a**4)
    brace = p * c**4 / a**4 - 1 / eta_Q_norm_sq(c, d, a, b) * (c**2 / a**2 + d**2 / b**2) * (p / c**2)
    return ClosedFormReport(lam, mu, -lam * brace)


def torus_scalars(p, q, c, d, a, b, check=True) -> ClosedFormReport:
    if q == 0:
        return hypersphere_scalars(p, c, d, a, b, check)
    return ClosedFormReport(lambda_torus(p, q, c, d, a, b), mu_torus(p, q, c, d, a, b),
                            normal_bitension_torus(p, q, c, d, a, b, check))


def composed_scalars(m, c, d, a, b, check=True) -> ClosedFormReport:
    """Minimal M^m -> S^p(a) composed with the hypersphere S^p(a) x {b} -> Q^(p+1)(c, d).

    nu = m (c^2/a^2)/|eta1_S| is the length of the tension field, and the
    bracket {c^4/a^4 - (1/|eta1_Q|^2)[c^2/a^2 + d^2/b^2][1/c^2]} vanishes
    exactly at the proper-biharmonic hypersphere radii.
    """
    if m < 1:
        raise InvalidInputError("inner dimension m must be at least 1")
    if b == 0:
        raise NotApplicableError("the composition with the equator is totally geodesic")
    base = hypersphere_scalars(m, c, d, a, b, check)
    nu = m * (c**2 / a**2) * (1 / eta_T_norm_sq(c, d, a, b) ** 0.5)
    bracket = c**4 / a**4 - 1 / eta_Q_norm_sq(c, d, a, b) * (c**2 / a**2 + d**2 / b**2) * (1 / c**2)
    return ClosedFormReport(base.lambda_, base.mu, base.normal_bitension, nu, bracket)


def composed_pair_scalars(m1, m2, c, d, a, b, check=True) -> ClosedFormReport:
    """Minimal M1 x M2 -> S^p(a) x S^q(b) composed with the product immersion.

    Same formulas as the product immersion with (p, q) replaced by the inner
    dimensions (m1, m2).
    """
    rep = torus_scalars(m1, m2, c, d, a, b, check)
    nu = abs(rep.lambda_) * eta_T_norm_sq(c, d, a, b) ** 0.5
    return ClosedFormReport(rep.lambda_, rep.mu, rep.normal_bitension, nu, normal_brace(m1, m2, c, d, a, b))


def delta_normal_coefficient(m, c, d, a, b):
    """Coefficient k with Delta eta_S = k eta_S along a minimal M^m in S^p(a) x {b}."""
    return m / eta_T_norm_sq(c, d, a, b) * (c**4 / a**4)
