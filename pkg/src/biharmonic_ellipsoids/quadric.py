"""The ellipsoid Q = {(x, y) : |x|^2/c^2 + |y|^2/d^2 = 1} inside R^(p+q+2).

Points and vectors are flat float arrays of length ``n = p + q + 2``; the
first ``p + 1`` entries form the x-block and the remaining ``q + 1`` the
y-block. :meth:`QuadricSpec.split` returns views on the two blocks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, InvalidInputError

ON_QUADRIC_TOL = 1e-9
TANGENCY_TOL = 1e-9


@dataclass(frozen=True)
class QuadricSpec:
    """Dimensions ``p, q`` and semi-axes ``c, d`` of the ellipsoid Q^(p+q+1)(c, d).

    ``q = 0`` encodes the ellipsoid of revolution Q^(p+1)(c, d).
    """

    p: int
    q: int
    c: float
    d: float

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise InvalidInputError(f"p must be a positive integer, got {self.p!r}")
        if int(self.q) != self.q or self.q < 0:
            raise InvalidInputError(f"q must be a non-negative integer, got {self.q!r}")
        if not (np.isfinite(self.c) and self.c > 0 and np.isfinite(self.d) and self.d > 0):
            raise InvalidInputError(f"semi-axes must be positive, got c={self.c!r}, d={self.d!r}")

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return self.p + self.q + 2

    @property
    def dim(self) -> int:
        return self.p + self.q + 1

    def split(self, v):
        v = self.check(v)
        return v[: self.p + 1], v[self.p + 1:]

    def join(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        if x.size != self.p + 1 or y.size != self.q + 1:
            raise InvalidInputError(
                f"block sizes ({x.size}, {y.size}) do not match ({self.p + 1}, {self.q + 1})")
        return np.concatenate([x, y])

    def check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise InvalidInputError(f"expected a vector of length {self.n}, got shape {v.shape}")
        return v

    def weights(self) -> np.ndarray:
        """Diagonal of the quadratic form: 1/c^2 on the x-block, 1/d^2 on the y-block."""
        return np.concatenate([np.full(self.p + 1, 1.0 / self.c**2),
                               np.full(self.q + 1, 1.0 / self.d**2)])


def residual_on_quadric(spec: QuadricSpec, pt) -> float:
    """Signed residual |x|^2/c^2 + |y|^2/d^2 - 1."""
    x, y = spec.split(pt)
    return float(x @ x / spec.c**2 + y @ y / spec.d**2 - 1.0)


def require_on_quadric(spec: QuadricSpec, pt, tol=ON_QUADRIC_TOL) -> np.ndarray:
    pt = spec.check(pt)
    r = residual_on_quadric(spec, pt)
    if abs(r) > tol:
        raise GeometryError("point is not on the quadric", r)
    return pt


def quadric_normal(spec: QuadricSpec, pt):
    """Unnormalized normal ``(x/c^2, y/d^2)`` at ``pt`` and its squared norm."""
    pt = require_on_quadric(spec, pt)
    eta = spec.weights() * pt
    return eta, float(eta @ eta)


def unit_quadric_normal(spec: QuadricSpec, pt) -> np.ndarray:
    eta, nsq = quadric_normal(spec, pt)
    return eta / np.sqrt(nsq)


def tangency_defect(spec: QuadricSpec, pt, v) -> float:
    """Weighted pairing sum x_i X_i / c^2 + sum y_j Y_j / d^2, relative to max(1, |v|)."""
    v = spec.check(v)
    defect = float(np.sum(spec.weights() * pt * v))
    return defect / max(1.0, float(np.linalg.norm(v)))


def require_tangent(spec: QuadricSpec, pt, v, tol=TANGENCY_TOL) -> np.ndarray:
    v = spec.check(v)
    defect = tangency_defect(spec, pt, v)
    if abs(defect) > tol:
        raise GeometryError("vector is not tangent to the quadric", defect)
    return v


def project_tangent_quadric(spec: QuadricSpec, pt, v) -> np.ndarray:
    """Orthogonal projection of ``v`` onto the tangent space of Q at ``pt``."""
    v = spec.check(v)
    eta, nsq = quadric_normal(spec, pt)
    return v - (eta @ v) / nsq * eta


def sff_Q(spec: QuadricSpec, pt, w1, w2) -> np.ndarray:
    """Second fundamental form of Q in flat space on tangent vectors ``w1, w2``.

    B(w1, w2) = -(1/|eta1|) [<X1, X2>/c^2 + <Y1, Y2>/d^2] eta, with eta = eta1/|eta1|
    the unit normal built from the unnormalized ``eta1 = (x/c^2, y/d^2)``.
    """
    eta1, nsq = quadric_normal(spec, pt)
    w1 = require_tangent(spec, pt, w1)
    w2 = require_tangent(spec, pt, w2)
    x1, y1 = spec.split(w1)
    x2, y2 = spec.split(w2)
    bracket = (x1 @ x2) / spec.c**2 + (y1 @ y2) / spec.d**2
    norm = np.sqrt(nsq)
    return -(1.0 / norm) * bracket * (eta1 / norm)
