"""Finite-difference covariant calculus along submanifolds of the ellipsoid.

Everything here is computed from the chart of the submanifold and the
ellipsoid's own second fundamental form; none of the scalar coefficients in
:mod:`closed_form` are used, so the two modules can check each other.

Sign conventions:

* curvature   R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]
* Laplacian   Delta V = -sum_i (nabla_ei nabla_ei V - nabla_(nabla_ei ei) V)
* bitension   tau2 = -Delta tau - sum_i R(e_i, tau) e_i
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, InvalidInputError
from .immersions import ProductImmersion, is_tangent_to_T, submanifold_normal
from .quadric import quadric_normal, require_tangent, sff_Q, unit_quadric_normal

SCHEMES = ("central_2nd_order", "central_4th_order")

# (offsets, weights) of central stencils; derivative = sum(w f(o h)) / h^order
_FIRST = {
    "central_2nd_order": ((-1, 1), (-0.5, 0.5)),
    "central_4th_order": ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12)),
}
_SECOND = {
    "central_2nd_order": ((-1, 0, 1), (1.0, -2.0, 1.0)),
    "central_4th_order": ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12)),
}


@dataclass(frozen=True)
class DerivativeConfig:
    """Finite-difference steps, in units of the configuration's smallest length.

    ``h1`` is used for first derivatives, ``h2`` for second derivatives.
    """

    h1: float = 1e-5
    h2: float = 1e-4
    scheme: str = "central_2nd_order"

    def __post_init__(self):
        for name in ("h1", "h2"):
            h = getattr(self, name)
            if not 1e-8 <= h <= 1e-2:
                raise InvalidInputError(f"{name} must lie in [1e-8, 1e-2], got {h!r}")
        if self.scheme not in SCHEMES:
            raise InvalidInputError(f"unknown scheme {self.scheme!r}")

    @classmethod
    def fourth_order(cls):
        """Accuracy preset: 4th-order stencils with steps large enough to keep rounding small."""
        return cls(h1=2e-3, h2=1e-2, scheme="central_4th_order")


DEFAULT_CONFIG = DerivativeConfig()


@dataclass(frozen=True)
class TensionReport:
    tau: np.ndarray
    lambda_est: float
    residual_off_normal: float


@dataclass(frozen=True)
class BitensionReport:
    tension: TensionReport
    delta_tau: np.ndarray
    mu_est: float
    curvature_term: np.ndarray
    tau2: np.ndarray
    normal_component: float
    tangential_residual: float
    # part of tau2 normal to the submanifold but orthogonal to eta1_T
    transverse_residual: float

    @property
    def tau(self):
        return self.tension.tau

    def norms(self) -> dict:
        return {
            "tau": float(np.linalg.norm(self.tau)),
            "delta_tau": float(np.linalg.norm(self.delta_tau)),
            "curvature_term": float(np.linalg.norm(self.curvature_term)),
            "tau2": float(np.linalg.norm(self.tau2)),
        }


def _stencil(f, h, scheme, order):
    offsets, weights = (_FIRST if order == 1 else _SECOND)[scheme]
    acc = 0.0
    for o, w in zip(offsets, weights):
        acc = acc + w * f(o * h)
    return acc / h**order


def _steps(sub, cfg):
    scale = sub.length_scale
    return cfg.h1 * scale, cfg.h2 * scale


def _locate(sub, pt, chart):
    pt = sub.require_point(pt)
    if chart is None:
        chart = sub.chart(center=pt)
    return pt, chart, chart.inverse(pt)


def _chart_direction(chart, v0, w):
    """Chart vector whose image under the chart differential is ``w``."""
    J = chart.jacobian(v0)
    xi, *_ = np.linalg.lstsq(J, w, rcond=None)
    miss = np.linalg.norm(J @ xi - w)
    if miss > 1e-9 * max(1.0, np.linalg.norm(w)):
        raise GeometryError("direction is not tangent to the submanifold", float(miss))
    return xi


def tangent_section(sub, field):
    """Wrap a point function so its values are projected onto the tangent space of Q."""
    spec = sub.spec

    def section(x):
        v = np.asarray(field(x), dtype=float)
        eta, nsq = quadric_normal(spec, x)
        return v - (eta @ v) / nsq * eta

    return section


def covariant_derivative_Q(sub, field, pt, direction, cfg=DEFAULT_CONFIG, *, chart=None):
    """nabla^Q of a vector field along the submanifold, in a tangent direction.

    The ambient derivative of ``field`` along the chart line through ``pt``
    with velocity ``direction`` is differenced and projected onto T_pt Q.
    """
    pt, chart, v0 = _locate(sub, pt, chart)
    xi = _chart_direction(chart, v0, sub.spec.check(direction))
    h1, _ = _steps(sub, cfg)
    D = _stencil(lambda s: np.asarray(field(chart.point(v0 + s * xi)), dtype=float),
                 h1, cfg.scheme, 1)
    eta, nsq = quadric_normal(sub.spec, pt)
    return D - (eta @ D) / nsq * eta


def tension_vector(sub, pt, *, chart=None) -> np.ndarray:
    """Trace of the second fundamental form of the submanifold in Q at ``pt``.

    Computed as the component normal to the submanifold, inside T_pt Q, of
    g^ij d_i d_j F for the chart map F.
    """
    pt, chart, v0 = _locate(sub, pt, chart)
    J = chart.jacobian(v0)
    H = chart.hessian_contract(v0, np.linalg.inv(J.T @ J))
    return _normal_part(sub, pt, H)


def _normal_part(sub, pt, v):
    eta, nsq = quadric_normal(sub.spec, pt)
    v = v - (eta @ v) / nsq * eta
    return v - sub.tangent_projector(pt) @ v


def tension_numeric(sub, pt, cfg=DEFAULT_CONFIG) -> TensionReport:
    """Tension field of the immersion and its coefficient against eta1_T."""
    tau = tension_vector(sub, pt)
    cache = submanifold_normal(sub, pt)
    lam = float(tau @ cache.eta1_T) / cache.eta1_T_norm_sq
    off = float(np.linalg.norm(tau - lam * cache.eta1_T))
    return TensionReport(tau, lam, off)


def sff_T(imm: ProductImmersion, pt, w1, w2, method="closed", cfg=DEFAULT_CONFIG) -> np.ndarray:
    """Second fundamental form of the product immersion inside Q.

    ``method``:
      * ``closed``: -(1/|eta1_T|^2) [(c^2/a^2)<X1,X2> - (d^2/b^2)<Y1,Y2>] eta1_T
      * ``weingarten``: -<nabla^Q_w1 eta_T, w2> eta_T with the derivative differenced
      * ``hessian``: normal part of the chart's second derivative
    """
    imm = imm.outer
    spec = imm.spec
    pt = imm.require_point(pt)
    w1, w2 = spec.check(w1), spec.check(w2)
    for w in (w1, w2):
        if not is_tangent_to_T(spec, pt, w):
            raise GeometryError("vector is not tangent to the product submanifold")
    if method == "closed":
        if imm.is_equator:
            return np.zeros(spec.n)
        cache = submanifold_normal(imm, pt)
        X1, Y1 = spec.split(w1)
        X2, Y2 = spec.split(w2)
        bracket = spec.c**2 / imm.a**2 * (X1 @ X2) - spec.d**2 / imm.b**2 * (Y1 @ Y2)
        return -(1.0 / cache.eta1_T_norm_sq) * bracket * cache.eta1_T
    if method == "weingarten":
        def unit_normal(x):
            e = submanifold_normal(imm, x).eta1_T
            return e / np.linalg.norm(e)
        d_eta = covariant_derivative_Q(imm, unit_normal, pt, w1, cfg)
        eta = unit_normal(pt)
        return -(d_eta @ w2) * eta
    if method == "hessian":
        chart = imm.chart(center=pt)
        v0 = chart.inverse(pt)
        xi1, xi2 = _chart_direction(chart, v0, w1), _chart_direction(chart, v0, w2)
        return _normal_part(imm, pt, chart.hessian(v0, xi1, xi2))
    raise InvalidInputError(f"unknown method {method!r}")


def rough_laplacian_numeric(sub, field, pt, cfg=DEFAULT_CONFIG, *, chart=None) -> np.ndarray:
    """Rough Laplacian of a section of TQ along the submanifold, leading minus sign.

    For each Gram-Schmidt frame vector e_i of the chart at ``pt`` the chart
    line gamma through ``pt`` with velocity e_i is used:

        nabla_s nabla_s V = P V'' + <n', V> n'        (n = unit normal of Q)
        nabla_(nabla_ei ei) V with nabla_ei ei = tangential part of gamma''

    ``V''``, ``n'`` and ``gamma''`` are all finite differences; the second
    term makes the result independent of the chart and of the frame.
    """
    spec = sub.spec
    pt, chart, v0 = _locate(sub, pt, chart)
    section = tangent_section(sub, field)
    h1, h2 = _steps(sub, cfg)
    E, C = chart.frame(v0)
    eta, nsq = quadric_normal(spec, pt)
    PQ = np.eye(spec.n) - np.outer(eta, eta) / nsq
    PT = sub.tangent_projector(pt)
    V0 = section(pt)
    total = np.zeros(spec.n)
    for i in range(chart.dim):
        xi = C[:, i]
        along = lambda s: chart.point(v0 + s * xi)  # noqa: E731
        Vpp = _stencil(lambda s: section(along(s)), h2, cfg.scheme, 2)
        n_prime = _stencil(lambda s: unit_quadric_normal(spec, along(s)), h1, cfg.scheme, 1)
        second = PQ @ Vpp + (n_prime @ V0) * n_prime
        accel = PT @ _stencil(along, h2, cfg.scheme, 2)
        if np.linalg.norm(accel) > 0.0:
            zeta = C @ (E.T @ accel)
            D = _stencil(lambda s: section(chart.point(v0 + s * zeta)), h1, cfg.scheme, 1)
            second = second - PQ @ D
        total += second
    return -total


def completed_basis(sub, pt, *, chart=None) -> np.ndarray:
    """Orthonormal basis of T_pt Q: the tangent frame followed by a normal basis.

    Completeness (size, orthonormality, orthogonality to the quadric normal)
    is checked, not assumed.
    """
    pt, chart, v0 = _locate(sub, pt, chart)
    E, _ = chart.frame(v0)
    W = np.column_stack([E, sub.normal_basis(pt)])
    eta = unit_quadric_normal(sub.spec, pt)
    if W.shape[1] != sub.spec.dim:
        raise GeometryError(f"basis has {W.shape[1]} vectors, quadric has dimension {sub.spec.dim}")
    gram_err = float(np.abs(W.T @ W - np.eye(W.shape[1])).max())
    normal_err = float(np.abs(W.T @ eta).max())
    if max(gram_err, normal_err) > 1e-10:
        raise GeometryError("completed basis is not an orthonormal basis of T Q", max(gram_err, normal_err))
    return W


def curvature_pairing(spec, pt, x, y, z, w) -> float:
    """<R^Q(x, y) z, w> from the Gauss equation of Q in flat space."""
    return float(sff_Q(spec, pt, y, z) @ sff_Q(spec, pt, x, w)
                 - sff_Q(spec, pt, x, z) @ sff_Q(spec, pt, y, w))


def curvature_term_numeric(sub, pt, tau, *, chart=None) -> np.ndarray:
    """sum_i R^Q(e_i, tau) e_i, assembled from Gauss-equation pairings on a basis of T Q."""
    spec = sub.spec
    pt = sub.require_point(pt)
    tau = require_tangent(spec, pt, tau)
    W = completed_basis(sub, pt, chart=chart)
    frame = W[:, : sub.dim]
    # B^Q(u, v) = -k(u, v) eta with k(u, v) = <u, D v>/|eta1|, so the Gauss equation gives
    # <R(e, tau) e, w> = k(tau, e) k(e, w) - k(e, e) k(tau, w); summed over the frame at once
    _, nsq = quadric_normal(spec, pt)
    DW = spec.weights()[:, None] * W / np.sqrt(nsq)
    k_frame = frame.T @ DW
    k_tau = tau @ DW
    coef = k_tau[: sub.dim] @ k_frame - np.trace(k_frame[:, : sub.dim]) * k_tau
    return W @ coef


def bitension_numeric(sub, pt, cfg=DEFAULT_CONFIG, *, chart=None) -> BitensionReport:
    """tau2 = -(Delta tau + sum_i R(e_i, tau) e_i) and its decomposition at ``pt``.

    A ``chart`` centred elsewhere (or with a ``mix``) changes the frame used
    for the Laplacian and the curvature trace, not the result.
    """
    pt = sub.require_point(pt)
    tension = tension_numeric(sub, pt, cfg)
    if chart is None:
        chart = sub.chart(center=pt)
    delta = rough_laplacian_numeric(sub, lambda x: tension_vector(sub, x, chart=chart), pt, cfg, chart=chart)
    curv = curvature_term_numeric(sub, pt, tension.tau, chart=chart)
    tau2 = -(delta + curv)
    cache = submanifold_normal(sub, pt)
    mu = float(delta @ cache.eta1_T) / cache.eta1_T_norm_sq
    normal = float(tau2 @ cache.eta1_T)
    tangential = float(np.linalg.norm(sub.tangent_projector(pt) @ tau2))
    transverse = _normal_part(sub, pt, tau2) - normal / cache.eta1_T_norm_sq * cache.eta1_T
    return BitensionReport(tension, delta, mu, curv, tau2, normal, tangential,
                           float(np.linalg.norm(transverse)))


def normal_derivative_residual(sub, pt, direction, cfg=DEFAULT_CONFIG) -> float:
    """Norm of the normal-bundle part of nabla^Q_e tau; zero for parallel mean curvature."""
    d_tau = covariant_derivative_Q(sub, lambda x: tension_vector(sub, x), pt, direction, cfg)
    return float(np.linalg.norm(_normal_part(sub, pt, d_tau)))
