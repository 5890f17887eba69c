"""Product immersions of round spheres into the ellipsoid, and their minimal compositions.

Every submanifold built here is a product of round spheres sitting in disjoint
coordinate blocks of R^n, possibly with some coordinates frozen (the height
``b`` of a hypersphere, the trailing zeros of a great sphere). That common
shape is captured by :class:`SphereFactor` and drives a single chart
implementation, :class:`LocalChart`, used for every finite difference.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (ChartDomainError, ConfigurationError, GeometryError,
                     InvalidInputError)
from .quadric import QuadricSpec, quadric_normal, require_on_quadric

CONSTRAINT_TOL = 1e-12
# graph charts become singular on the equator of the cap; refuse to get close
CHART_EDGE = 1e-6


@dataclass(frozen=True)
class SphereFactor:
    """Round sphere S^dim(radius) in ambient coordinates ``start .. start+dim``."""

    start: int
    dim: int
    radius: float

    @property
    def slice(self) -> slice:
        return slice(self.start, self.start + self.dim + 1)


@dataclass(frozen=True)
class GeometryCache:
    eta1_Q: np.ndarray
    eta1_Q_norm_sq: float
    eta1_T: np.ndarray
    eta1_T_norm_sq: float


@dataclass(frozen=True)
class ChartPoint:
    """Graph-chart coordinates on S^p(a) and S^q(b) (``angles_q`` empty when q = 0)."""

    angles_p: np.ndarray
    angles_q: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def flat(self) -> np.ndarray:
        return np.concatenate([np.atleast_1d(np.asarray(self.angles_p, dtype=float)),
                               np.atleast_1d(np.asarray(self.angles_q, dtype=float))])


def _householder_basis(n0: np.ndarray) -> np.ndarray:
    """Columns 1.. of the reflection sending e_1 to the unit vector ``n0``.

    They form an orthonormal basis of the hyperplane orthogonal to ``n0``; at
    ``n0 = e_1`` this is exactly ``eye[:, 1:]``.
    """
    k1 = n0.size
    w = -n0.copy()
    w[0] += 1.0
    ww = w @ w
    H = np.eye(k1)
    if ww > 1e-30:
        H -= 2.0 * np.outer(w, w) / ww
    return H[:, 1:]


class _Submanifold:
    """Shared behaviour of product and composed immersions."""

    spec: QuadricSpec
    factors: tuple
    fixed: np.ndarray

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def length_scale(self) -> float:
        """Smallest geometric length of the configuration; finite-difference steps scale with it."""
        c, d = self.spec.c, self.spec.d
        scales = [f.radius for f in self.factors]
        scales.append(min(c, d) ** 2 / max(c, d))
        return float(min(scales))

    def base_point(self) -> np.ndarray:
        pt = self.fixed.copy()
        for f in self.factors:
            pt[f.start] = f.radius
        return pt

    def chart(self, center=None, mix=None) -> "LocalChart":
        return LocalChart(self, self.base_point() if center is None else center, mix)

    def contains(self, pt, tol=1e-9) -> bool:
        pt = self.spec.check(pt)
        mask = np.ones(self.spec.n, dtype=bool)
        for f in self.factors:
            mask[f.slice] = False
            if abs(np.linalg.norm(pt[f.slice]) - f.radius) > tol * max(1.0, f.radius):
                return False
        return bool(np.all(np.abs(pt[mask] - self.fixed[mask]) <= tol))

    def require_point(self, pt) -> np.ndarray:
        pt = require_on_quadric(self.spec, pt)
        if not self.contains(pt):
            raise GeometryError("point is not on the submanifold")
        return pt

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        pt = self.fixed.copy()
        for f in self.factors:
            g = rng.standard_normal(f.dim + 1)
            pt[f.slice] = f.radius * g / np.linalg.norm(g)
        return pt

    def tangent_projector(self, pt) -> np.ndarray:
        """Orthogonal projector of R^n onto the tangent space of the submanifold at ``pt``."""
        n = self.spec.n
        P = np.zeros((n, n))
        for f in self.factors:
            x = pt[f.slice]
            P[f.slice, f.slice] = np.eye(f.dim + 1) - np.outer(x, x) / (x @ x)
        return P

    def normal_basis(self, pt) -> np.ndarray:
        """Orthonormal basis (as columns) of the normal space of the submanifold inside T_pt Q."""
        eta, nsq = quadric_normal(self.spec, pt)
        P = np.eye(self.spec.n) - self.tangent_projector(pt) - np.outer(eta, eta) / nsq
        vals, vecs = np.linalg.eigh(P)
        codim = self.spec.dim - self.dim
        return vecs[:, vals.argsort()[::-1][:codim]]


@dataclass(frozen=True)
class ProductImmersion(_Submanifold):
    """Inclusion S^p(a) x S^q(b) -> Q (torus) or S^p(a) x {b} -> Q (hypersphere, q = 0)."""

    spec: QuadricSpec
    a: float
    b: float
    kind: str = ""

    def __post_init__(self):
        p, q, c, d = self.spec.p, self.spec.q, self.spec.c, self.spec.d
        kind = self.kind or ("torus" if q >= 1 else "hypersphere")
        if kind not in ("torus", "hypersphere"):
            raise InvalidInputError(f"unknown immersion kind {kind!r}")
        if (kind == "hypersphere") != (q == 0):
            raise InvalidInputError("kind 'hypersphere' is used exactly when q = 0")
        if not self.a > 0:
            raise InvalidInputError(f"radius a must be positive, got {self.a!r}")
        if kind == "torus" and not self.b > 0:
            raise InvalidInputError(f"torus radius b must be positive, got {self.b!r}")
        if kind == "hypersphere" and not abs(self.b) < d:
            raise InvalidInputError(f"hypersphere height must satisfy |b| < d, got {self.b!r}")
        res = self.a**2 / c**2 + self.b**2 / d**2 - 1.0
        if abs(res) > CONSTRAINT_TOL:
            raise InvalidInputError(f"radii violate a^2/c^2 + b^2/d^2 = 1 (residual {res:.3e})")
        object.__setattr__(self, "kind", kind)
        fixed = np.zeros(self.spec.n)
        factors = [SphereFactor(0, p, float(self.a))]
        if q >= 1:
            factors.append(SphereFactor(p + 1, q, float(self.b)))
        else:
            fixed[p + 1] = self.b
        object.__setattr__(self, "factors", tuple(factors))
        object.__setattr__(self, "fixed", fixed)

    @classmethod
    def from_radii_sq(cls, spec: QuadricSpec, a_sq, b_sq, sign=1.0):
        """Build from squared radii; ``sign`` picks the hypersphere height side."""
        b = np.sqrt(b_sq)
        return cls(spec, float(np.sqrt(a_sq)), float(b if sign >= 0 else -b))

    @classmethod
    def from_t(cls, spec: QuadricSpec, t):
        """Point ``(c cos t, d sin t)`` on the constraint curve."""
        return cls(spec, float(spec.c * np.cos(t)), float(spec.d * np.sin(t)))

    @property
    def outer(self) -> "ProductImmersion":
        return self

    @property
    def is_equator(self) -> bool:
        return self.kind == "hypersphere" and self.b == 0


@dataclass(frozen=True)
class MinimalInner:
    """Minimal immersion into the round sphere S^sphere_dim(target_radius).

    ``kind`` is one of ``identity``, ``great_sphere`` (``dims = (m,)``) or
    ``clifford_pair`` (``dims = (m1, m2)``, m1 + m2 + 1 = sphere_dim).
    """

    kind: str
    sphere_dim: int
    target_radius: float
    dims: tuple = ()

    def __post_init__(self):
        k, dims = self.sphere_dim, tuple(int(m) for m in self.dims)
        if self.kind == "identity":
            dims = dims or (k,)
            ok = dims == (k,)
        elif self.kind == "great_sphere":
            ok = len(dims) == 1 and 1 <= dims[0] < k
        elif self.kind == "clifford_pair":
            ok = len(dims) == 2 and min(dims) >= 1 and sum(dims) + 1 == k
        else:
            raise InvalidInputError(f"unknown minimal immersion kind {self.kind!r}")
        if not ok:
            raise InvalidInputError(f"dimensions {dims} invalid for {self.kind} into S^{k}")
        if not self.target_radius > 0:
            raise InvalidInputError("target radius must be positive")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def identity(cls, sphere_dim, radius):
        return cls("identity", sphere_dim, radius)

    @classmethod
    def great_sphere(cls, m, sphere_dim, radius):
        return cls("great_sphere", sphere_dim, radius, (m,))

    @classmethod
    def clifford_pair(cls, m1, m2, radius):
        return cls("clifford_pair", m1 + m2 + 1, radius, (m1, m2))

    @classmethod
    def parse(cls, text: str, sphere_dim: int, radius: float) -> "MinimalInner":
        """Parse ``identity``, ``great_sphere:m`` or ``clifford_pair:m1,m2``."""
        kind, _, arg = text.strip().partition(":")
        try:
            dims = tuple(int(s) for s in arg.split(",") if s.strip())
        except ValueError:
            raise InvalidInputError(f"cannot parse inner immersion {text!r}") from None
        return cls(kind, sphere_dim, radius, dims)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def describe(self) -> str:
        if self.kind == "identity":
            return "identity"
        return f"{self.kind}:{','.join(str(m) for m in self.dims)}"

    def factors(self, offset: int) -> list:
        r = self.target_radius
        if self.kind != "clifford_pair":
            return [SphereFactor(offset, self.dims[0], r)]
        m1, m2 = self.dims
        return [SphereFactor(offset, m1, r * np.sqrt(m1 / (m1 + m2))),
                SphereFactor(offset + m1 + 1, m2, r * np.sqrt(m2 / (m1 + m2)))]


@dataclass(frozen=True)
class ComposedImmersion(_Submanifold):
    """Outer product immersion precomposed with minimal immersions into its factor spheres.

    ``inner`` maps into S^p(a); ``inner2`` (torus outers only) maps into
    S^q(b) and defaults to the identity.
    """

    inner: MinimalInner
    outer: ProductImmersion
    inner2: MinimalInner | None = None

    def __post_init__(self):
        spec, outer = self.outer.spec, self.outer
        if self.inner.sphere_dim != spec.p:
            raise ConfigurationError(f"inner immersion targets S^{self.inner.sphere_dim}, outer factor is S^{spec.p}")
        if not np.isclose(self.inner.target_radius, outer.a, rtol=1e-12, atol=0):
            raise ConfigurationError(
                f"inner target radius {self.inner.target_radius} differs from outer radius a = {outer.a}")
        factors = self.inner.factors(0)
        if outer.kind == "torus":
            inner2 = self.inner2 or MinimalInner.identity(spec.q, outer.b)
            if inner2.sphere_dim != spec.q:
                raise ConfigurationError(f"second inner immersion targets S^{inner2.sphere_dim}, outer factor is S^{spec.q}")
            if not np.isclose(inner2.target_radius, outer.b, rtol=1e-12, atol=0):
                raise ConfigurationError(
                    f"second inner target radius {inner2.target_radius} differs from outer radius b = {outer.b}")
            factors += inner2.factors(spec.p + 1)
            object.__setattr__(self, "inner2", inner2)
        elif self.inner2 is not None:
            raise ConfigurationError("a hypersphere outer immersion takes a single inner immersion")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "factors", tuple(factors))
        object.__setattr__(self, "fixed", outer.fixed.copy())

    @property
    def kind(self) -> str:
        return "composed-" + self.outer.kind


class LocalChart:
    """Product of graph charts, one per sphere factor, centred at ``center``.

    On a factor S^k(r) with unit centre direction ``n0`` and tangent basis ``E``
    the chart is ``u -> sqrt(r^2 - |u|^2) n0 + E u``. An optional invertible
    ``mix`` reparametrizes linearly, ``u = mix @ v``, which rotates (or shears)
    the coordinate frame across factors.
    """

    def __init__(self, sub: _Submanifold, center, mix=None):
        self.sub = sub
        center = sub.spec.check(center)
        if not sub.contains(center):
            raise GeometryError("chart centre is not on the submanifold")
        self.center = center
        self._n0, self._E, self._slices = [], [], []
        k0 = 0
        for f in sub.factors:
            n0 = center[f.slice] / np.linalg.norm(center[f.slice])
            self._n0.append(n0)
            self._E.append(_householder_basis(n0))
            self._slices.append(slice(k0, k0 + f.dim))
            k0 += f.dim
        m = sub.dim
        self.mix = np.eye(m) if mix is None else np.asarray(mix, dtype=float)
        if self.mix.shape != (m, m):
            raise InvalidInputError(f"mix must be {m}x{m}")
        self._mix_inv = np.linalg.inv(self.mix)

    @property
    def dim(self) -> int:
        return self.sub.dim

    def _blocks(self, v):
        u = self.mix @ np.asarray(v, dtype=float)
        out = []
        for f, sl in zip(self.sub.factors, self._slices):
            uf = u[sl]
            s2 = f.radius**2 - uf @ uf
            if s2 <= (CHART_EDGE * f.radius) ** 2:
                raise ChartDomainError("chart coordinates reach the edge of the graph chart",
                                       float(np.sqrt(uf @ uf) / f.radius))
            out.append((uf, np.sqrt(s2)))
        return out

    def point(self, v) -> np.ndarray:
        pt = self.sub.fixed.copy()
        for f, n0, E, (uf, s) in zip(self.sub.factors, self._n0, self._E, self._blocks(v)):
            pt[f.slice] = s * n0 + E @ uf
        return pt

    def jacobian(self, v) -> np.ndarray:
        J = np.zeros((self.sub.spec.n, self.dim))
        for f, n0, E, sl, (uf, s) in zip(self.sub.factors, self._n0, self._E,
                                         self._slices, self._blocks(v)):
            J[f.slice, sl] = E - np.outer(n0, uf / s)
        return J @ self.mix

    def hessian(self, v, xi, zeta) -> np.ndarray:
        """Second derivative of the chart map contracted with chart vectors ``xi, zeta``."""
        a, b = self.mix @ np.asarray(xi, dtype=float), self.mix @ np.asarray(zeta, dtype=float)
        out = np.zeros(self.sub.spec.n)
        for f, n0, sl, (uf, s) in zip(self.sub.factors, self._n0, self._slices, self._blocks(v)):
            af, bf = a[sl], b[sl]
            out[f.slice] = (-(af @ bf) / s - (uf @ af) * (uf @ bf) / s**3) * n0
        return out

    def hessian_contract(self, v, A) -> np.ndarray:
        """sum_ij A_ij hessian(v, e_i, e_j) for a symmetric m x m matrix ``A``."""
        M = self.mix @ np.asarray(A, dtype=float) @ self.mix.T
        out = np.zeros(self.sub.spec.n)
        for f, n0, sl, (uf, s) in zip(self.sub.factors, self._n0, self._slices, self._blocks(v)):
            Mf = M[sl, sl]
            out[f.slice] = (-np.trace(Mf) / s - (uf @ Mf @ uf) / s**3) * n0
        return out

    def inverse(self, pt) -> np.ndarray:
        pt = self.sub.spec.check(pt)
        u = np.zeros(self.dim)
        for f, n0, E, sl in zip(self.sub.factors, self._n0, self._E, self._slices):
            x = pt[f.slice]
            if x @ n0 <= CHART_EDGE * f.radius:
                raise ChartDomainError("point lies outside the chart's cap")
            u[sl] = E.T @ x
        return self._mix_inv @ u

    def frame(self, v):
        """Gram-Schmidt of the coordinate vectors.

        Returns ``(E, C)`` with ``E`` (n x m) orthonormal columns and ``C`` the
        chart components of each frame vector, ``jacobian(v) @ C == E``.
        """
        J = self.jacobian(v)
        if not np.array_equal(self.mix, np.eye(self.dim)):
            Q, R = _qr_positive(J)
            return Q, np.linalg.inv(R)
        # block by block, so each frame vector is supported on one factor exactly
        Q, C = np.zeros_like(J), np.zeros((self.dim, self.dim))
        for f, sl in zip(self.sub.factors, self._slices):
            Qf, Rf = _qr_positive(J[f.slice, sl])
            Q[f.slice, sl] = Qf
            C[sl, sl] = np.linalg.inv(Rf)
        return Q, C


def _qr_positive(J):
    Q, R = np.linalg.qr(J)
    sign = np.sign(np.diag(R))
    sign[sign == 0] = 1.0
    return Q * sign, R * sign[:, None]


def _chart_coords(u, m):
    if isinstance(u, ChartPoint):
        u = u.flat()
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape != (m,):
        raise InvalidInputError(f"expected {m} chart coordinates, got shape {u.shape}")
    return u


def embed(imm: ProductImmersion, u) -> np.ndarray:
    """Chart point of the product immersion in the default chart at its base point."""
    return imm.chart().point(_chart_coords(u, imm.dim))


def embed_composed(comp: ComposedImmersion, u) -> np.ndarray:
    return comp.chart().point(_chart_coords(u, comp.dim))


def tangent_frame(sub: _Submanifold, u) -> np.ndarray:
    """Orthonormal tangent frame at chart point ``u``, one vector per row."""
    E, _ = sub.chart().frame(_chart_coords(u, sub.dim))
    return E.T.copy()


def submanifold_normal(imm: _Submanifold, pt) -> GeometryCache:
    """Unnormalized normals of Q and of the outer product immersion at ``pt``.

    eta1_T = ((c^2/a^2) x, -(d^2/b^2) y). The equator hypersphere (b = 0) gets
    the constant unit normal (0, ..., 0, 1).
    """
    outer = imm.outer
    spec = outer.spec
    pt = require_on_quadric(spec, pt)
    eta_q, nq = quadric_normal(spec, pt)
    if outer.is_equator:
        eta_t = np.zeros(spec.n)
        eta_t[-1] = 1.0
        return GeometryCache(eta_q, nq, eta_t, 1.0)
    x, y = spec.split(pt)
    eta_t = spec.join(spec.c**2 / outer.a**2 * x, -(spec.d**2 / outer.b**2) * y)
    return GeometryCache(eta_q, nq, eta_t, float(eta_t @ eta_t))


def is_tangent_to_T(spec: QuadricSpec, pt, v, tol=1e-9) -> bool:
    """Both block pairings <x, X> and <y, Y> vanish."""
    x, y = spec.split(pt)
    X, Y = spec.split(v)
    scale = max(1.0, float(np.linalg.norm(v)))
    return abs(x @ X) <= tol * scale and abs(y @ Y) <= tol * scale
