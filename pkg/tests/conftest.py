import numpy as np
import pytest

from biharmonic_ellipsoids.immersions import ProductImmersion
from biharmonic_ellipsoids.quadric import QuadricSpec

DIMS = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (1, 3), (2, 3), (3, 3)]
AXES = [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0), (1.0, 3.0), (3.0, 2.0)]


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=12345))


def torus(p, q, c, d, t=0.6):
    return ProductImmersion.from_t(QuadricSpec(p, q, c, d), t)


def tangent_vectors(sub, pt, rng, k=2):
    P = sub.tangent_projector(pt)
    return [P @ rng.standard_normal(sub.spec.n) for _ in range(k)]


def quadric_tangent(spec, pt, rng):
    from biharmonic_ellipsoids.quadric import project_tangent_quadric
    return project_tangent_quadric(spec, pt, rng.standard_normal(spec.n))
