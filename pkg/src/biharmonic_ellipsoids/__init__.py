"""Biharmonic product immersions into ellipsoids.

Closed-form tension and bitension coefficients for generalized Clifford
tori S^p(a) x S^q(b) and hyperspheres S^p(a) x {b} inside the ellipsoid
|x|^2/c^2 + |y|^2/d^2 = 1, an independent finite-difference pipeline that
recomputes them, and classification of the minimal and proper-biharmonic
radii along the constraint curve.
"""
from .classify import Classification, Loci, SweepRow, classify, find_loci, sign_changes, sweep
from .closed_form import (ClosedFormReport, RadiiPair, biharmonic_radii, composed_pair_scalars,
                          composed_scalars, hypersphere_scalars, lambda_torus, minimality_radii,
                          mu_torus, normal_bitension_torus, torus_scalars)
from .errors import (BiharmonicError, ChartDomainError, ConfigurationError, CrossCheckError,
                     GeometryError, InvalidInputError, NotApplicableError)
from .immersions import ComposedImmersion, MinimalInner, ProductImmersion
from .numeric import DerivativeConfig, bitension_numeric, rough_laplacian_numeric, sff_T, tension_numeric
from .quadric import QuadricSpec

__version__ = "0.1.0"

__all__ = [
    "BiharmonicError", "ChartDomainError", "Classification", "ClosedFormReport", "ComposedImmersion",
    "ConfigurationError", "CrossCheckError", "DerivativeConfig", "GeometryError", "InvalidInputError",
    "Loci", "MinimalInner", "NotApplicableError", "ProductImmersion", "QuadricSpec", "RadiiPair",
    "SweepRow", "biharmonic_radii", "bitension_numeric", "classify", "composed_pair_scalars",
    "composed_scalars", "find_loci", "hypersphere_scalars", "lambda_torus", "minimality_radii",
    "mu_torus", "normal_bitension_torus", "rough_laplacian_numeric", "sff_T", "sign_changes", "sweep",
    "tension_numeric", "torus_scalars",
]
