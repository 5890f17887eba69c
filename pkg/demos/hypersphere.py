"""Hyperspheres S^p(a) x {b} cut from an ellipsoid by a horizontal slice.

The equator (b = 0) is totally geodesic. The two slices at the biharmonic
radius, one for each sign of b, are proper biharmonic.

    python demos/hypersphere.py [p c d]
"""
import sys

import numpy as np

from biharmonic_ellipsoids import closed_form as cf
from biharmonic_ellipsoids.immersions import ProductImmersion
from biharmonic_ellipsoids.numeric import DerivativeConfig, bitension_numeric, tension_numeric
from biharmonic_ellipsoids.quadric import QuadricSpec


def main(p=2, c=1.0, d=2.0):
    spec = QuadricSpec(p, 0, c, d)
    cfg = DerivativeConfig.fourth_order()
    eq = ProductImmersion(spec, c, 0.0)
    print(f"equator |tau| = {np.linalg.norm(tension_numeric(eq, eq.base_point(), cfg).tau):.2e}")
    r = cf.biharmonic_radii(p, 0, c, d)
    for sign in (1.0, -1.0):
        imm = ProductImmersion.from_radii_sq(spec, r.a_sq, r.b_sq, sign)
        s = cf.hypersphere_scalars(p, c, d, imm.a, imm.b)
        n = bitension_numeric(imm, imm.base_point(), cfg).norms()
        print(f"b = {imm.b:+.6f}: lambda={s.lambda_:+.4e}  |tau|={n['tau']:.4f}  "
              f"|tau2|/|Delta tau|={n['tau2'] / n['delta_tau']:.2e}")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(int(args[0]), float(args[1]), float(args[2])) if args else main()
