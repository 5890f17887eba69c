"""Walk along the constraint curve of a product torus in an ellipsoid.

Prints the closed-form tension and bitension scalars at the minimal and
biharmonic radii, then compares the normal bitension with a finite-difference
evaluation at a random point.

    python demos/torus_walkthrough.py [p q c d]
"""
import sys

import numpy as np

from biharmonic_ellipsoids import closed_form as cf
from biharmonic_ellipsoids.immersions import ProductImmersion
from biharmonic_ellipsoids.numeric import DerivativeConfig, bitension_numeric
from biharmonic_ellipsoids.quadric import QuadricSpec


def main(p=1, q=2, c=2.0, d=1.0):
    spec = QuadricSpec(p, q, c, d)
    rng = np.random.Generator(np.random.Philox(key=7))
    cfg = DerivativeConfig.fourth_order()
    for name, r in (("minimal", cf.minimality_radii(p, q, c, d)),
                    ("biharmonic", cf.biharmonic_radii(p, q, c, d))):
        s = cf.torus_scalars(p, q, c, d, r.a, r.b)
        print(f"{name:10s} a^2={r.a_sq:.6f} b^2={r.b_sq:.6f}  lambda={s.lambda_:+.3e}  "
              f"normal bitension={s.normal_bitension:+.3e}")
    r = cf.biharmonic_radii(p, q, c, d)
    imm = ProductImmersion.from_radii_sq(spec, r.a_sq, r.b_sq)
    rep = bitension_numeric(imm, imm.random_point(rng), cfg)
    n = rep.norms()
    print(f"numeric at biharmonic radii: |tau|={n['tau']:.4f}  |tau2|/|Delta tau|={n['tau2'] / n['delta_tau']:.2e}")
    print("\n    t       lambda       nb closed     nb numeric")
    for t in np.linspace(0.1, 1.4, 6):
        imm = ProductImmersion.from_t(spec, float(t))
        s = cf.torus_scalars(p, q, c, d, imm.a, imm.b)
        rep = bitension_numeric(imm, imm.random_point(rng), cfg)
        print(f"{t:6.3f}  {s.lambda_:+.4e}  {s.normal_bitension:+.6e}  {rep.normal_component:+.6e}")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(*(int(a) for a in args[:2]), *(float(a) for a in args[2:4])) if args else main()
