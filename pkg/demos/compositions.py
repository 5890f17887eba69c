"""Minimal submanifolds of a biharmonic hypersphere slice stay biharmonic.

Composes a Clifford torus and a great 2-sphere with the biharmonic slice of
Q^(p+1)(c, d) and compares |tau| with its closed form.

    python demos/compositions.py
"""
import numpy as np

from biharmonic_ellipsoids.numeric import DerivativeConfig, bitension_numeric
from biharmonic_ellipsoids.verify import composed_closed_form, composed_immersion


def main(p=3, c=1.0, d=2.0):
    cfg = DerivativeConfig.fourth_order()
    for inner in ("great_sphere:2", "clifford_pair:1,1"):
        comp = composed_immersion(p, 0, c, d, inner)
        rep = bitension_numeric(comp, comp.base_point(), cfg)
        n = rep.norms()
        nu = composed_closed_form(comp).nu
        print(f"{comp.inner.describe():>24s}: |tau|={n['tau']:.8f} (closed {nu:.8f})  "
              f"|tau2|/|Delta tau|={n['tau2'] / n['delta_tau']:.2e}")


if __name__ == "__main__":
    main()
