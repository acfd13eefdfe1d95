"""Shadows of a cube and the valuation they generate.

The average shadow area of the unit cube over random directions in R^3 is
a classical quarter-surface-area fact: 6/4 = 1.5.  The same average, with
a weight function on the direction, is a translation-invariant valuation;
restricting it to planes and dividing by area recovers the cosine
transform of the weight.
"""
import numpy as np

from grassint.functions import PolynomialObservable, QuadratureSpec
from grassint.sampling import SeededSampler
from grassint.subspaces import Subspace, haar_frames
from grassint.valuations import (box, check_axioms, cube_in_subspace,
                                 klain_section, make_projection_valuation,
                                 projection_valuation, theorem13_residual)


def main():
    q = QuadratureSpec(2000, SeededSampler(0))
    cube = box([0, 0, 0], [1, 1, 1])

    one = PolynomialObservable.constant(3, 1, 1.0)
    value, stderr = projection_valuation(one, cube, q)
    print(f"mean shadow area of the unit cube: {value:.4f} +- {stderr:.4f}"
          f"   (exact: 1.5)")

    phi = make_projection_valuation(one, q)
    report = check_axioms(phi, trials=10)
    for name in ("additivity", "evenness", "translation"):
        entry = report[name]
        print(f"{name:12s} worst residual {entry['worst']:.2e}  ok={entry['ok']}")
    slopes = report["homogeneity"]["slopes"]
    print(f"homogeneity  slopes {np.round(slopes, 6)}  (degree 2)")

    # the restriction density is the same number on every probe body
    e = Subspace(haar_frames(3, 2, 1, SeededSampler(5).next_rng())[0])
    small = cube_in_subspace(e, 0.37).translate(e.frame @ np.array([0.2, -0.4]))
    print(f"section on a plane, two probes: {klain_section(phi, e):.6f}"
          f" vs {klain_section(phi, e, small):.6f}")

    resid, err = theorem13_residual(one, QuadratureSpec(1024, SeededSampler(3)),
                                    probes=5)
    print(f"density vs cosine transform, worst gap: {resid:.2e}"
          f" (noise scale {err:.2e})")


if __name__ == "__main__":
    main()
