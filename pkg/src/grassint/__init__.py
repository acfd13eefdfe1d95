"""Integral geometry on real Grassmannians.

Monte Carlo cosine, sine, and Radon transforms, highest-weight harmonic
analysis with a numerical range verifier, projection valuations on convex
polytopes, and the Zelevinsky segment combinatorics mirroring the same
transforms on the p-adic side.
"""

from .functions import (GrassmannFunction, PolynomialObservable,
                        QuadratureSpec, TransformOp)
from .sampling import SeededSampler
from .subspaces import (Rotation, Subspace, cos_angle, complement,
                        haar_rotation, haar_subspace, make_subspace,
                        principal_angles, sin_angle)
from .weights import HighestWeight, admissible_weights, weyl_dimension
from .characters import character_value
from .harmonics import isotypic_project, range_predicate, schur_scalar
from .transforms import (apply_transform, cosine_transform,
                         equivariance_residual, estimate_composition_constant,
                         radon_transform, sample_containing, sine_transform)

__version__ = "0.1.0"
