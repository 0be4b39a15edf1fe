"""Exact calculus for incompatible matrix fields and finite-difference
estimation of the associated coercivity (Korn-type) constants.

The package has two halves.  The exact half verifies pointwise tensor
identities, matrix-curl / incompatibility calculus, Nye's formulas and the
finite-dimensional rigidity kernels with rational arithmetic and zero
residual.  The numerical half discretizes matrix fields on box-union grids,
imposes the tangential-trace boundary condition strongly, and estimates the
best constants through symmetric generalized eigenvalue problems.
"""

from .fields import KERNEL_DIMS
from .grid import Grid, build_grid
from .identities import run_identity_suite
from .poly import Poly, box_integrate
from .spectra import (
    SpectrumReport,
    Variant,
    assemble_forms,
    baby_korn_check,
    estimate_constant,
    kernel_dimension,
    norm_equivalence_constant,
    smallest_eigs,
)
from .tensors import Mat3, Skew3, Vec3

__version__ = "0.1.0"

__all__ = [
    "Grid", "KERNEL_DIMS", "Mat3", "Poly", "Skew3", "SpectrumReport",
    "Variant", "Vec3", "assemble_forms", "baby_korn_check", "box_integrate",
    "build_grid", "estimate_constant", "kernel_dimension",
    "norm_equivalence_constant", "run_identity_suite", "smallest_eigs",
    "__version__",
]
