"""Numerical tests of cyclic charge-3 monopole spectral curves.

The curve eta^3 + chi (zeta^6 + b zeta^3 - 1) = 0 is labelled by a coprime
pair (m, n).  Submodules:

specfun
    Gauss hypergeometric function and the solve for (b, chi).
theta
    Jacobi and Riemann theta functions with characteristics.
symplectic
    Integer symplectic matrices acting on periods and characteristics.
curve_pipeline
    Periods, period matrices, winding vectors and the lattice checks.
vanishing
    The elliptic functions h_k and the zero count deciding the verdict.
"""

from .curve_pipeline import MonopoleIndex, admissible_indices, run_pipeline
from .vanishing import count_zeros

__version__ = "0.1.0"

__all__ = ["MonopoleIndex", "admissible_indices", "run_pipeline", "count_zeros", "__version__"]
