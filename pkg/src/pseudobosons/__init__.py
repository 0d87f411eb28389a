"""Exact polynomial-times-Gaussian algebra for two-dimensional pseudo-bosons."""

from .affine import AffineOp, adjoint, apply_affine, apply_sequence, commutator_scalar
from .bicoherent import (BicoherentPair, QuadratureGrid4D, bicoherent_pair, series_coherent,
                         series_vs_closed, weak_resolution_identity)
from .dho import (DHODerived, DHOParams, build_dho, dho_algebra_check, hamiltonian_identity_check,
                  obstruction_sweep, ratio_constraint, solve_ratio_constraint, vacuum_feasibility)
from .errors import *  # noqa: F401,F403
from .gll import (FamilyTable, GLLParams, biorthogonality_matrix, build_gll, eigen_residuals,
                  generate_family, metric_ops_check, riesz_diagnostic)
from .polygauss import (PolyGauss, QuadExponent, distance, gaussian_base_integral, gaussian_moments,
                        gram_matrix, inner_product, norm)

__version__ = "0.1.0"
