"""palinverse: inverse eigenvalue problems for quadratic palindromic systems.

Construct coefficient matrices from prescribed eigenpairs, update an
existing system's eigenvalues with no spillover, and forward-solve for
verification, across all four transpose / conjugate-transpose
(anti-)palindromic symmetry classes.
"""

from .errors import PalinverseError
from .system import (ALL_CLASSES, HA, HP, TA, TP, PalindromicSystem,
                     StandardPair, SymmetryClass, eval_Q,
                     palindromic_identity_check, pair_residual)
from .numerics import dense_eig, linear_solve, rank_factorize
from .structfact import (DeltaPattern, StarFactorization, build_delta,
                         inertia, star_factorize)
from .paramspace import (PJCF, SBasis, pascal_matrix, pascal_scaling,
                         s_basis, s_basis_pjcf, sample_nonsingular,
                         solve_constrained_S)
from .spectral import coefficients_from_pair, parameter_from_pair
from .forward import EigenPairSet, eig_full, linearize, select_pairs
from .iep import IepProblem, solve_iep_full, solve_iep_partial, solve_psi
from .mup import (MupProblem, compute_S1, update_model,
                  update_model_prescribed)
from .analysis import (ZetaPartition, joint_block_diagonalize,
                       s_space_dimension, zeta_partition)
from .fileio import load_pair, load_system, save_pair, save_system

__version__ = "0.1.0"

__all__ = [
    "ALL_CLASSES", "DeltaPattern", "EigenPairSet", "HA", "HP", "IepProblem",
    "MupProblem", "PJCF", "PalindromicSystem", "PalinverseError", "SBasis",
    "StandardPair", "StarFactorization", "SymmetryClass", "TA", "TP",
    "ZetaPartition", "build_delta", "coefficients_from_pair", "compute_S1",
    "dense_eig", "eig_full", "eval_Q", "inertia", "joint_block_diagonalize",
    "linear_solve", "linearize", "load_pair", "load_system",
    "pair_residual", "palindromic_identity_check", "parameter_from_pair",
    "pascal_matrix", "pascal_scaling", "rank_factorize", "s_basis",
    "s_basis_pjcf", "s_space_dimension", "sample_nonsingular", "save_pair",
    "save_system", "select_pairs", "solve_constrained_S", "solve_iep_full",
    "solve_iep_partial", "solve_psi", "star_factorize", "update_model",
    "update_model_prescribed", "zeta_partition",
]
