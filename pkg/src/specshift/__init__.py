"""Spectral shift functions and section determinants for rank-one Hermitian pairs."""
from .hermlin import (
    BoundaryCollision,
    ConvergenceError,
    EigenSystem,
    eig_hermitian,
    hermitian,
    jacobi_eigh,
    op_norm,
    spectral_projector,
)
from .pairmodel import (
    Classification,
    IntervalSet,
    MatrixPair,
    RankOnePair,
    classify_boundary,
    deflate_pair,
    lanczos_deflate,
    make_matrix_pair,
    make_pair,
)
from .ssf import StepFunction, birman_solomyak_check, ssf_l1, ssf_of_pair
from .dets import (
    cauchy_det_closed,
    diff_sq_det,
    index_trace,
    residue_weights,
    section_det,
    section_det_dual,
)
from .xint import (
    interaction_closed,
    interaction_quadrature,
    theorem_residual,
    xi_interaction,
    xi_minus_one_interaction,
)
from .perturb import convergence_study, subspace_bound_check, truncate_filter

__version__ = "0.1.0"
