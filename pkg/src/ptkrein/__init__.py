"""Spectral and dynamical tools for PT-symmetric Schrodinger problems.

The package covers the full workflow on a symmetric finite interval:
parsing complex polynomial potentials, building and diagonalizing the
discrete Hamiltonian, an independent shooting cross-check, the indefinite
(Krein) scalar product with its classification and superselection rules,
probability currents, transition amplitudes and operator averages, and
norm-preserving Crank-Nicolson time evolution with Ehrenfest diagnostics.
"""

from . import errors
from .config import (
    DomainConfig,
    DynamicsConfig,
    OutputConfig,
    RunConfig,
    ShootingConfig,
    SolverConfig,
    load_config,
)
from .dynamics import (
    EhrenfestResult,
    Trajectory,
    ehrenfest_residual,
    ehrenfest_residual_series,
    evolve,
    step_crank_nicolson,
)
from .eigensolver import (
    EigenPair,
    HamiltonianOp,
    build_hamiltonian,
    gram_matrix,
    normalize_and_phase_fix,
    solve_spectrum,
    theta_defect,
)
from .krein import (
    Grid,
    KreinReport,
    SuperpositionCheck,
    WaveFunction,
    apply_parity,
    apply_theta,
    classify_vector,
    hilbert_inner,
    krein_inner,
    momentum_krein_inner,
    parity_decompose,
    validate_superposition,
)
from .observables import (
    ContinuityResult,
    CurrentProfile,
    LinearOperator,
    continuity_check,
    current_density,
    custom_tridiagonal,
    hamiltonian_operator,
    i_x_operator,
    momentum_operator,
    operator_average,
    parity_operator,
    position_operator,
    sample_derivative,
    theta_conjugate,
    transition_amplitude,
)
from .potential import (
    PotentialExpr,
    PTCheck,
    eval_potential,
    format_potential,
    parse_potential,
    validate_pt,
)
from .shooting import refine_eigenvalue_shooting

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Grid",
    "WaveFunction",
    "KreinReport",
    "SuperpositionCheck",
    "apply_parity",
    "apply_theta",
    "parity_decompose",
    "krein_inner",
    "hilbert_inner",
    "momentum_krein_inner",
    "classify_vector",
    "validate_superposition",
    "PotentialExpr",
    "PTCheck",
    "parse_potential",
    "eval_potential",
    "format_potential",
    "validate_pt",
    "HamiltonianOp",
    "EigenPair",
    "build_hamiltonian",
    "solve_spectrum",
    "normalize_and_phase_fix",
    "theta_defect",
    "gram_matrix",
    "refine_eigenvalue_shooting",
    "LinearOperator",
    "CurrentProfile",
    "ContinuityResult",
    "hamiltonian_operator",
    "momentum_operator",
    "i_x_operator",
    "position_operator",
    "parity_operator",
    "custom_tridiagonal",
    "theta_conjugate",
    "sample_derivative",
    "current_density",
    "continuity_check",
    "transition_amplitude",
    "operator_average",
    "Trajectory",
    "EhrenfestResult",
    "step_crank_nicolson",
    "evolve",
    "ehrenfest_residual",
    "ehrenfest_residual_series",
    "RunConfig",
    "DomainConfig",
    "SolverConfig",
    "ShootingConfig",
    "DynamicsConfig",
    "OutputConfig",
    "load_config",
    "__version__",
]
