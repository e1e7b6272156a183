"""Deformed oscillators and nonlinear coherent states.

Construction of f-deformed ladder algebras, truncated-Fock nonlinear
coherent states (single-mode, zero-sector, two-mode), photon
statistics, quadrature squeezing/correlation, Wigner and Husimi fields,
deformed thermodynamics and classical reparametrized orbits.
"""

from .deformation import (
    DeformationSpec,
    commutator_F,
    convergence_radius,
    energy_level,
    energy_levels,
    eval_f,
    evolution_phase,
    f_from_F,
    f_from_G,
    f_log_factorial,
    f_log_factorial_array,
    harmonious,
    identity,
    q_commutator_G,
    q_deform,
    ratio_test_radius,
    spec_from_json,
    spec_to_json,
    tabulated,
    transition_frequency,
    zero_sector,
)
from .state import (
    FCoherentState,
    Truncation,
    TwoModeFCoherentState,
    build_sector_state,
    build_state,
    build_two_mode_joint,
    build_two_mode_product,
    evolve,
    f_from_coefficients,
    inner_product,
    moment_residuals,
    state_from_json,
    state_to_json,
    two_mode_from_json,
    two_mode_to_json,
)
from .statistics import (
    PhotonStats,
    TwoModeDistribution,
    photon_distribution,
    photon_stats,
    two_mode_distribution,
)
from .quadrature import LadderMeans, QuadratureReport, ladder_means, quadrature_report
from .phasespace import (
    FieldOnGrid,
    PhaseSpaceGrid,
    bargmann_overlap,
    coordinate_wavefunction,
    husimi,
    husimi_harmonious_form,
    husimi_q_form,
    normalization_residual,
    wigner,
    wigner_harmonious_form,
    wigner_q_form,
)
from .thermo import (
    ThermoPoint,
    blue_shift,
    deformed_bose_perturbative,
    partition_function,
    q_planck_perturbative,
    specific_heat,
    thermal_mean_n,
    thermo_point,
)
from .classical import (
    ClassicalOrbit,
    ClassicalSystem,
    classical_frequency,
    deformed_bracket,
    digamma,
    exact_orbit,
    gamma_factorial_bracket,
    q_closed_form,
    rk4_orbit,
    system_from_exprs,
)
from . import errors

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
