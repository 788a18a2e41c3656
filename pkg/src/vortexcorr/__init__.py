"""Spatial one- and two-particle correlations of two-mode vortex states.

Core layers, bottom up: `modes` (the two-dimensional harmonic-oscillator
mode pair in its vortex and dipole bases), `fock` (two-mode second
quantization: states, correlators, basis changes), `density` (one- and
two-particle position densities), `pairstats` (distance / angle laws of
the detected pair), `sampler` (reproducible single-shot frames),
`oracle` (independent reference implementation and claim cross-checks),
`cli` (file-producing command line).
"""

from .errors import (AlgebraInconsistencyError, AnisotropicStateError,
                     EmptyFramesError, NoPairsError, OrderLimitError,
                     PauliViolationError, QuadratureError,
                     SamplerMethodError, TruncationError,
                     UnsupportedStateError, VortexError)
from .fock import (Basis, Correlators, QuantumState, Statistics,
                   change_basis, make_coherent, make_cothermal, make_fock,
                   make_noon, make_thermal, mean_number, mode_occupations,
                   pair_moment)
from .modes import (DIPOLE_PAIR, DIPOLE_X, DIPOLE_Y, VORTEX_CCW, VORTEX_CW,
                    VORTEX_PAIR, Mode, Point2D, hermite_mode, mode_eval,
                    overlap, rotate_xy)
from .density import (DensityField, PairDensity, density_grid, rho1,
                      rho1_closed, rho2, rho2_closed, rho2_polar)
from .pairstats import (DistSummary, PairDistribution, PairVariable,
                        analytic_distance, angle_distribution,
                        closed_form_angle, closed_form_distance,
                        closed_form_two_angle, compose_distance_samples,
                        distance_distribution, summarize,
                        two_angle_distribution)
from .sampler import (Frame, FrameSet, FrameStream, chi_square_gof,
                      counter_uniforms, empirical_pair_stats,
                      empirical_profile, generate_frames, invert_radial_cdf,
                      load_frames, pair_angles, pair_separations,
                      sample_pair, save_frames)
from .oracle import (DiscrepancyReport, all_engine_checks_confirmed,
                     cross_validate, full_report, reference_rho2)
from .states import (KINDS, SpecError, StateSpec, bose_fock, build_state,
                     coherent, cothermal, fermi_fock, noon, parse_complex,
                     spec_from_dict, spec_to_dict, thermal)
from .version import VERSION

__version__ = VERSION

__all__ = [
    "AlgebraInconsistencyError", "AnisotropicStateError", "Basis",
    "Correlators", "DIPOLE_PAIR", "DIPOLE_X", "DIPOLE_Y", "DensityField",
    "DiscrepancyReport", "DistSummary", "EmptyFramesError", "Frame",
    "FrameSet", "FrameStream", "KINDS", "Mode", "NoPairsError",
    "OrderLimitError", "PairDensity", "PairDistribution", "PairVariable",
    "PauliViolationError", "Point2D", "QuadratureError", "QuantumState",
    "SamplerMethodError", "SpecError", "StateSpec", "Statistics",
    "TruncationError", "UnsupportedStateError", "VERSION", "VORTEX_CCW",
    "VORTEX_CW", "VORTEX_PAIR", "VortexError", "all_engine_checks_confirmed",
    "analytic_distance",
    "angle_distribution", "bose_fock", "build_state", "change_basis",
    "chi_square_gof", "closed_form_angle", "closed_form_distance",
    "closed_form_two_angle", "coherent", "compose_distance_samples",
    "cothermal", "counter_uniforms", "cross_validate", "density_grid",
    "distance_distribution", "empirical_pair_stats", "empirical_profile",
    "fermi_fock", "full_report", "generate_frames", "hermite_mode",
    "invert_radial_cdf", "load_frames", "make_coherent", "make_cothermal",
    "make_fock", "make_noon", "make_thermal", "mean_number", "mode_eval",
    "mode_occupations", "noon", "overlap", "pair_angles", "pair_moment",
    "pair_separations", "parse_complex",
    "reference_rho2", "rho1", "rho1_closed", "rho2", "rho2_closed",
    "rho2_polar", "rotate_xy", "sample_pair", "save_frames",
    "spec_from_dict", "spec_to_dict", "summarize", "thermal",
    "two_angle_distribution",
]
