"""Mean-energy gain of quantum oscillators under cyclic frequency variation.

The package propagates a harmonic oscillator with time-dependent frequency
through its 2x2 symplectic Heisenberg matrix, in closed form for three
frequency families (inverse-linear, power-law, exponential) and by adaptive
integration for everything else, and exposes the machinery around the core
statement: a stationary state taken around any frequency cycle ends with
mean energy E_fin = R E_in, R = Tr[S S^T]/2 >= 1.
"""

from .errors import (
    DomainError,
    IntegrationError,
    QuadratureError,
    SymplecticError,
)
from .core import (
    DET_TOL_INPUT,
    DET_TOL_PROPAGATOR,
    BogoliubovPair,
    EvolutionMatrix,
    MomentTriple,
    StationaryState,
    bogoliubov_energy,
    compose,
    final_energy,
    final_energy_general,
    gain_factor,
    random_symplectic,
    to_bogoliubov,
    transport_moments,
)
from .profiles import (
    Custom,
    Exponential,
    FrequencyProfile,
    InverseLinear,
    Piecewise,
    PowerLaw,
    Tabulated,
    TimeReversed,
)
from .closed_form import (
    ExponentPair,
    asymptotic_energy,
    energy_inverse_linear,
    exponent_pair,
    propagate_exponential,
    propagate_inverse_linear,
    propagate_power_law,
)
from .ode import (
    DEFAULT_CONFIG,
    ForcedResult,
    IntegratorConfig,
    forced_final_energy,
    propagate_forced,
    propagate_ode,
)
from .cycles import (
    FAMILIES,
    CycleSpec,
    GridAxis,
    ScanResult,
    ScanRow,
    build_cycle,
    cycle_gain,
    find_unity_points,
    random_cycle_gain,
    random_fourier_profile,
    random_piecewise_cycle,
    scan_gain,
)
from .perturbation import (
    Drive,
    InequalityReport,
    OperatorMatrix,
    check_inequality,
    first_order_energy_shift,
    transition_probability,
    x_power_matrix,
)
from .cavity import (
    BOLTZMANN_K,
    LIGHT_C,
    PLANCK_H,
    STEFAN_SIGMA,
    WIEN_X,
    CavitySpec,
    MultimodeBogoliubov,
    PlanckShift,
    SonoEstimate,
    SpectrumSample,
    multimode_from_hamiltonian,
    phonon_number_final,
    planck_density,
    random_coupling,
    shift_planck_spectrum,
    sonoluminescence_estimate,
    thermal_gain,
    thermal_occupation,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "DomainError",
    "IntegrationError",
    "QuadratureError",
    "SymplecticError",
    # core
    "DET_TOL_INPUT",
    "DET_TOL_PROPAGATOR",
    "BogoliubovPair",
    "EvolutionMatrix",
    "MomentTriple",
    "StationaryState",
    "bogoliubov_energy",
    "compose",
    "final_energy",
    "final_energy_general",
    "gain_factor",
    "random_symplectic",
    "to_bogoliubov",
    "transport_moments",
    # profiles
    "Custom",
    "Exponential",
    "FrequencyProfile",
    "InverseLinear",
    "Piecewise",
    "PowerLaw",
    "Tabulated",
    "TimeReversed",
    # closed forms
    "ExponentPair",
    "asymptotic_energy",
    "energy_inverse_linear",
    "exponent_pair",
    "propagate_exponential",
    "propagate_inverse_linear",
    "propagate_power_law",
    # numeric propagation
    "DEFAULT_CONFIG",
    "ForcedResult",
    "IntegratorConfig",
    "forced_final_energy",
    "propagate_forced",
    "propagate_ode",
    # cycles and scans
    "FAMILIES",
    "CycleSpec",
    "GridAxis",
    "ScanResult",
    "ScanRow",
    "build_cycle",
    "cycle_gain",
    "find_unity_points",
    "random_cycle_gain",
    "random_fourier_profile",
    "random_piecewise_cycle",
    "scan_gain",
    # perturbation
    "Drive",
    "InequalityReport",
    "OperatorMatrix",
    "check_inequality",
    "first_order_energy_shift",
    "transition_probability",
    "x_power_matrix",
    # multimode and cavity
    "BOLTZMANN_K",
    "LIGHT_C",
    "PLANCK_H",
    "STEFAN_SIGMA",
    "WIEN_X",
    "CavitySpec",
    "MultimodeBogoliubov",
    "PlanckShift",
    "SonoEstimate",
    "SpectrumSample",
    "multimode_from_hamiltonian",
    "phonon_number_final",
    "planck_density",
    "random_coupling",
    "shift_planck_spectrum",
    "sonoluminescence_estimate",
    "thermal_gain",
    "thermal_occupation",
]
