"""Measurement-driven qubit refrigerator: exact two-stroke cycle simulator.

The working substance is a single qubit alternating between a projective
measurement in an arbitrary Bloch basis and an outcome-conditioned thermal
bath contact.  The package computes the exact per-cycle steady-state
thermodynamics (work, heats, information gain, entropy production, COP) and
drives deterministic parameter sweeps over any cycle parameter.
"""

from .chain import backend_name
from .cycle import (
    CopBound,
    CycleReport,
    CycleSpec,
    EquilibriumHeatRatio,
    LimitCycleStep,
    MonteCarloEstimate,
    TransitionKernel,
    cop_bound_check,
    cycle_report,
    equilibrium_heat_ratio,
    iterate_limit_cycle,
    monte_carlo_oracle,
    steady_p_plus,
    transition_kernel,
    with_parameter,
)
from .errors import (
    ConfigError,
    DegenerateKernelError,
    DomainError,
    IntegrationError,
    QmcError,
    StateValidationError,
    ValidationError,
)
from .measurement import (
    MeasurementBasis,
    MeasurementOutcome,
    measure,
    measurement_energy_jump,
    projectors,
)
from .qubit import (
    DensityMatrix,
    Hamiltonian,
    bloch_coordinates,
    eigvals_2x2,
    energy_expectation,
    von_neumann_entropy,
)
from .thermal import (
    BathSpec,
    ChannelOptions,
    evolve,
    evolve_ode_oracle,
    kraus_apply,
    kraus_operators,
    planck_occupation,
)

__version__ = "0.1.0"

__all__ = [
    "BathSpec",
    "ChannelOptions",
    "ConfigError",
    "CopBound",
    "CycleReport",
    "CycleSpec",
    "DegenerateKernelError",
    "DensityMatrix",
    "DomainError",
    "EquilibriumHeatRatio",
    "Hamiltonian",
    "IntegrationError",
    "LimitCycleStep",
    "MeasurementBasis",
    "MeasurementOutcome",
    "MonteCarloEstimate",
    "QmcError",
    "StateValidationError",
    "TransitionKernel",
    "ValidationError",
    "backend_name",
    "bloch_coordinates",
    "cop_bound_check",
    "cycle_report",
    "eigvals_2x2",
    "energy_expectation",
    "equilibrium_heat_ratio",
    "evolve",
    "evolve_ode_oracle",
    "iterate_limit_cycle",
    "kraus_apply",
    "kraus_operators",
    "measure",
    "measurement_energy_jump",
    "monte_carlo_oracle",
    "planck_occupation",
    "projectors",
    "steady_p_plus",
    "transition_kernel",
    "von_neumann_entropy",
    "with_parameter",
    "__version__",
]
