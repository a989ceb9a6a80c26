"""Entanglement of two remote qubits, each driven by its own resonant
quantized field: exact double Jaynes-Cummings dynamics, concurrence and the
coherent-state X-state series."""

__version__ = "0.1.0"

from .analysis import RevivalReport, TimeSeries, analyze, detect_esd_intervals, detect_revivals, measure_period
from .concurrence import (
    ConcurrenceDiagnostics,
    TwoQubitDensity,
    XStateElements,
    concurrence,
    hermitian_eigenvalues_4x4,
    reduce_to_qubits,
    x_concurrence,
    x_project,
)
from .errors import ConfigurationError, ContractViolation, InsufficientDataError, TruncationError
from .fock import (
    FieldSpec,
    JointState,
    build_fock_state,
    build_initial_state,
    evolve,
    evolve_ode_oracle,
    poisson_amplitude,
)
from .series import approx_lambda, series_a, series_d, series_z

__all__ = [
    "ConcurrenceDiagnostics",
    "ConfigurationError",
    "ContractViolation",
    "FieldSpec",
    "InsufficientDataError",
    "JointState",
    "RevivalReport",
    "TimeSeries",
    "TruncationError",
    "TwoQubitDensity",
    "XStateElements",
    "analyze",
    "approx_lambda",
    "build_fock_state",
    "build_initial_state",
    "concurrence",
    "detect_esd_intervals",
    "detect_revivals",
    "evolve",
    "evolve_ode_oracle",
    "hermitian_eigenvalues_4x4",
    "measure_period",
    "poisson_amplitude",
    "reduce_to_qubits",
    "series_a",
    "series_d",
    "series_z",
    "x_concurrence",
    "x_project",
]
