"""Five-level four-pulse phase-sensitive STIRAP toolkit.

Design a control pulse that places a third node of the dark eigenstate on an
unwanted target state (or an arbitrary superposition of the two degenerate
targets), then verify the transfer by direct propagation.
"""

from .design import (
    DesignProblem,
    DesignSolution,
    check_restriction,
    control_peak_rabi,
    design_control_pulse,
    solve_amplitude,
    solve_phase,
    solve_timing,
)
from .errors import (
    AccidentalNullSpace,
    ConfigError,
    DegenerateCase,
    GridTooCoarse,
    IndeterminateBranching,
    NoPositiveWidth,
    PulseRoleError,
    RestrictionViolated,
    StirapError,
    ZeroDipole,
)
from .propagate import (
    AdiabaticityReport,
    TimeGrid,
    Trajectory,
    adiabaticity_report,
    branching_ratio,
    channel_yields,
    default_grid,
    null_state_fidelity,
    perturbative_yield,
    propagate,
)
from .pulse import (
    RABI_UNIT_FIELD,
    DipoleCoupling,
    PulseEnvelope,
    PulseRole,
    RabiSet,
    rabi_set,
)
from .spectrum import (
    DressedSpectrum,
    NullEigenvector,
    dressed_spectrum,
    node_residual,
    nonzero_eigenvalues,
    null_eigenvector,
)
from .superposition import (
    TargetSuperposition,
    entangled_representation,
    project_onto_targets,
    rotated_dipoles,
    rotated_system,
)
from .system import FiveLevelSystem, build_hamiltonian, couplings_accidental

__version__ = "0.1.0"

__all__ = [
    "AccidentalNullSpace",
    "AdiabaticityReport",
    "ConfigError",
    "DegenerateCase",
    "DesignProblem",
    "DesignSolution",
    "DipoleCoupling",
    "DressedSpectrum",
    "FiveLevelSystem",
    "GridTooCoarse",
    "IndeterminateBranching",
    "NoPositiveWidth",
    "NullEigenvector",
    "PulseEnvelope",
    "PulseRole",
    "PulseRoleError",
    "RABI_UNIT_FIELD",
    "RabiSet",
    "RestrictionViolated",
    "StirapError",
    "TargetSuperposition",
    "TimeGrid",
    "Trajectory",
    "ZeroDipole",
    "adiabaticity_report",
    "branching_ratio",
    "build_hamiltonian",
    "channel_yields",
    "check_restriction",
    "control_peak_rabi",
    "couplings_accidental",
    "default_grid",
    "design_control_pulse",
    "dressed_spectrum",
    "entangled_representation",
    "node_residual",
    "nonzero_eigenvalues",
    "null_eigenvector",
    "null_state_fidelity",
    "perturbative_yield",
    "project_onto_targets",
    "propagate",
    "rabi_set",
    "rotated_dipoles",
    "rotated_system",
    "solve_amplitude",
    "solve_phase",
    "solve_timing",
]
