"""Classical and quantum correlation between orbitals of a CI wavefunction."""

from .ci import CIVector, build_state, load_civec, parse_civec, serialize_civec, write_civec
from .errors import (
    NumericalConsistencyError,
    OptimizerError,
    OrbcorrError,
    ParseError,
    ValidationError,
)
from .fock import ModeLabel, OccupationPattern, SparsePureState, default_labels
from .measures import (
    PairDecomposition,
    classical_correlation,
    mutual_information,
    pair_decomposition,
    quantum_discord,
    von_neumann_entropy,
)
from .negativity import (
    fermionic_log_negativity,
    fermionic_partial_transpose,
    qubit_log_negativity,
)
from .reduction import (
    ReducedDensityMatrix,
    constant_orbitals,
    partial_trace,
    project_local_ssr,
    projection_entropy_cost,
    reduced_density_from_state,
    sector_weights,
)
from .report import Report, RunConfig, run_entropy_cost, run_report

__version__ = "0.1.0"

__all__ = [
    "CIVector",
    "ModeLabel",
    "NumericalConsistencyError",
    "OccupationPattern",
    "OptimizerError",
    "OrbcorrError",
    "PairDecomposition",
    "ParseError",
    "ReducedDensityMatrix",
    "Report",
    "RunConfig",
    "SparsePureState",
    "ValidationError",
    "build_state",
    "classical_correlation",
    "constant_orbitals",
    "default_labels",
    "fermionic_log_negativity",
    "fermionic_partial_transpose",
    "load_civec",
    "mutual_information",
    "pair_decomposition",
    "parse_civec",
    "partial_trace",
    "project_local_ssr",
    "projection_entropy_cost",
    "quantum_discord",
    "qubit_log_negativity",
    "reduced_density_from_state",
    "run_entropy_cost",
    "run_report",
    "sector_weights",
    "serialize_civec",
    "von_neumann_entropy",
    "write_civec",
]
