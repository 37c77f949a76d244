"""Phase-generalized search simulator.

Two engines over one algebra: a dense register engine that stores all N
amplitudes, and a reduced engine that tracks only the common amplitude of
the marked states and the common amplitude of the unmarked ones. The
package solves for the oracle phase that finishes search in a single
query whenever at least a quarter of the states are marked, iterates
arbitrary (beta, gamma) phase pairs, and scans residual surfaces over
phase grids. Hot dense-engine loops run on a compiled kernel backend
with a pure-numpy fallback; see phasegrover._kernels.
"""

from ._kernels import BACKEND as kernel_backend
from .collapsed import (
    CollapsedState,
    PhasePair,
    TrajectoryRecord,
    collapsed_success_probability,
    grover_step_collapsed,
    iterate_collapsed,
    min_unmarked_residual,
    phase_grid,
    pi_phase_trajectory,
    single_query_phase,
    single_step_from_uniform,
)
from .errors import (
    CountError,
    DimensionMismatch,
    EngineMismatch,
    InfeasibleSingleQuery,
    InvalidCount,
    NotCollapsible,
    ParseError,
    PhaseGroverError,
    RangeError,
)
from .oracle import (
    OracleNormalizationWarning,
    OracleSpec,
    generate_oracle,
    parse_oracle,
    serialize_oracle,
)
from .statevector import (
    MeasurementReport,
    StateVector,
    SubspaceSpec,
    apply_conditional_phase,
    apply_diffusion,
    apply_grover,
    collapse,
    embed,
    sample_measurement,
    single_query_search,
    success_probability,
    uniform_state,
    uniform_state_on_subspace,
)

__version__ = "0.1.0"

__all__ = [
    "CollapsedState",
    "CountError",
    "DimensionMismatch",
    "EngineMismatch",
    "InfeasibleSingleQuery",
    "InvalidCount",
    "MeasurementReport",
    "NotCollapsible",
    "OracleNormalizationWarning",
    "OracleSpec",
    "ParseError",
    "PhaseGroverError",
    "PhasePair",
    "RangeError",
    "StateVector",
    "SubspaceSpec",
    "TrajectoryRecord",
    "apply_conditional_phase",
    "apply_diffusion",
    "apply_grover",
    "collapse",
    "collapsed_success_probability",
    "embed",
    "generate_oracle",
    "grover_step_collapsed",
    "iterate_collapsed",
    "kernel_backend",
    "min_unmarked_residual",
    "parse_oracle",
    "phase_grid",
    "pi_phase_trajectory",
    "sample_measurement",
    "serialize_oracle",
    "single_query_phase",
    "single_query_search",
    "single_step_from_uniform",
    "success_probability",
    "uniform_state",
    "uniform_state_on_subspace",
]
