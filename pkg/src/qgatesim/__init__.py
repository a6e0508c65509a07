"""Gate-level simulation of quantum search circuits.

Dense state-vector execution of Grover and Deutsch-Jozsa runs assembled
from explicit operator matrices, plus a matrix-free two-amplitude backend
that carries Grover to register sizes far beyond dense reach (n = 64 and
up).  See the README for conventions and the CLI.
"""

from .encoder import (
    InjectiveTable,
    MarkedSet,
    TruthTable,
    code_map,
    injective_extension,
    marked_set_from_table,
    oracle_from_marked,
    permutation_operator,
    truth_table_from_json,
    truth_table_from_marked,
)
from .engine import (
    MeasurementOutcome,
    entropy_stop,
    initial_state,
    interpret,
    marked_angle,
    measure,
    optimal_iterations,
    run,
    run_entropy_stop,
    sample_counts,
    shannon_entropy,
)
from .fastgrover import (
    CollapsedState,
    collapsed_entropy_stop,
    collapsed_init,
    collapsed_iterate,
    collapsed_state_at,
    collapsed_trace,
    jump_summary,
)
from .linalg import (
    CapacityError,
    PermutationOperator,
    apply,
    conjugate_transpose,
    dot,
    is_unitary,
    tensor,
)
from .operators import (
    Algorithm,
    GateAssembly,
    assemble,
    diffusion,
    diffusion_composed,
    hadamard_word,
    phase_oracle,
)
from .trace import SimulationTrace, TraceRecord

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "CapacityError",
    "CollapsedState",
    "GateAssembly",
    "InjectiveTable",
    "MarkedSet",
    "MeasurementOutcome",
    "PermutationOperator",
    "SimulationTrace",
    "TraceRecord",
    "TruthTable",
    "apply",
    "assemble",
    "code_map",
    "collapsed_entropy_stop",
    "collapsed_init",
    "collapsed_iterate",
    "collapsed_state_at",
    "collapsed_trace",
    "conjugate_transpose",
    "diffusion",
    "diffusion_composed",
    "dot",
    "entropy_stop",
    "hadamard_word",
    "initial_state",
    "injective_extension",
    "interpret",
    "is_unitary",
    "jump_summary",
    "marked_angle",
    "marked_set_from_table",
    "measure",
    "optimal_iterations",
    "oracle_from_marked",
    "permutation_operator",
    "phase_oracle",
    "run",
    "run_entropy_stop",
    "sample_counts",
    "shannon_entropy",
    "tensor",
    "truth_table_from_json",
    "truth_table_from_marked",
    "__version__",
]
