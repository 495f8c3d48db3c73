"""Classical, quantum and no-signalling strategies for a two-agent binary estimation team."""
from .classical import (
    DeterministicStrategy,
    LocalMixture,
    all_deterministic,
    closed_form_optimum,
    deterministic_optimum,
    mixture_table,
    to_table,
)
from .errors import (
    ConstraintViolation,
    DegenerateCollapse,
    InvalidMixture,
    InvalidProblem,
    InvalidSpec,
    InvalidStrategyTable,
    NumericalInconsistency,
)
from .nosignalling import NsVertexId, all_vertices, check_no_signalling, ns_optimum, vertex_table
from .problem import (
    DecisionProblem,
    JointPrior,
    StrategyTable,
    cost,
    expected_cost,
    joint_prior,
    validate_strategy_table,
)
from .quantum import (
    DensityMatrix,
    PovmElement,
    QuantumStrategy,
    advantage_strategy,
    bell_state,
    direct_sum_mix,
    embed_deterministic,
    empirical_table,
    projector_family,
    sample_sequential,
    strategy_table,
    validate_quantum_strategy,
)
from .search import AngleVector, SearchConfig, quantum_optimum, quantum_value, table_from_angles

__version__ = "0.1.0"

__all__ = [
    "DeterministicStrategy",
    "LocalMixture",
    "all_deterministic",
    "closed_form_optimum",
    "deterministic_optimum",
    "mixture_table",
    "to_table",
    "ConstraintViolation",
    "DegenerateCollapse",
    "InvalidMixture",
    "InvalidProblem",
    "InvalidSpec",
    "InvalidStrategyTable",
    "NumericalInconsistency",
    "NsVertexId",
    "all_vertices",
    "check_no_signalling",
    "ns_optimum",
    "vertex_table",
    "DecisionProblem",
    "JointPrior",
    "StrategyTable",
    "cost",
    "expected_cost",
    "joint_prior",
    "validate_strategy_table",
    "DensityMatrix",
    "PovmElement",
    "QuantumStrategy",
    "advantage_strategy",
    "bell_state",
    "direct_sum_mix",
    "embed_deterministic",
    "empirical_table",
    "projector_family",
    "sample_sequential",
    "strategy_table",
    "validate_quantum_strategy",
    "AngleVector",
    "SearchConfig",
    "quantum_optimum",
    "quantum_value",
    "table_from_angles",
]
