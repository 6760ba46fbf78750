"""Simulator and analysis toolkit for iterated post-selection distillation
of three-qubit GHZ states."""

from .analysis import (
    BracketInvalid,
    ConvergenceRule,
    ResponseMatrix,
    ThresholdResult,
    closed_form_response_u1,
    coherent_family,
    convergence_order,
    first_order_response,
    measurement_error_family,
    protocol_equivalence,
    threshold_bisect,
    white_family,
)
from .protocol import (
    NOISELESS,
    AlternatingDouble,
    InvalidInput,
    IterationRecord,
    NoiseParams,
    Schedule,
    Single,
    UniformDouble,
    ZeroSuccessProbability,
    alternating_schedule,
    iterate_once,
    resource_count,
    run_schedule,
    uniform_schedule,
)
from .qmat import (
    ValidityReport,
    dagger,
    is_unitary,
    partial_trace,
    permute_qubits,
    tensor,
    validate_density,
)
from .states import (
    NoiseSpec,
    NonPositiveState,
    coherent_input,
    fidelity,
    ghz,
    ghz_density,
    ghz_minus,
    perturbed_input,
    pure_density,
    random_density,
    random_traceless_hermitian,
    white_noise_input,
)
from .unitaries import (
    ConditionReport,
    SolutionClass,
    TwoQubitUnitary,
    check_coherent_conditions,
    check_fixed_point,
    check_unitarity,
    classify_solution,
    u1,
    u2,
    u3,
    verify_decomposition,
)

__all__ = [
    "AlternatingDouble",
    "BracketInvalid",
    "ConditionReport",
    "ConvergenceRule",
    "InvalidInput",
    "IterationRecord",
    "NOISELESS",
    "NoiseParams",
    "NoiseSpec",
    "NonPositiveState",
    "ResponseMatrix",
    "Schedule",
    "Single",
    "SolutionClass",
    "ThresholdResult",
    "TwoQubitUnitary",
    "UniformDouble",
    "ValidityReport",
    "ZeroSuccessProbability",
    "alternating_schedule",
    "check_coherent_conditions",
    "check_fixed_point",
    "check_unitarity",
    "classify_solution",
    "closed_form_response_u1",
    "coherent_family",
    "coherent_input",
    "convergence_order",
    "dagger",
    "fidelity",
    "first_order_response",
    "ghz",
    "ghz_density",
    "ghz_minus",
    "is_unitary",
    "iterate_once",
    "measurement_error_family",
    "partial_trace",
    "permute_qubits",
    "perturbed_input",
    "protocol_equivalence",
    "pure_density",
    "random_density",
    "random_traceless_hermitian",
    "resource_count",
    "run_schedule",
    "tensor",
    "threshold_bisect",
    "u1",
    "u2",
    "u3",
    "uniform_schedule",
    "validate_density",
    "verify_decomposition",
    "white_noise_input",
]

__version__ = "0.1.0"
