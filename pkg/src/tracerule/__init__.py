"""Trace-rule models of multipartite correlations.

Nonsignalling boxes written as ``tr(O M_{a_1}^{x_1} ⊗ ... ⊗ M_{a_N}^{x_N})``,
operator classification along positive / block-positive lines, and the
three-qubit UPB construction whose witness correlations beat the classical
bound of a tripartite Bell inequality.
"""

from .boxes import (
    BellVerdict,
    CorrelationBox,
    Scenario,
    bell_beta,
    bell_verdict,
    classical_max_beta,
    deterministic_box,
    is_nonsignalling,
    marginal,
    mixture,
    pr_box,
    random_ns_box,
    uniform_box,
)
from .errors import (
    DegenerateBasis,
    DimensionMismatch,
    GramSingular,
    IndependenceFailure,
    InvalidBox,
    InvalidPovm,
    NonOrthonormal,
    NotHermitian,
    NotUnitTrace,
    RangeViolation,
    SignallingInput,
    TraceRuleError,
)
from .hilbert import HermitianOperator, eig_hermitian, hs_inner, kron, solve_dual
from .operators import (
    MeasurementModel,
    OperatorClass,
    Povm,
    WitnessVerdict,
    classify,
    evaluate_box,
    pr_measurements,
    pr_operator,
    projective_from_bases,
    projective_povm,
)
from .synthesis import SynthesisModel, build_measurements, build_operator, synthesize
from .upb import UpbModel, beta_formula, build_upb, build_witness, compute_epsilon, gleason_box, upb_measurements
from .witness import (
    MinimizationResult,
    ProductState,
    certify_witness,
    grid_oracle_3qubit,
    minimize_over_products,
)

__version__ = "0.1.0"
