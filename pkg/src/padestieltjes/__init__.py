"""Pade summation and Stieltjes diagnostics for divergent oscillator series.

Exact ground-state perturbation coefficients of the PT-symmetric cubic and the
quartic anharmonic oscillator, Wynn's epsilon algorithm with a staircase
schedule, Pade coefficient prediction and numerical tests of the Stieltjes
property.
"""

from .diagnostics import (
    CarlemanEvidence,
    DiagnosticsReport,
    MonotonicityEvidence,
    NestingEvidence,
    carleman_partial_sums,
    check_nesting,
    check_pade_monotonicity,
    diagnose,
    hankel_determinant,
    hankel_sweep,
    pade_family,
)
from .errors import (
    ChecksumMismatch,
    InsufficientCoefficients,
    InsufficientMoments,
    SignViolation,
    SingularSystem,
    ZeroConstantTerm,
    ZeroDenominator,
)
from .numeric import (
    BigReal,
    ExactRational,
    Polynomial,
    TruncatedSeries,
    fraction_free_det,
    fraction_free_solve,
    rational,
    real_context,
    series_div,
    series_mul,
    to_real,
)
from .oscillators import (
    Hamiltonian,
    MomentView,
    PerturbationSeries,
    asymptotic_ratio,
    asymptotic_reference,
    generate,
    generate_pt_cubic,
    generate_quartic,
    map_coupling,
    moment_view,
)
from .pade import (
    EpsilonTable,
    PadeApproximant,
    accuracy_through_order_check,
    direct_pade,
    epsilon_table,
    partial_sums,
    staircase_approximants,
    staircase_index,
)
from .predict import (
    PhiFunction,
    PredictionRecord,
    check_prediction_bound,
    first_prediction,
    first_prediction_table,
    phi_series,
    predict_coefficients,
    relative_error_table,
)
from .report import CoefficientCache, RunConfig

__version__ = "0.1.0"
