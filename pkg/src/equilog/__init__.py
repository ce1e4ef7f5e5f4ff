"""Certified computations around logarithmic equidistribution.

Exact integer polynomials, ball arithmetic with certified root isolation,
Weil heights and conjugate log-distance averages (archimedean and p-adic),
constructive small-vector solvers, the counterexample sequence pipelines,
and certified checkers for all the explicit inequalities.
"""

from .errors import (
    AssemblyInvariantViolated,
    BallDomainError,
    BudgetExhausted,
    CertificationFailed,
    ConjugateInputs,
    DegenerateExponent,
    EquilogError,
    FactorizationInconclusive,
    GridDegenerate,
    NonIntegralElement,
    NoSquarefreePrime,
    PadicContextUnavailable,
    PreconditionError,
    PrecisionExhausted,
    RamifiedError,
    SearchRangeExhausted,
    VanishingInput,
)
from .intpoly import (
    EisensteinCertificate,
    GaussRational,
    IntPoly,
    eisenstein_degree,
    eval_exact,
    l1_norm,
    substitute_power,
)
from .numeric import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    CertifiedRoots,
    ComplexBall,
    RealBall,
    complex_roots,
    log_mahler_quadrature,
    mahler_measure,
)
from .padics import (
    LocalFactor,
    PadicContext,
    PadicValuation,
    local_factors,
    newton_polygon,
    padic_eval_abs,
    root_valuations,
    zp_coordinates,
)
from .heights import (
    INFINITY,
    AlgebraicNumber,
    ArchEmbedding,
    PadicEmbedding,
    Place,
    certify_unit_circle,
    equidistribution_error,
    is_root_of_unity,
    log_distance_average,
    minimal_poly_of_image,
    modified_height,
    multiplicative_height,
    weil_height,
)
from .lattice import (
    ArchLinearFormsProblem,
    PadicLinearFormsProblem,
    PadicSolution,
    solve_arch,
    solve_padic,
)
from .construct import (
    BuildConfig,
    OffCircleStep,
    SequenceStep,
    build_arch_A,
    build_bm_sequence,
    build_kappa_sequence,
    build_padic_A,
    choose_q_delta,
    assemble_R,
    extract_small_factors,
    find_exponents,
)
from .verify import (
    CheckReport,
    CorpusConfig,
    check_arch_upper,
    check_height_image,
    check_hprime_rules,
    check_liouville,
    check_padic_one,
    check_padic_rootunity,
    check_padic_upper,
    check_rootunity_error,
    check_sandwich,
    check_sequence,
    check_zero_case,
    run_all_suites,
    run_suite,
)

__version__ = "0.1.0"
