"""Verification toolkit for partial S_b-metric spaces.

Checks the defining axioms on concrete spaces, builds and classifies the
induced topology on finite carriers, certifies interpolative contraction
inequalities, and runs Picard fixed-point iteration with diagnostics.
"""

from .errors import (
    EmptySubfamily,
    IncompleteTable,
    InfeasibleExhaustive,
    InvalidExponents,
    NegativeValue,
    NotAFixedPoint,
    NotInBall,
    ParseError,
    PsbmError,
    TraceTooShort,
    UnknownBuiltin,
    UnknownPoint,
    WrongSpaceShape,
)
from .spaces import (
    AxiomReport,
    AxiomSet,
    BUILTIN_SPACES,
    FiniteCarrier,
    PartialSbSpace,
    Point,
    RegionCarrier,
    RuleMetric,
    TabulatedMetric,
    Violation,
    builtin_space,
    check_axioms,
    evaluate_metric,
    exhaustive_points,
    load_tabulated_space,
    parse_point,
    quintic,
    random_tabulated_space,
    random_valid_space,
    sample_carrier,
    tabulated_space,
)
from .topology import (
    CoverFamily,
    FiniteTopology,
    OpenBall,
    SeparationReport,
    canonical_radii,
    generate_topology,
    inner_ball_radius,
    is_T0,
    is_T1,
    is_T2,
    is_compact,
    is_connected,
    open_ball,
    separation_report,
    uncovered_witness,
    verify_topology_axioms,
    witness_candidates,
)
from .comparison import (
    BOYD_WONG,
    DEFAULT_GRID,
    MATKOWSKI,
    ComparisonFn,
    ComparisonReport,
    PropertyCheck,
    builtin_comparison,
    check_boyd_wong_properties,
    check_matkowski_properties,
    iterate_comparison,
    load_piecewise,
    piecewise_linear,
)
from .contraction import (
    CaseRow,
    CaseTable,
    CertificateReport,
    InterpolativeSpec,
    REFERENCE_BOUNDS,
    SelfMap,
    builtin_map,
    certify,
    fixed_points_bruteforce,
    map_from_table,
    reproduce_case_table,
    rhs_value,
    standard_spec,
    validate_exponents,
)
from .fixpoint import (
    ConvergenceReport,
    IterationTrace,
    cauchy_diagnostic,
    matkowski_envelope_check,
    picard_iterate,
    trace_to_csv,
    uniqueness_check,
    verify_fixed_point,
)
from .repro import run_repro
