"""Ground-state energy bounds for the curvature-squared Schrodinger operator
on smooth strictly convex closed plane curves of length 2*pi.

The operator is H = -d^2/ds^2 + kappa^2(s) on [0, 2*pi) with periodic
boundary conditions; its lowest eigenvalue is conjectured to be at least 1
for every admissible curve, with equality on the circle and a family of
point-symmetric ovals.  This package evaluates the eigenvalue with two
independent discretizations, locates curve critical points, verifies the
inequality chain behind the proven lower bounds, and searches coefficient
space for counterexamples.
"""

from .errors import (
    BudgetExceeded,
    NoConvergence,
    NodalGroundState,
    NotApplicable,
    OvalspecError,
    RejectBadIndex,
    RejectDuplicateIndex,
    RejectNonConvex,
    ZeroProjection,
    ZeroVector,
)
from .curve import (
    CurveGeometry,
    CurveSpec,
    Harmonic,
    HarmonicSplit,
    build_curve,
    curvature,
    curve_from_json,
    curve_to_json,
    dump_curve,
    embed,
    eval_phi,
    eval_phi_inverse,
    load_curve,
    split_fg,
    wrap_angle,
)
from .spectral import (
    DiscretizedOperator,
    Scheme,
    SpectralResult,
    assemble,
    converge_lambda,
    ground_state,
    rayleigh_quotient,
    solve_ground_state,
    write_eigenfunction_csv,
)
from .analysis import (
    BoundReport,
    CriticalAngleSet,
    InequalityRecord,
    SignSetReport,
    alpha_window_bound,
    check_lemma1,
    critical_angles,
    full_report,
    lemma3_alpha,
    max_circular_gap,
    projection_I,
    projection_sweep,
    theorem1_constant,
    theorem2_applicable,
    verify_fprime_bound,
    verify_sign_set_inequalities,
    verify_sine_orthogonality,
)
from .search import (
    SearchConfig,
    SearchMethod,
    SearchRecord,
    frontier_scan,
    minimize_lambda,
    random_curve,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BudgetExceeded",
    "CriticalAngleSet",
    "CurveGeometry",
    "CurveSpec",
    "DiscretizedOperator",
    "Harmonic",
    "HarmonicSplit",
    "InequalityRecord",
    "NoConvergence",
    "NodalGroundState",
    "NotApplicable",
    "OvalspecError",
    "RejectBadIndex",
    "RejectDuplicateIndex",
    "RejectNonConvex",
    "Scheme",
    "SearchConfig",
    "SearchMethod",
    "SearchRecord",
    "SignSetReport",
    "SpectralResult",
    "ZeroProjection",
    "ZeroVector",
    "alpha_window_bound",
    "assemble",
    "build_curve",
    "check_lemma1",
    "converge_lambda",
    "critical_angles",
    "curvature",
    "curve_from_json",
    "curve_to_json",
    "dump_curve",
    "embed",
    "eval_phi",
    "eval_phi_inverse",
    "frontier_scan",
    "full_report",
    "ground_state",
    "lemma3_alpha",
    "load_curve",
    "max_circular_gap",
    "minimize_lambda",
    "projection_I",
    "projection_sweep",
    "random_curve",
    "rayleigh_quotient",
    "solve_ground_state",
    "split_fg",
    "theorem1_constant",
    "theorem2_applicable",
    "verify_fprime_bound",
    "verify_sign_set_inequalities",
    "verify_sine_orthogonality",
    "wrap_angle",
    "write_eigenfunction_csv",
]
