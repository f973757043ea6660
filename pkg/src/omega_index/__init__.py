"""Integer index of an almost-commuting Hermitian pair.

Build the almost-projection Q(A, B) of a Hermitian pair with small commutator,
compress it to a leading corner, count eigenvalues above 1/2, and report the
stable integer ``M_N - N`` — together with randomized oracles for every
operator-norm inequality that underwrites the counting.
"""

from . import errors
from .bounds import (
    ROUNDOFF_ALLOWANCE,
    BoundCheckResult,
    check_f_lipschitz,
    check_intertwine,
    check_resolvent_bound,
    check_resolvent_difference,
    check_theorem_defect,
    random_near_normal,
    run_suite,
)
from .calibration import pinned_orientation, render_record, run_calibration
from .errors import (
    CalibrationMissing,
    ConfigParse,
    ConvergenceFailure,
    CutTooLarge,
    DimensionMismatch,
    GapViolation,
    InadmissibleCommutator,
    InvalidParameter,
    NonHermitianInput,
    NotPositiveDefinite,
    OmegaIndexError,
    UnstableCount,
)
from .index import (
    OmegaResult,
    QBuild,
    SpectralReport,
    build_q,
    count_upper,
    default_cuts,
    extract_q11,
    idempotency_defect,
    masked_commutator_norm,
    omega,
    q_blocks_from_c,
    resolve_orientation,
    scale_admissible,
    theorem_bound,
)
from .linalg import (
    HermitianEigen,
    adjoint,
    as_matrix,
    hermitian_eigen,
    hermiticity_defect,
    hpd_inverse,
    matmul,
    operator_norm,
)
from .operators import (
    OperatorPair,
    PairSpec,
    PerturbationSpec,
    SphereMap,
    bott_point,
    build_commuting_grid,
    build_harmonic,
    build_oscillator_analytic_q,
    build_pair,
    grid_points,
    load_matrix,
    load_pair,
    perturb,
    save_matrix,
    sphere_map,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCheckResult",
    "CalibrationMissing",
    "ConfigParse",
    "ConvergenceFailure",
    "CutTooLarge",
    "DimensionMismatch",
    "GapViolation",
    "HermitianEigen",
    "InadmissibleCommutator",
    "InvalidParameter",
    "NonHermitianInput",
    "NotPositiveDefinite",
    "OmegaIndexError",
    "OmegaResult",
    "OperatorPair",
    "PairSpec",
    "PerturbationSpec",
    "QBuild",
    "ROUNDOFF_ALLOWANCE",
    "SpectralReport",
    "SphereMap",
    "UnstableCount",
    "__version__",
    "adjoint",
    "as_matrix",
    "bott_point",
    "build_commuting_grid",
    "build_harmonic",
    "build_oscillator_analytic_q",
    "build_pair",
    "build_q",
    "check_f_lipschitz",
    "check_intertwine",
    "check_resolvent_bound",
    "check_resolvent_difference",
    "check_theorem_defect",
    "count_upper",
    "default_cuts",
    "errors",
    "extract_q11",
    "grid_points",
    "hermitian_eigen",
    "hermiticity_defect",
    "hpd_inverse",
    "idempotency_defect",
    "load_matrix",
    "load_pair",
    "masked_commutator_norm",
    "matmul",
    "omega",
    "operator_norm",
    "perturb",
    "pinned_orientation",
    "q_blocks_from_c",
    "random_near_normal",
    "render_record",
    "resolve_orientation",
    "run_calibration",
    "run_suite",
    "save_matrix",
    "scale_admissible",
    "sphere_map",
    "theorem_bound",
]
