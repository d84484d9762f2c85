"""Truth functionals on classical and quantum Boolean algebras, framework
compatibility, and the magic-square no-go argument."""

from .classical import (
    CoarseGraining,
    FinitePhaseSpace,
    Indicator,
    PhasePoint,
    algebra_element,
    classical_truth_eval,
    energy_ellipse_indicator,
    enumerate_truth_functionals,
    indicator_and,
    indicator_not,
    indicator_or,
    universal_truth_functional,
)
from .compat import (
    MEANINGLESS,
    CompatibilityReport,
    PropositionOutcome,
    Tag,
    common_refinement,
    commutes,
    conjunction,
    negate,
    proposition_value,
    single_framework_check,
)
from .framework import (
    DecompositionOfIdentity,
    Observable,
    QuantumTruthFunctional,
    assign_value,
    check_functional_consistency,
    decomposition_from_observable,
    enumerate_quantum_truth_functionals,
    joint_decomposition,
    quantum_truth_eval,
)
from .linalg import Tolerance, eigen_decompose_hermitian, is_projector, multiply
from .nogo import (
    FrameworkCollection,
    MerminSquare,
    SignAssignment,
    build_mermin_square,
    score_assignment,
    search_sign_assignments,
    utf_search,
    verify_square_identities,
    weak_c_demo,
)

__version__ = "0.1.0"
