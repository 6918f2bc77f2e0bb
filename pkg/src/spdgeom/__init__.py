"""Affine-invariant Riemannian geometry on positive-definite matrices."""

from .errors import (
    BaseMismatchError,
    DimensionMismatchError,
    EigenSolverError,
    GroupMembershipError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)
from .manifold import (
    Geodesic,
    TangentVector,
    UnitDetSpd,
    distance,
    geodesic,
    geodesic_from_identity,
    metric,
    project_det1,
    project_trace0,
    pushforward,
    riem_exp,
    riem_log,
)
from .symmat import (
    EigenPair,
    SelfAdjointMatrix,
    SpdMatrix,
    congruence,
    frechet_dexp,
    mat_exp,
    mat_log,
    mat_sqrt,
    sym_eig,
    trace_inner,
)
from .groups import (
    GroupElement,
    GroupTag,
    is_member,
    random_group_element,
    random_selfadjoint,
    random_spd,
)
from .verify import (
    ConvergenceReport,
    fd_dexp,
    fd_second_mixed,
    geodesic_residual,
    second_order_agreement_error,
)

__version__ = "0.1.0"
