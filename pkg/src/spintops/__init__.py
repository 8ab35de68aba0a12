"""Structure-preserving time discretizations for the Euler, Lagrange, and
Kowalevski tops."""

from .algebra import (
    NumericalError,
    SingularSystemError,
    cross,
    rotation_matrix,
    solve3,
    solve6,
    vec3,
)
from .euler_lagrange import (
    ConvergenceError,
    LagrangeParams,
    LagrangeState,
    bs_step_euler,
    lagrange_invariants,
    lagrange_step,
    symmetric_step_euler,
)
from .harness import (
    ConfigError,
    DriftReport,
    RunConfig,
    Trajectory,
    convergence_study,
    drift_report,
    estimate_period,
    reversal_test,
    run,
)
from .hk import hk_step, hk_step_euler, hk_step_report
from .kowalevski import (
    BranchRule,
    GammaMethod,
    SouthPoleError,
    bohlin_algorithm_step,
    bohlin_step,
    gamma_step_bs,
    gamma_step_rotation,
    gamma_step_stereo,
    hybrid_step,
    omega3_update,
    stereo_forward,
    stereo_inverse,
)
from .models import (
    BodyState,
    InvariantSet,
    KowalevskiParams,
    TopParams,
    euler_poisson_rhs,
    invariants,
    kowalevski_invariants,
    matrix_form_residual,
    xi,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
