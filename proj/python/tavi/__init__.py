"""Time-adaptive variational integrators for Bregman accelerated optimization.

Thin Python layer over the C++ core: SO(3) primitives, the Bregman-family
steppers (LTVI/HTVI on vector spaces, LLGVI on SO(3)), benchmark objectives,
trajectory verification, and the JSON-config run harness.
"""

from ._core import (  # noqa: F401
    BregmanParams,
    ConfigError,
    NonFiniteError,
    NotRotationError,
    NotSkewError,
    Objective,
    So3Objective,
    So3State,
    StepTooLargeError,
    TaviError,
    VectorState,
    __version__,
    asin_step_map,
    check_termination,
    compare,
    custom_objective,
    exact_time_map,
    fd_check_vector,
    hat,
    htvi_adaptive_step,
    htvi_direct_step,
    llgvi_adaptive_step,
    llgvi_init,
    ltvi_adaptive_step,
    ltvi_direct_step,
    monitor_g,
    orthogonality_error,
    quartic_eval,
    quartic_grad,
    quartic_objective,
    random_wahba_matrix,
    reference_flow_vector,
    rodrigues_exp,
    run,
    svd3,
    vee,
    vector_init,
    verification_suite,
    wahba_eval,
    wahba_grad_left,
    wahba_objective,
    wahba_optimal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
