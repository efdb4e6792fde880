"""Magnetic geodesics on the Heisenberg group and their realization as
one-parameter orbits of the isometry group."""

from .errors import DomainError, GridMismatch, ShapeError
from .geometry import (
    CoordVector,
    CriterionResult,
    FrameVector,
    connection,
    contact_form,
    coord_to_frame,
    cross,
    curve_acceleration,
    frame_to_coord,
    go_criterion,
    lorentz,
    metric,
    u_tensor,
)
from .integrator import ErrorReport, State, StepConfig, compare, integrate, lorentz_rhs
from .lie_core import (
    Matrix4,
    NilPoint,
    OscElement,
    OscVector,
    algebra_matrix,
    bracket,
    exp_nil,
    exp_osc,
    matrix_exp,
    matrix_to_osc,
    nil_multiply,
    osc_action,
    osc_multiply,
    osc_to_matrix,
    split,
)
from .trajectories import (
    InitialData,
    TrajectorySample,
    classify,
    geodesic_point,
    homogeneous_generator,
    magnetic_grid,
    magnetic_point,
    magnetic_point_from,
    magnetic_velocity,
    orbit_grid,
    orbit_point,
)

__version__ = "0.1.0"
