"""Topology of the rotation group SO(3), executable.

Three coordinate models of rotations (unit quaternions, the solid-torus chart
and the ball model), homotopy classification of loops of rotations by lifting
to the quaternion double cover, an independent classifier by boundary
crossings in the ball, explicit contraction of contractible loops, and a
simulator for Dirac's belt trick.
"""

__version__ = "0.1.0"

from .config import DEFAULT_TOLERANCES, Tolerances, get_tolerances, use_tolerances
from .errors import (
    InputValidationError,
    NotNullHomotopic,
    NumericalDriftError,
    PoleSearchFailed,
    RefinementRequired,
    SO3TopologyError,
    SouthPoleSingular,
)
from .rotation import (
    AxisAngle,
    RotationMatrix,
    UnitQuaternion,
    matrix_to_quat,
    quat_compose,
    quat_conjugate,
    quat_from_axis_angle,
    quat_to_matrix,
    rotation_distance,
)
from .torus_chart import (
    IDENTIFICATION_SIGN,
    SolidTorusCoord,
    TorusChartPoint,
    boundary_identified,
    boundary_limit_rotation,
    chart_forward,
    chart_inverse,
    slide_rotation,
    to_solid_torus,
)
from .paths import (
    HomotopyClass,
    Loop,
    RotationPath,
    axis_rotation_loop,
    concat,
    constant_loop,
    random_loop,
    refine,
    reverse,
)
from .ball_chart import BallPoint, crossing_parity, from_ball, to_ball
from .homotopy import HomotopyGrid, HomotopyReport, LiftedPath, classify, contract, lift, verify_homotopy
from .belt import BeltState, closed_ribbon, new_belt, rotate_object, untwist, untwistable
