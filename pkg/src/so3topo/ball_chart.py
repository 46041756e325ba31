"""Ball model of SO(3).

A rotation by angle ``theta`` in [0, pi] about unit axis ``n`` is the point
``theta * n`` of the closed ball of radius pi.  Rotations by pi about ``n`` and
``-n`` coincide, so antipodal points of the boundary sphere are identified;
the ball with that gluing is real projective 3-space.

:func:`crossing_parity` classifies a loop by counting how often it leaves
through the boundary and re-enters from the opposite side.  It only looks at
ball coordinates, never at quaternion signs along the path, which makes it an
independent check on the lifting classifier in :mod:`so3topo.homotopy`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import get_tolerances
from .errors import InputValidationError, RefinementRequired
from .paths import HomotopyClass, Loop
from .rotation import UnitQuaternion, as_quat_array, canonicalize_array

__all__ = ["BallPoint", "to_ball", "from_ball", "to_ball_array", "from_ball_array", "crossing_parity",
           "ball_chords", "ball_jump_count"]


@dataclass(frozen=True, eq=False)
class BallPoint:
    v: np.ndarray = field()

    def __post_init__(self) -> None:
        v = np.array(self.v, dtype=float).reshape(3)
        if np.linalg.norm(v) > np.pi + 1e-12:
            raise InputValidationError(f"ball point has norm {np.linalg.norm(v)!r} > pi")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def angle(self) -> float:
        return float(np.linalg.norm(self.v))

    def on_boundary(self) -> bool:
        return abs(self.angle - np.pi) <= get_tolerances().ball_boundary

    def __repr__(self) -> str:
        return f"BallPoint({self.v.tolist()})"


def to_ball_array(q: np.ndarray) -> np.ndarray:
    """Ball coordinates of a stack of quaternions, shape (..., 4) -> (..., 3)."""
    c = canonicalize_array(np.asarray(q, dtype=float))
    vec = c[..., 1:]
    s = np.linalg.norm(vec, axis=-1)
    theta = 2.0 * np.arctan2(s, c[..., 0])
    scale = np.where(theta < 1e-12, 0.0, theta / np.where(s == 0, 1.0, s))
    return vec * scale[..., None]


def from_ball_array(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v, axis=-1)
    if np.any(theta > np.pi + 1e-12):
        raise InputValidationError("ball coordinates must have length at most pi")
    safe = np.where(theta == 0, 1.0, theta)
    q = np.concatenate([np.cos(0.5 * theta)[..., None], (np.sin(0.5 * theta) / safe)[..., None] * v], axis=-1)
    return canonicalize_array(q)


def to_ball(q: UnitQuaternion) -> BallPoint:
    """``theta * n`` for the canonical (``w >= 0``) representative of ``q``."""
    return BallPoint(to_ball_array(as_quat_array(q)))


def from_ball(v) -> UnitQuaternion:
    """Canonical quaternion of the rotation by ``|v|`` about ``v / |v|``."""
    v = v.v if isinstance(v, BallPoint) else v
    return UnitQuaternion.from_array(from_ball_array(np.asarray(v, dtype=float).reshape(3)))


def crossing_parity(loop: Loop) -> HomotopyClass:
    """Homotopy class from the number of antipodal jumps in the ball model.

    Requires consecutive rotations closer than ``parity_refinement`` (0.2 rad
    by default).  A genuine step that short moves the ball point by well
    under pi/2, while passing through the boundary moves it from near ``v`` to
    near ``-v``, a chord of almost 2 pi.  Odd jump count means nontrivial.
    """
    tol = get_tolerances()
    steps = loop.path.steps()
    if steps.size and steps.max() >= tol.parity_refinement:
        raise RefinementRequired(
            f"crossing parity needs steps < {tol.parity_refinement} rad (max step {steps.max():.4f})"
        )
    jumps = ball_jump_count(loop)
    return HomotopyClass.NONTRIVIAL if jumps % 2 else HomotopyClass.TRIVIAL


def ball_chords(loop: Loop) -> np.ndarray:
    """Euclidean length in the ball of each step of the loop."""
    v = to_ball_array(loop.samples)
    return np.linalg.norm(np.diff(v, axis=0), axis=1)


def ball_jump_count(loop: Loop) -> int:
    return int(np.count_nonzero(ball_chords(loop) > get_tolerances().jump_threshold))
