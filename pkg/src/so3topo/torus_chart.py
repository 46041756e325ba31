"""Solid-torus coordinates on SO(3).

A rotation R is described by where it sends the z-axis, ``Z = R e_z``, and by
a residual angle ``phi``.  The z-axis is first slid to Z along the meridian
through Z while the x- and y-axes are parallel transported; the result is the
*slide rotation* ``S(Z)``.  What is left, ``R S^T``, fixes Z and is a rotation
by ``phi`` about Z.  So ``R = A(Z, phi) S(Z)``.

Z ranges over the sphere minus the south pole (an open disk) and phi over a
circle, giving an open solid torus.  As Z approaches the south pole along the
meridian of longitude ``lam`` the chart has a limit that depends on ``lam``:
boundary points ``(lam, phi)`` and ``(0, phi + 2 s lam)`` give the same rotation,
one turn in longitude pairing with two turns in phi.  The sign ``s`` depends on
the handedness convention for phi and is measured at import time, see
:data:`IDENTIFICATION_SIGN`.

Conventions: longitude is measured from the x-axis towards the y-axis, phi is
right-handed about Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerances
from .errors import InputValidationError, NumericalDriftError, SouthPoleSingular
from .rotation import RotationMatrix, _as_matrix

__all__ = [
    "TorusChartPoint",
    "SolidTorusCoord",
    "axis_rotation_matrix",
    "slide_rotation",
    "chart_forward",
    "chart_inverse",
    "to_solid_torus",
    "boundary_limit_rotation",
    "boundary_identified",
    "measure_identification_sign",
    "IDENTIFICATION_SIGN",
]

TWO_PI = 2.0 * np.pi
E_Z = np.array([0.0, 0.0, 1.0])


def _wrap(angle: float) -> float:
    a = float(np.mod(angle, TWO_PI))
    return 0.0 if a >= TWO_PI else a


def _sphere_point(lam: float, alpha: float) -> np.ndarray:
    sa = np.sin(alpha)
    return np.array([sa * np.cos(lam), sa * np.sin(lam), np.cos(alpha)])


@dataclass(frozen=True)
class TorusChartPoint:
    """Chart coordinates: rotated z-axis ``Z`` (with its longitude ``lam`` and
    polar angle ``alpha``) and fiber angle ``phi``.

    Build from angles with :meth:`from_angles`; the direct constructor checks
    that ``Z`` and the angles agree.
    """

    Z: tuple[float, float, float]
    lam: float
    alpha: float
    phi: float

    def __post_init__(self) -> None:
        tol = get_tolerances()
        Z = np.asarray(self.Z, dtype=float).reshape(3)
        if abs(np.linalg.norm(Z) - 1.0) > tol.unit_norm * 1e3:
            raise InputValidationError("Z must be a unit vector")
        alpha = float(self.alpha)
        if not 0.0 <= alpha < np.pi:
            raise InputValidationError(f"alpha must lie in [0, pi), got {alpha}")
        lam = 0.0 if alpha == 0.0 else _wrap(self.lam)
        if np.max(np.abs(Z - _sphere_point(lam, alpha))) > 1e-9:
            raise InputValidationError("Z does not match (lam, alpha)")
        object.__setattr__(self, "Z", tuple(float(c) for c in Z))
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "phi", _wrap(self.phi))

    @classmethod
    def from_angles(cls, lam: float, alpha: float, phi: float) -> "TorusChartPoint":
        lam = 0.0 if alpha == 0.0 else _wrap(lam)
        return cls(tuple(_sphere_point(lam, alpha)), lam, alpha, phi)


@dataclass(frozen=True)
class SolidTorusCoord:
    disk: tuple[float, float]
    phi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "disk", tuple(float(d) for d in self.disk))
        object.__setattr__(self, "phi", float(self.phi))
        if np.hypot(*self.disk) >= 1.0:
            raise InputValidationError("solid torus disk coordinate must satisfy |disk| < 1")


def axis_rotation_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues formula for a unit ``axis``; returns a plain array."""
    n = np.asarray(axis, dtype=float)
    K = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def _slide_from_angles(lam: float, alpha: float) -> np.ndarray:
    # axis e_z x Z normalized, i.e. the normal of the meridian plane
    return axis_rotation_matrix((-np.sin(lam), np.cos(lam), 0.0), alpha)


def _spherical(Z: np.ndarray) -> tuple[float, float]:
    rho = np.hypot(Z[0], Z[1])
    alpha = float(np.arctan2(rho, Z[2]))
    lam = 0.0 if rho == 0.0 else _wrap(np.arctan2(Z[1], Z[0]))
    return lam, alpha


def slide_rotation(Z) -> RotationMatrix:
    """Rotation taking e_z to ``Z`` along the meridian, transporting x and y.

    It is the rotation about ``e_z x Z`` by the angle between e_z and Z.  Its
    axis is normal to the plane of the meridian, so the image frame of the
    x- and y-axes keeps a fixed angle to the meridian all the way.
    """
    Z = np.asarray(Z, dtype=float).reshape(3)
    Z = Z / np.linalg.norm(Z)
    if Z[2] <= -1.0 + get_tolerances().south_pole:
        raise SouthPoleSingular("slide rotation is undefined when Z is the south pole")
    lam, alpha = _spherical(Z)
    return RotationMatrix(_slide_from_angles(lam, alpha))


def chart_forward(R) -> TorusChartPoint:
    """Solid-torus chart coordinates of a rotation."""
    m = _as_matrix(R)
    Z = m[:, 2].copy()
    lam, alpha = _spherical(Z)
    if alpha > np.pi - get_tolerances().south_pole_exclusion:
        raise SouthPoleSingular(f"rotated z-axis is within the excluded south-pole cap (alpha = {alpha!r})")
    S = _slide_from_angles(lam, alpha)
    Q = m @ S.T
    vee = np.array([Q[2, 1] - Q[1, 2], Q[0, 2] - Q[2, 0], Q[1, 0] - Q[0, 1]])
    phi = np.arctan2(0.5 * vee @ Z, 0.5 * (np.trace(Q) - 1.0))
    Zs = _sphere_point(lam, alpha)
    return TorusChartPoint(tuple(Zs), lam, alpha, phi)


def _chart_inverse_angles(lam: float, alpha: float, phi: float) -> np.ndarray:
    Z = _sphere_point(lam, alpha)
    return axis_rotation_matrix(Z, phi) @ _slide_from_angles(lam, alpha)


def chart_inverse(c: TorusChartPoint) -> RotationMatrix:
    """``A(Z, phi) S(Z)``: slide the z-axis to Z, then turn by phi about Z."""
    return RotationMatrix(_chart_inverse_angles(c.lam, c.alpha, c.phi))


def to_solid_torus(c: TorusChartPoint) -> SolidTorusCoord:
    """Azimuthal-equidistant image of Z in the open unit disk, plus phi."""
    r = c.alpha / np.pi
    return SolidTorusCoord((r * np.cos(c.lam), r * np.sin(c.lam)), c.phi)


def boundary_limit_rotation(lam: float, phi: float, eps: float | None = None) -> RotationMatrix:
    """Limit of the chart as Z runs down meridian ``lam`` into the south pole.

    The chart formula extends smoothly to ``alpha = pi`` once the meridian is
    fixed, so the limit is evaluated there directly.  As a guard, a Richardson
    extrapolation from ``alpha = pi - eps`` and ``pi - eps/2`` must agree with
    it to the ``boundary_stability`` tolerance.
    """
    tol = get_tolerances()
    eps = tol.boundary_epsilon if eps is None else float(eps)
    limit = _chart_inverse_angles(lam, np.pi, phi)
    coarse = _chart_inverse_angles(lam, np.pi - eps, phi)
    fine = _chart_inverse_angles(lam, np.pi - 0.5 * eps, phi)
    extrapolated = 2.0 * fine - coarse
    gap = np.max(np.abs(extrapolated - limit))
    if gap > tol.boundary_stability:
        raise NumericalDriftError(f"boundary limit unstable at lam={lam}, phi={phi}: gap {gap:.3e}")
    return RotationMatrix(limit)


def measure_identification_sign() -> int:
    """Find s in {+1, -1} with limit(lam, phi) == limit(0, phi + 2 s lam).

    Probed at a generic longitude; exactly one sign must match.
    """
    lam, phi = 0.37, 1.1
    target = boundary_limit_rotation(lam, phi).m
    matches = [
        s for s in (1, -1)
        if np.max(np.abs(boundary_limit_rotation(0.0, phi + 2 * s * lam).m - target)) <= 1e-9
    ]
    if len(matches) != 1:
        raise NumericalDriftError(f"could not determine identification sign (matches: {matches})")
    return matches[0]


#: Measured sign ``s`` of the boundary gluing rule.
IDENTIFICATION_SIGN: int = measure_identification_sign()


def boundary_identified(p1: tuple[float, float], p2: tuple[float, float]) -> bool:
    """Whether two boundary points ``(lam, phi)`` are glued to the same rotation."""
    r1 = boundary_limit_rotation(*p1).m
    r2 = boundary_limit_rotation(*p2).m
    return bool(np.max(np.abs(r1 - r2)) <= get_tolerances().identification)
