"""Rotation primitives: unit quaternions, rotation matrices, axis-angle.

Quaternions are stored scalar first, ``(w, x, y, z)``.  The map
:func:`quat_to_matrix` is two-to-one: ``q`` and ``-q`` give the same matrix,
which is the double cover of the rotation group by the 3-sphere.

Besides the value types there are array helpers (suffix ``_array``) working on
stacks of quaternions of shape ``(..., 4)``; the path and homotopy code is
built on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import get_tolerances
from .errors import InputValidationError

__all__ = [
    "UnitQuaternion",
    "RotationMatrix",
    "AxisAngle",
    "IDENTITY_QUAT",
    "quat_from_axis_angle",
    "quat_compose",
    "quat_conjugate",
    "quat_to_matrix",
    "matrix_to_quat",
    "rotation_distance",
    "rotation_angle",
    "canonicalize_array",
    "quat_multiply_array",
    "quat_to_matrix_array",
    "projected_distance_array",
    "as_quat_array",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class UnitQuaternion:
    """A point of the unit 3-sphere, renormalized on construction."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        v = np.array([self.w, self.x, self.y, self.z], dtype=float)
        n = np.linalg.norm(v)
        if not np.isfinite(n) or n == 0.0:
            raise InputValidationError("quaternion must be finite and nonzero")
        # already-unit input is kept bit-for-bit so that -q is exactly -1 * q
        if abs(n - 1.0) > 1e-15:
            v /= n
        for name, value in zip("wxyz", v):
            object.__setattr__(self, name, float(value))

    @classmethod
    def from_array(cls, a) -> "UnitQuaternion":
        a = np.asarray(a, dtype=float).reshape(4)
        return cls(*a)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __neg__(self) -> "UnitQuaternion":
        return UnitQuaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: "UnitQuaternion") -> "UnitQuaternion":
        return quat_compose(self, other)

    def to_matrix(self) -> "RotationMatrix":
        return quat_to_matrix(self)


IDENTITY_QUAT = UnitQuaternion(1.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class RotationMatrix:
    """A 3x3 special orthogonal matrix.  The array is stored read-only."""

    m: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.m, dtype=float)
        if m.shape != (3, 3) or not np.all(np.isfinite(m)):
            raise InputValidationError(f"expected a finite 3x3 matrix, got shape {m.shape}")
        tol = get_tolerances().orthogonality
        err = np.max(np.abs(m.T @ m - np.eye(3)))
        if err > tol:
            raise InputValidationError(f"matrix is not orthogonal (max |m^T m - I| = {err:.3e})")
        det = np.linalg.det(m)
        if abs(det - 1.0) > tol:
            raise InputValidationError(f"matrix has determinant {det:.12f}, expected 1")
        object.__setattr__(self, "m", _frozen(m))

    @classmethod
    def identity(cls) -> "RotationMatrix":
        return cls(np.eye(3))

    def __matmul__(self, other):
        if isinstance(other, RotationMatrix):
            return RotationMatrix(self.m @ other.m)
        return self.m @ np.asarray(other, dtype=float)

    @property
    def T(self) -> "RotationMatrix":
        return RotationMatrix(self.m.T)

    def allclose(self, other: "RotationMatrix", atol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.m - other.m)) <= atol)

    def __repr__(self) -> str:
        rows = ", ".join("[" + ", ".join(f"{v:.6g}" for v in r) + "]" for r in self.m)
        return f"RotationMatrix([{rows}])"


@dataclass(frozen=True)
class AxisAngle:
    axis: tuple[float, float, float]
    angle: float

    def __post_init__(self) -> None:
        axis = _unit_axis(self.axis, get_tolerances().unit_norm)
        object.__setattr__(self, "axis", tuple(float(a) for a in axis))
        object.__setattr__(self, "angle", float(np.mod(self.angle, 2 * np.pi)))

    def to_quat(self) -> UnitQuaternion:
        return quat_from_axis_angle(self.axis, self.angle)


def _unit_axis(axis, tol: float) -> np.ndarray:
    a = np.asarray(axis, dtype=float).reshape(3)
    n = np.linalg.norm(a)
    if not np.isfinite(n) or abs(n - 1.0) > tol:
        raise InputValidationError(f"axis must have unit length (|axis| = {n:.12g})")
    return a / n


def as_quat_array(q) -> np.ndarray:
    """Coerce a UnitQuaternion or array-like to a float array of shape (..., 4)."""
    if isinstance(q, UnitQuaternion):
        return q.as_array()
    a = np.asarray(q, dtype=float)
    if a.shape[-1] != 4:
        raise InputValidationError(f"quaternion arrays need a trailing axis of length 4, got {a.shape}")
    return a


def _as_matrix(r) -> np.ndarray:
    return r.m if isinstance(r, RotationMatrix) else np.asarray(r, dtype=float)


# --------------------------------------------------------------------------- #
# Array kernels
# --------------------------------------------------------------------------- #


def quat_multiply_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable quaternion stacks."""
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def quat_to_matrix_array(q: np.ndarray) -> np.ndarray:
    w, x, y, z = np.moveaxis(q, -1, 0)
    out = np.empty(q.shape[:-1] + (3, 3))
    out[..., 0, 0] = 1 - 2 * (y * y + z * z)
    out[..., 0, 1] = 2 * (x * y - w * z)
    out[..., 0, 2] = 2 * (x * z + w * y)
    out[..., 1, 0] = 2 * (x * y + w * z)
    out[..., 1, 1] = 1 - 2 * (x * x + z * z)
    out[..., 1, 2] = 2 * (y * z - w * x)
    out[..., 2, 0] = 2 * (x * z - w * y)
    out[..., 2, 1] = 2 * (y * z + w * x)
    out[..., 2, 2] = 1 - 2 * (x * x + y * y)
    return out


def canonicalize_array(q: np.ndarray, zero_tol: float | None = None) -> np.ndarray:
    """Pick the representative of each ``±q`` pair with ``w >= 0``.

    When ``|w|`` is below ``zero_tol`` the first component of ``(x, y, z)``
    that is not (nearly) zero is made positive instead.
    """
    if zero_tol is None:
        zero_tol = get_tolerances().canonical_zero
    q = np.array(q, dtype=float, copy=True)
    flat = q.reshape(-1, 4)
    flip = flat[:, 0] < 0
    tie = np.abs(flat[:, 0]) <= zero_tol
    if np.any(tie):
        vec = flat[tie, 1:]
        nonzero = np.abs(vec) > zero_tol
        first = np.argmax(nonzero, axis=1)
        lead = vec[np.arange(len(vec)), first]
        flip[tie] = lead < 0
    flat[flip] *= -1.0
    flat[tie, 0] = np.abs(flat[tie, 0])
    return flat.reshape(q.shape)


def projected_distance_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rotation angle between the rotations represented by quaternions a and b.

    Uses ``4 atan2(|a - b|, |a + b|)`` after aligning signs, which stays
    accurate for both tiny and near-pi angles.
    """
    sign = np.where(np.sum(a * b, axis=-1) < 0, -1.0, 1.0)[..., None]
    bb = b * sign
    return 4.0 * np.arctan2(np.linalg.norm(a - bb, axis=-1), np.linalg.norm(a + bb, axis=-1))


# --------------------------------------------------------------------------- #
# Value-level operations
# --------------------------------------------------------------------------- #


def quat_from_axis_angle(axis, angle: float) -> UnitQuaternion:
    """Quaternion ``(cos(angle/2), sin(angle/2) * axis)``.

    >>> quat_from_axis_angle((0, 0, 1), 0.0)
    UnitQuaternion(w=1.0, x=0.0, y=0.0, z=0.0)
    """
    n = _unit_axis(axis, get_tolerances().axis_norm)
    h = 0.5 * float(angle)
    s = np.sin(h)
    return UnitQuaternion(np.cos(h), s * n[0], s * n[1], s * n[2])


def quat_compose(a: UnitQuaternion, b: UnitQuaternion) -> UnitQuaternion:
    """Hamilton product ``a * b``; as rotations, apply ``b`` first then ``a``."""
    return UnitQuaternion.from_array(quat_multiply_array(a.as_array(), b.as_array()))


def quat_conjugate(q: UnitQuaternion) -> UnitQuaternion:
    return UnitQuaternion(q.w, -q.x, -q.y, -q.z)


def quat_to_matrix(q: UnitQuaternion) -> RotationMatrix:
    return RotationMatrix(quat_to_matrix_array(as_quat_array(q)))


def matrix_to_quat(m) -> UnitQuaternion:
    """Canonical lift of a rotation matrix (``w >= 0``, ties broken on x, y, z).

    Raises InputValidationError for matrices that are not special orthogonal.
    """
    m = RotationMatrix(_as_matrix(m)).m
    tr = np.trace(m)
    # Shepperd: branch on the largest of w^2, x^2, y^2, z^2
    diag = np.array([tr, m[0, 0], m[1, 1], m[2, 2]])
    k = int(np.argmax(diag))
    if k == 0:
        s = 2.0 * np.sqrt(1.0 + tr)
        q = [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
    elif k == 1:
        s = 2.0 * np.sqrt(max(1.0 + m[0, 0] - m[1, 1] - m[2, 2], 0.0))
        q = [(m[2, 1] - m[1, 2]) / s, 0.25 * s, (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s]
    elif k == 2:
        s = 2.0 * np.sqrt(max(1.0 - m[0, 0] + m[1, 1] - m[2, 2], 0.0))
        q = [(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, 0.25 * s, (m[1, 2] + m[2, 1]) / s]
    else:
        s = 2.0 * np.sqrt(max(1.0 - m[0, 0] - m[1, 1] + m[2, 2], 0.0))
        q = [(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s, (m[1, 2] + m[2, 1]) / s, 0.25 * s]
    q = np.asarray(q)
    q /= np.linalg.norm(q)
    return UnitQuaternion.from_array(canonicalize_array(q))


def rotation_angle(r) -> float:
    """Rotation angle in [0, pi] of a single rotation matrix."""
    m = _as_matrix(r)
    vee = np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
    return float(np.arctan2(np.linalg.norm(vee), np.trace(m) - 1.0))


def rotation_distance(a, b) -> float:
    """Geodesic distance on SO(3): the rotation angle of ``a^T b``, in [0, pi]."""
    return rotation_angle(_as_matrix(a).T @ _as_matrix(b))
