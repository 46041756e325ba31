"""Sampled rotation paths and based loops.

A :class:`RotationPath` is an ordered stack of unit quaternions, each standing
for the rotation it projects to; the sign of an individual sample carries no
meaning.  Continuity is a sampling contract: after ``refine(p, eps)`` no two
consecutive rotations are more than ``eps`` apart.

A :class:`Loop` is a path whose first and last rotations equal its basepoint.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .config import get_tolerances
from .errors import InputValidationError
from .rotation import (
    RotationMatrix,
    UnitQuaternion,
    _unit_axis,
    as_quat_array,
    matrix_to_quat,
    projected_distance_array,
    quat_to_matrix_array,
)

__all__ = [
    "HomotopyClass",
    "RotationPath",
    "Loop",
    "axis_rotation_loop",
    "constant_loop",
    "concat",
    "reverse",
    "refine",
    "slerp_segments",
    "random_rotations",
    "random_loop",
    "path_to_json",
    "path_from_json",
    "save_path",
    "load_path",
]


class HomotopyClass(enum.Enum):
    """Element of the two-element group {+1, -1} of loop classes."""

    TRIVIAL = 1
    NONTRIVIAL = -1

    @property
    def sign(self) -> int:
        return self.value

    def __mul__(self, other: "HomotopyClass") -> "HomotopyClass":
        return HomotopyClass(self.value * other.value)

    def __str__(self) -> str:
        return f"{self.value:+d}"


@dataclass(frozen=True, eq=False)
class RotationPath:
    samples: np.ndarray = field(repr=False)
    meta: str = ""

    def __post_init__(self) -> None:
        q = np.array(as_quat_array(self.samples), dtype=float)
        if q.ndim != 2 or len(q) < 2:
            raise InputValidationError("a path needs at least two quaternion samples")
        if not np.all(np.isfinite(q)):
            raise InputValidationError("path samples must be finite")
        norms = np.linalg.norm(q, axis=1, keepdims=True)
        if np.any(norms == 0):
            raise InputValidationError("zero quaternion in path")
        q = np.where(np.abs(norms - 1.0) > 1e-15, q / norms, q)
        q.setflags(write=False)
        object.__setattr__(self, "samples", q)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def quaternions(self) -> list[UnitQuaternion]:
        return [UnitQuaternion.from_array(s) for s in self.samples]

    def matrices(self) -> np.ndarray:
        return quat_to_matrix_array(self.samples)

    def steps(self) -> np.ndarray:
        """Rotation distance between each pair of consecutive samples."""
        return projected_distance_array(self.samples[:-1], self.samples[1:])

    def max_step(self) -> float:
        return float(self.steps().max())

    @property
    def start(self) -> RotationMatrix:
        return RotationMatrix(quat_to_matrix_array(self.samples[0]))

    @property
    def end(self) -> RotationMatrix:
        return RotationMatrix(quat_to_matrix_array(self.samples[-1]))

    def with_samples(self, samples: np.ndarray, meta: str | None = None) -> "RotationPath":
        return RotationPath(samples, self.meta if meta is None else meta)


@dataclass(frozen=True, eq=False)
class Loop:
    path: RotationPath
    basepoint: RotationMatrix = field(default_factory=RotationMatrix.identity)

    def __post_init__(self) -> None:
        tol = get_tolerances().closure
        b = self.basepoint.m
        ends = quat_to_matrix_array(self.path.samples[[0, -1]])
        err = np.max(np.abs(ends - b))
        if err > tol:
            raise InputValidationError(f"path is not closed at the basepoint (error {err:.3e})")

    @property
    def samples(self) -> np.ndarray:
        return self.path.samples

    @property
    def meta(self) -> str:
        return self.path.meta

    def __len__(self) -> int:
        return len(self.path)

    def max_step(self) -> float:
        return self.path.max_step()

    def with_samples(self, samples: np.ndarray, meta: str | None = None) -> "Loop":
        return Loop(self.path.with_samples(samples, meta), self.basepoint)


PathLike = Union[RotationPath, Loop]


def _axis_samples(axis, total_angle: float, n: int) -> np.ndarray:
    a = _unit_axis(axis, get_tolerances().axis_norm)
    half = 0.5 * total_angle * np.linspace(0.0, 1.0, n)
    return np.column_stack([np.cos(half), np.outer(np.sin(half), a)])


def axis_rotation_loop(axis, total_angle: float, n: int = 100) -> PathLike:
    """Rotate steadily about a fixed axis from the identity through ``total_angle``.

    Returns a :class:`Loop` based at the identity when the angle is a whole
    number of turns, otherwise an open :class:`RotationPath`.
    """
    if n < 2:
        raise InputValidationError("need at least two samples")
    samples = _axis_samples(axis, total_angle, n)
    meta = f"axis rotation about {tuple(round(float(c), 12) for c in axis)} by {float(total_angle)!r}"
    turns = total_angle / (2 * np.pi)
    path = RotationPath(samples, meta)
    if abs(turns - round(turns)) * 2 * np.pi <= 1e-9:
        # close exactly: the last sample is +-identity by construction, up to rounding
        fixed = samples.copy()
        fixed[-1] = np.sign(fixed[-1, 0]) * np.array([1.0, 0.0, 0.0, 0.0])
        return Loop(RotationPath(fixed, meta))
    return path


def constant_loop(basepoint: RotationMatrix | None = None, n: int = 2) -> Loop:
    b = RotationMatrix.identity() if basepoint is None else basepoint
    q = matrix_to_quat(b).as_array()
    return Loop(RotationPath(np.tile(q, (n, 1)), "constant"), b)


def concat(a: Loop, b: Loop) -> Loop:
    """Traverse ``a`` then ``b``; the shared junction sample is kept once."""
    if np.max(np.abs(a.basepoint.m - b.basepoint.m)) > get_tolerances().closure:
        raise InputValidationError("cannot concatenate loops with different basepoints")
    samples = np.concatenate([a.samples, b.samples[1:]])
    return Loop(RotationPath(samples, f"({a.meta}) * ({b.meta})"), a.basepoint)


def reverse(p: PathLike) -> PathLike:
    if isinstance(p, Loop):
        return Loop(reverse(p.path), p.basepoint)
    return RotationPath(p.samples[::-1].copy(), f"reverse({p.meta})")


def slerp_segments(q0: np.ndarray, q1: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Shorter-arc spherical interpolation, row-wise: q0[i] -> q1[i] at t[i]."""
    sign = np.where(np.sum(q0 * q1, axis=-1) < 0, -1.0, 1.0)[:, None]
    q1 = q1 * sign
    dot = np.clip(np.sum(q0 * q1, axis=-1), -1.0, 1.0)
    omega = np.arctan2(np.linalg.norm(q1 - dot[:, None] * q0, axis=-1), dot)
    t = t[:, None]
    small = omega < 1e-9
    so = np.where(small, 1.0, np.sin(omega))[:, None]
    om = omega[:, None]
    w0 = np.where(small[:, None], 1.0 - t, np.sin((1.0 - t) * om) / so)
    w1 = np.where(small[:, None], t, np.sin(t * om) / so)
    out = w0 * q0 + w1 * q1
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def _refine_samples(q: np.ndarray, eps: float) -> np.ndarray:
    d = projected_distance_array(q[:-1], q[1:])
    if np.all(d <= eps):
        return q
    # the slerp parameter is proportional to the rotation angle, so k equal
    # pieces each have length d/k; the margin absorbs rounding
    k = np.maximum(1, np.ceil(d / eps * (1.0 + 1e-9))).astype(int)
    seg = np.repeat(np.arange(len(k)), k)
    offsets = np.arange(len(seg)) - np.repeat(np.cumsum(k) - k, k)
    t = offsets / k[seg]
    inner = slerp_segments(q[seg], q[seg + 1], t)
    # keep original samples (and their signs) exactly
    inner[offsets == 0] = q[:-1]
    return np.concatenate([inner, q[-1:]])


def refine(p: PathLike, eps: float) -> PathLike:
    """Insert geodesic interpolants until every step is at most ``eps``.

    Endpoints and existing samples are kept; a path that already satisfies
    the bound is returned unchanged.
    """
    if eps <= 0:
        raise InputValidationError("refinement step must be positive")
    q = _refine_samples(p.samples, eps)
    if q is p.samples:
        return p
    return p.with_samples(q)


def random_rotations(rng: np.random.Generator, k: int) -> np.ndarray:
    """k Haar-uniform rotations as unit quaternions."""
    g = rng.standard_normal((k, 4))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def random_loop(seed: int, k: int = 3, eps: float | None = None) -> Loop:
    """Loop at the identity through k random waypoints joined by geodesics.

    Deterministic in ``seed`` (counter-based Philox stream).  ``k = 0`` gives
    the constant loop.
    """
    if k < 0:
        raise InputValidationError("waypoint count must be non-negative")
    eps = get_tolerances().loop_refinement if eps is None else eps
    if k == 0:
        return Loop(RotationPath(np.tile([1.0, 0.0, 0.0, 0.0], (2, 1)), f"random_loop(seed={seed}, k=0)"))
    rng = np.random.Generator(np.random.Philox(seed))
    ident = np.array([[1.0, 0.0, 0.0, 0.0]])
    waypoints = np.concatenate([ident, random_rotations(rng, k), ident])
    path = RotationPath(waypoints, f"random_loop(seed={seed}, k={k})")
    return Loop(refine(path, eps))


# --------------------------------------------------------------------------- #
# JSON interchange: {"basepoint": [w,x,y,z] (optional), "samples": [[w,x,y,z], ...]}
# --------------------------------------------------------------------------- #


def path_to_json(p: PathLike) -> dict:
    doc: dict = {}
    if isinstance(p, Loop):
        doc["basepoint"] = matrix_to_quat(p.basepoint).as_array().tolist()
    doc["samples"] = p.samples.tolist()
    if p.meta:
        doc["meta"] = p.meta
    return doc


def path_from_json(doc: dict, *, as_loop: bool | None = None) -> PathLike:
    """Parse a path document.

    With ``as_loop=None`` a document yields a :class:`Loop` when it names a
    basepoint or when it is closed, and a :class:`RotationPath` otherwise.
    ``as_loop=True`` insists on a loop (basepoint defaults to the first sample).
    """
    if not isinstance(doc, dict) or "samples" not in doc:
        raise InputValidationError("path document must be an object with a 'samples' array")
    try:
        samples = np.asarray(doc["samples"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputValidationError(f"samples are not numeric: {exc}") from None
    if samples.ndim != 2 or samples.shape[1] != 4 or len(samples) < 2:
        raise InputValidationError("samples must be a list of at least two [w, x, y, z] entries")
    path = RotationPath(samples, str(doc.get("meta", "")))
    base = doc.get("basepoint")
    if base is not None:
        try:
            bq = UnitQuaternion.from_array(np.asarray(base, dtype=float))
        except (TypeError, ValueError) as exc:
            raise InputValidationError(f"bad basepoint: {exc}") from None
        if as_loop is False:
            return path
        return Loop(path, RotationMatrix(quat_to_matrix_array(bq.as_array())))
    closed = np.max(np.abs(path.matrices()[0] - path.matrices()[-1])) <= get_tolerances().closure
    if as_loop or (as_loop is None and closed):
        return Loop(path, path.start)
    return path


def save_path(p: PathLike, filename) -> None:
    Path(filename).write_text(json.dumps(path_to_json(p)))


def load_path(filename, *, as_loop: bool | None = None) -> PathLike:
    try:
        doc = json.loads(Path(filename).read_text())
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"invalid JSON ({exc})") from None
    return path_from_json(doc, as_loop=as_loop)

