"""Dirac's belt trick.

A belt is recorded as the path of frames along it, from the wall (always the
identity) to the object.  Turning the object appends the motion to the object
end.  Whether the belt can be flattened without moving the object again is the
homotopy class of that path, and :func:`untwist` produces the flattening as a
grid whose rows are successive belt configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerances
from .errors import InputValidationError
from .homotopy import HomotopyGrid, classify, contract
from .paths import HomotopyClass, Loop, RotationPath, refine
from .rotation import RotationMatrix, _unit_axis, quat_multiply_array, quat_to_matrix_array

__all__ = ["BeltState", "new_belt", "rotate_object", "closed_ribbon", "twist_class", "untwistable", "untwist"]

RETURN_ARC_NOTE = "closed by the shortest geodesic from the object frame back to the identity"


@dataclass(frozen=True, eq=False)
class BeltState:
    ribbon: RotationPath
    history: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        q = self.ribbon.samples[0]
        if np.max(np.abs(quat_to_matrix_array(q) - np.eye(3))) > get_tolerances().closure:
            raise InputValidationError("the wall end of a belt must be the identity frame")

    @property
    def object_orientation(self) -> RotationMatrix:
        return self.ribbon.end


def new_belt(n: int = 2) -> BeltState:
    """A flat belt: every frame is the identity."""
    if n < 2:
        raise InputValidationError("a belt needs at least two samples")
    return BeltState(RotationPath(np.tile([1.0, 0.0, 0.0, 0.0], (n, 1)), "flat belt"))


def rotate_object(b: BeltState, axis, angle: float) -> BeltState:
    """Turn the object by ``angle`` about a fixed spatial ``axis``.

    The arc swept by the object frame is appended to the ribbon, which is
    then refined to ``belt_refinement`` steps.
    """
    tol = get_tolerances()
    n = _unit_axis(axis, tol.axis_norm)
    last = b.ribbon.samples[-1]
    count = max(2, int(np.ceil(abs(angle) / tol.belt_refinement)) + 1)
    half = 0.5 * angle * np.linspace(0.0, 1.0, count)
    incr = np.column_stack([np.cos(half), np.outer(np.sin(half), n)])
    arc = quat_multiply_array(incr, last[None, :])
    samples = np.concatenate([b.ribbon.samples, arc[1:]])
    ribbon = refine(RotationPath(samples, b.ribbon.meta), tol.belt_refinement)
    step = f"rotate {angle!r} rad about {tuple(float(c) for c in n)}"
    return BeltState(ribbon, b.history + (step,))


def closed_ribbon(b: BeltState) -> Loop:
    """The ribbon as a loop at the identity.

    If the object is not back at the identity the ribbon is closed with the
    shortest geodesic return arc, and the loop's ``meta`` says so.
    """
    tol = get_tolerances()
    path = b.ribbon
    if np.max(np.abs(path.matrices()[-1] - np.eye(3))) <= tol.belt_closure:
        q = np.array(path.samples)
        q[-1] = np.sign(q[-1, 0]) * np.array([1.0, 0.0, 0.0, 0.0])
        return Loop(RotationPath(q, path.meta))
    ident = np.array([[1.0, 0.0, 0.0, 0.0]])
    sign = 1.0 if path.samples[-1, 0] >= 0 else -1.0
    closing = refine(RotationPath(np.concatenate([path.samples[-1:], sign * ident])), tol.belt_refinement)
    samples = np.concatenate([path.samples, closing.samples[1:]])
    return Loop(RotationPath(samples, f"{path.meta}; {RETURN_ARC_NOTE}"))


def twist_class(b: BeltState) -> HomotopyClass:
    return classify(closed_ribbon(b))


def untwistable(b: BeltState) -> bool:
    """True when the belt can be flattened while the object stays put."""
    return twist_class(b) is HomotopyClass.TRIVIAL


def untwist(b: BeltState, rng: np.random.Generator | int | None = 0) -> HomotopyGrid:
    """Movie of the untwisting: each grid row is a belt with both ends fixed.

    Raises NotNullHomotopic when the belt carries an odd number of full turns.
    """
    return contract(closed_ribbon(b), rng=rng)
