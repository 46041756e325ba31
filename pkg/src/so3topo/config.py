"""Numerical tolerances shared by every module.

All thresholds live in one frozen record.  Code reads the active record with
:func:`get_tolerances`; callers may override values for a block of code with
:func:`use_tolerances`, which is context-local and therefore thread safe.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class Tolerances:
    unit_norm: float = 1e-12
    axis_norm: float = 1e-9
    orthogonality: float = 1e-10
    canonical_zero: float = 1e-12
    closure: float = 1e-9
    south_pole: float = 1e-9
    south_pole_exclusion: float = 1e-6
    boundary_epsilon: float = 1e-5
    boundary_stability: float = 1e-8
    identification: float = 1e-7
    ball_boundary: float = 1e-9
    jump_threshold: float = 1.5707963267948966
    parity_refinement: float = 0.2
    lift_max_step: float = 1.0
    class_chord: float = 1e-6
    grid_step: float = 0.1
    pole_clearance: float = 0.3
    pole_attempts: int = 1000
    row0_fidelity: float = 1e-6
    final_row: float = 1e-9
    loop_refinement: float = 0.05
    belt_refinement: float = 0.1
    belt_closure: float = 1e-6

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name!r} must be positive")

    def replace(self, **overrides: float) -> "Tolerances":
        unknown = set(overrides) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        if "pole_attempts" in overrides:
            overrides["pole_attempts"] = int(overrides["pole_attempts"])
        return dataclasses.replace(self, **overrides)


DEFAULT_TOLERANCES = Tolerances()

_active: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "so3topo_tolerances", default=DEFAULT_TOLERANCES
)


def get_tolerances() -> Tolerances:
    return _active.get()


@contextlib.contextmanager
def use_tolerances(tol: Tolerances | None = None, **overrides: float) -> Iterator[Tolerances]:
    """Temporarily install a tolerance record (or overrides of the current one)."""
    base = tol if tol is not None else _active.get()
    new = base.replace(**overrides) if overrides else base
    token = _active.set(new)
    try:
        yield new
    finally:
        _active.reset(token)
