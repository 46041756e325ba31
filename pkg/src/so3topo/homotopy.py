"""Lifting loops to the 3-sphere, classifying them, and contracting them.

Lifting picks, sample by sample, the quaternion sign closest to the previous
lift.  For a loop at the basepoint ``b`` the lift starts at a quaternion ``q0``
over ``b`` and ends at either ``q0`` or ``-q0``; that endpoint sign is the
homotopy class (+1 contractible, -1 not).

Contraction of a +1 loop works on the closed lifted loop in the 3-sphere:
project it stereographically into R^3 from a pole that stays clear of it,
shrink it along straight lines onto the image of ``q0``, and map every stage
back down to rotations.  The result is a :class:`HomotopyGrid` whose rows are
intermediate loops.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import get_tolerances
from .errors import (
    InputValidationError,
    NotNullHomotopic,
    NumericalDriftError,
    PoleSearchFailed,
    RefinementRequired,
)
from .paths import HomotopyClass, Loop, RotationPath, refine, slerp_segments
from .rotation import (
    RotationMatrix,
    UnitQuaternion,
    as_quat_array,
    matrix_to_quat,
    projected_distance_array,
    quat_to_matrix_array,
)

__all__ = [
    "LiftedPath",
    "HomotopyGrid",
    "HomotopyReport",
    "lift",
    "classify",
    "contract",
    "verify_homotopy",
    "arc_distances",
    "stereographic",
    "inverse_stereographic",
    "find_pole",
]


@dataclass(frozen=True, eq=False)
class LiftedPath:
    samples: np.ndarray = field(repr=False)
    source: RotationPath = field(repr=False)

    @property
    def start(self) -> UnitQuaternion:
        return UnitQuaternion.from_array(self.samples[0])

    @property
    def end(self) -> UnitQuaternion:
        return UnitQuaternion.from_array(self.samples[-1])


def lift(p: RotationPath | Loop, initial: UnitQuaternion | None = None) -> LiftedPath:
    """Continuous lift of a sampled path to unit quaternions, starting at ``initial``.

    Steps must be shorter than ``lift_max_step`` (1 rad) so the two sign
    choices at every sample are never close to a tie.
    """
    tol = get_tolerances()
    path = p.path if isinstance(p, Loop) else p
    q = path.samples
    steps = path.steps()
    if steps.size and steps.max() >= tol.lift_max_step:
        raise RefinementRequired(f"lifting needs steps < {tol.lift_max_step} rad (max step {steps.max():.4f})")
    q0 = q[0] if initial is None else as_quat_array(initial)
    if np.max(np.abs(quat_to_matrix_array(q0) - quat_to_matrix_array(q[0]))) > get_tolerances().closure:
        raise InputValidationError("initial quaternion does not project to the first rotation of the path")
    dots = np.sum(q[:-1] * q[1:], axis=1)
    flips = np.concatenate([[1.0 if np.dot(q0, q[0]) >= 0 else -1.0], np.where(dots < 0, -1.0, 1.0)])
    signs = np.cumprod(flips)
    out = q * signs[:, None]
    out[0] = q0
    out.setflags(write=False)
    return LiftedPath(out, path)


def _endpoint_class(lifted: LiftedPath) -> HomotopyClass:
    tol = get_tolerances().class_chord
    a, b = lifted.samples[0], lifted.samples[-1]
    if np.linalg.norm(b - a) <= tol:
        return HomotopyClass.TRIVIAL
    if np.linalg.norm(b + a) <= tol:
        return HomotopyClass.NONTRIVIAL
    raise NumericalDriftError(
        f"lift endpoint matches neither +initial nor -initial (chords {np.linalg.norm(b - a):.3e}, "
        f"{np.linalg.norm(b + a):.3e}); refine the loop and retry"
    )


def classify(loop: Loop) -> HomotopyClass:
    """Homotopy class of a based loop: +1 if it lifts to a closed loop, else -1."""
    return _endpoint_class(lift(loop.path, matrix_to_quat(loop.basepoint)))


# --------------------------------------------------------------------------- #
# Geometry on the 3-sphere
# --------------------------------------------------------------------------- #


def arc_distances(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Great-circle distance from each point to each shorter arc ``a[j] -> b[j]``.

    Returns an array of shape ``(len(points), len(a))``.
    """
    points = np.atleast_2d(points)
    sign = np.where(np.sum(a * b, axis=1) < 0, -1.0, 1.0)[:, None]
    b = b * sign
    ab = np.sum(a * b, axis=1)
    perp = b - ab[:, None] * a
    pn = np.linalg.norm(perp, axis=1)
    span = np.arctan2(pn, ab)
    degenerate = pn < 1e-15
    e2 = perp / np.where(degenerate, 1.0, pn)[:, None]
    c1 = points @ a.T
    c2 = np.where(degenerate[None, :], 0.0, points @ e2.T)
    psi = np.arctan2(c2, c1)
    r = np.hypot(c1, c2)
    resid = points[:, None, :] - c1[..., None] * a[None] - c2[..., None] * e2[None]
    to_plane = np.arctan2(np.linalg.norm(resid, axis=2), r)
    to_a = 2.0 * np.arcsin(np.clip(0.5 * np.linalg.norm(points[:, None, :] - a[None], axis=2), 0, 1))
    to_b = 2.0 * np.arcsin(np.clip(0.5 * np.linalg.norm(points[:, None, :] - b[None], axis=2), 0, 1))
    inside = (psi >= 0) & (psi <= span[None, :]) & ~degenerate[None, :]
    return np.where(inside, to_plane, np.minimum(to_a, to_b))


def _complement_basis(pole: np.ndarray) -> np.ndarray:
    """4x3 orthonormal basis of the hyperplane orthogonal to ``pole``."""
    e0 = np.array([1.0, 0.0, 0.0, 0.0])
    u = pole - e0
    n = np.linalg.norm(u)
    if n < 1e-12:
        return np.eye(4)[:, 1:]
    u /= n
    H = np.eye(4) - 2.0 * np.outer(u, u)
    return H[:, 1:]


def stereographic(q: np.ndarray, pole: np.ndarray) -> np.ndarray:
    """Project points of the 3-sphere (not the pole) to R^3."""
    basis = _complement_basis(pole)
    return (q @ basis) / (1.0 - q @ pole)[..., None]


def inverse_stereographic(x: np.ndarray, pole: np.ndarray) -> np.ndarray:
    basis = _complement_basis(pole)
    r2 = np.sum(x * x, axis=-1)[..., None]
    q = pole * ((r2 - 1.0) / (r2 + 1.0)) + (x @ basis.T) * (2.0 / (r2 + 1.0))
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def find_pole(
    curve: np.ndarray,
    rng: np.random.Generator,
    clearance: float | None = None,
    attempts: int | None = None,
    batch: int = 32,
) -> tuple[np.ndarray, float]:
    """Rejection-sample a point of the 3-sphere at least ``clearance`` from a polygonal curve.

    Candidates are drawn in batches; among the acceptable ones in the first
    successful batch the one farthest from the curve is returned together
    with its distance.
    """
    tol = get_tolerances()
    clearance = tol.pole_clearance if clearance is None else clearance
    attempts = tol.pole_attempts if attempts is None else attempts
    a, b = curve[:-1], curve[1:]
    if len(a) == 0:
        a = b = curve[:1]
    drawn = 0
    while drawn < attempts:
        m = min(batch, attempts - drawn)
        cand = rng.standard_normal((m, 4))
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        drawn += m
        dist = arc_distances(cand, a, b).min(axis=1)
        best = int(np.argmax(dist))
        if dist[best] >= clearance:
            return cand[best], float(dist[best])
    raise PoleSearchFailed(f"no pole with clearance {clearance} rad found in {attempts} attempts")


# --------------------------------------------------------------------------- #
# Homotopy grids
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class HomotopyGrid:
    """Rows are loops; row 0 is the input loop, the last row is constant.

    ``rows`` has shape ``(S + 1, T + 1, 4)``.
    """

    rows: np.ndarray = field(repr=False)
    basepoint: RotationMatrix = field(default_factory=RotationMatrix.identity)
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        g = np.array(self.rows, dtype=float)
        if g.ndim != 3 or g.shape[2] != 4 or g.shape[0] < 1 or g.shape[1] < 2:
            raise InputValidationError(f"grid must have shape (S+1, T+1, 4), got {g.shape}")
        n = np.linalg.norm(g, axis=2, keepdims=True)
        g = np.where(np.abs(n - 1.0) > 1e-15, g / n, g)
        g.setflags(write=False)
        object.__setattr__(self, "rows", g)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape[0], self.rows.shape[1]

    def row(self, i: int) -> RotationPath:
        return RotationPath(self.rows[i], f"grid row {i}")

    def row_steps(self) -> np.ndarray:
        return projected_distance_array(self.rows[:, :-1], self.rows[:, 1:])

    def column_steps(self) -> np.ndarray:
        return projected_distance_array(self.rows[:-1], self.rows[1:])

    def to_csv(self, target=None) -> str | None:
        """Write ``s,t,w,x,y,z`` rows (row-major); returns the text if no target given."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "t", "w", "x", "y", "z"])
        S, T = self.shape
        s_idx, t_idx = np.meshgrid(np.arange(S), np.arange(T), indexing="ij")
        flat = self.rows.reshape(-1, 4)
        for s, t, q in zip(s_idx.ravel(), t_idx.ravel(), flat):
            w.writerow([int(s), int(t), *(repr(float(c)) for c in q)])
        text = buf.getvalue()
        if target is None:
            return text
        if hasattr(target, "write"):
            target.write(text)
        else:
            Path(target).write_text(text)
        return None

    @classmethod
    def from_csv(cls, source, basepoint: RotationMatrix | None = None) -> "HomotopyGrid":
        """Parse the CSV format written by :meth:`to_csv`.

        Without an explicit basepoint the first node's rotation is used.
        """
        if hasattr(source, "read"):
            text = source.read()
        elif isinstance(source, str) and "\n" in source:
            text = source
        else:
            text = Path(source).read_text()
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["s", "t", "w", "x", "y", "z"]:
            raise InputValidationError("grid CSV must start with header s,t,w,x,y,z")
        recs = [r for r in reader if r]
        try:
            data = np.array([[float(v) for v in r] for r in recs])
        except ValueError as exc:
            raise InputValidationError(f"non-numeric grid CSV entry: {exc}") from None
        if data.ndim != 2 or data.shape[1] != 6:
            raise InputValidationError("grid CSV rows must have six fields")
        s = data[:, 0].astype(int)
        t = data[:, 1].astype(int)
        S, T = s.max() + 1, t.max() + 1
        if len(data) != S * T:
            raise InputValidationError("grid CSV is not a complete rectangular grid")
        rows = np.empty((S, T, 4))
        rows[s, t] = data[:, 2:]
        if basepoint is None:
            basepoint = RotationMatrix(quat_to_matrix_array(rows[0, 0] / np.linalg.norm(rows[0, 0])))
        return cls(rows, basepoint)


@dataclass
class HomotopyReport:
    passed: bool
    max_row_step: float
    max_column_step: float
    row0_error: float
    final_row_error: float
    endpoint_error: float
    worst: str = ""
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}: max row step {self.max_row_step:.4f}, max column step {self.max_column_step:.4f}, "
            f"row-0 error {self.row0_error:.2e}, final-row error {self.final_row_error:.2e}, "
            f"endpoint error {self.endpoint_error:.2e}" + (f"; worst: {self.worst}" if self.worst else "")
        )


def _stage_points(X: np.ndarray, x0: np.ndarray, s: np.ndarray) -> np.ndarray:
    return (1.0 - s)[:, None, None] * X[None, :, :] + s[:, None, None] * x0


def _column_speed_bound(X: np.ndarray, x0: np.ndarray) -> float:
    """Upper bound on rotation speed (per unit stage parameter) over all columns."""
    d = x0 - X
    L = np.linalg.norm(d, axis=1)
    # closest approach of the segment X -> x0 to the origin
    t = np.clip(-np.sum(X * d, axis=1) / np.where(L == 0, 1.0, L * L), 0.0, 1.0)
    closest = np.linalg.norm(X + t[:, None] * d, axis=1)
    return float(np.max(4.0 * L / (1.0 + closest**2))) if len(X) else 0.0


def contract(
    loop: Loop,
    rng: np.random.Generator | int | None = 0,
    grid_step: float | None = None,
) -> HomotopyGrid:
    """Explicit null-homotopy of a contractible loop.

    Raises NotNullHomotopic for loops of class -1 and PoleSearchFailed when
    no projection pole with enough clearance is found.
    """
    tol = get_tolerances()
    eps = tol.grid_step if grid_step is None else grid_step
    rng = rng if isinstance(rng, np.random.Generator) else np.random.Generator(np.random.Philox(rng or 0))

    fine = refine(loop, min(tol.loop_refinement, 0.5 * eps))
    q0 = matrix_to_quat(loop.basepoint).as_array()
    lifted = lift(fine.path, q0)
    if _endpoint_class(lifted) is HomotopyClass.NONTRIVIAL:
        raise NotNullHomotopic("loop is in the nontrivial class and cannot be contracted")
    gamma = np.array(lifted.samples)
    gamma[-1] = q0

    pole, clearance = find_pole(gamma, rng)
    X = stereographic(gamma, pole)
    x0 = stereographic(q0[None], pole)[0]

    # split t-segments and add stages until both grid directions are fine
    for _ in range(50):
        S = max(1, int(np.ceil(_column_speed_bound(X, x0) / (0.5 * eps) * (1.0 + 1e-9))))
        s = np.linspace(0.0, 1.0, S + 1)
        rows = inverse_stereographic(_stage_points(X, x0, s), pole)
        row_steps = projected_distance_array(rows[:, :-1], rows[:, 1:]).max(axis=0)
        if np.all(row_steps <= eps):
            break
        k = np.maximum(1, np.ceil(row_steps / eps * 1.1)).astype(int)
        seg = np.repeat(np.arange(len(k)), k)
        offsets = np.arange(len(seg)) - np.repeat(np.cumsum(k) - k, k)
        pts = slerp_segments(gamma[seg], gamma[seg + 1], offsets / k[seg])
        pts[offsets == 0] = gamma[:-1]
        gamma = np.concatenate([pts, gamma[-1:]])
        X = stereographic(gamma, pole)
    else:
        raise NumericalDriftError("contraction grid did not converge")

    rows[0] = gamma
    rows[-1] = q0
    rows[:, 0] = q0
    rows[:, -1] = q0
    meta = {
        "stages": S,
        "columns": len(gamma),
        "pole": pole.tolist(),
        "pole_clearance": clearance,
        "grid_step": eps,
        "source": loop.meta,
    }
    return HomotopyGrid(rows, loop.basepoint, meta)


def _match_row0(row0: np.ndarray, loop_q: np.ndarray, tol: float) -> float:
    """Largest deviation of row 0 from the loop's piecewise-geodesic curve.

    Loop samples must appear in order in row 0; the nodes between two of them
    must lie on the geodesic joining them.  Returns ``inf`` if the order of
    loop samples cannot be matched.
    """
    n = len(loop_q)
    if projected_distance_array(row0[0], loop_q[0]) > tol:
        return float("inf")
    j = 0
    worst = float(projected_distance_array(row0[0], loop_q[0]))
    for node in row0[1:]:
        if j + 1 < n:
            d_next = float(projected_distance_array(node, loop_q[j + 1]))
            if d_next <= tol:
                j += 1
                worst = max(worst, d_next)
                continue
            a, b = loop_q[j][None], loop_q[j + 1][None]
            sign = 1.0 if np.dot(node, a[0]) >= 0 else -1.0
            d = 2.0 * float(arc_distances(sign * node[None], a, b)[0, 0])
            worst = max(worst, d)
            if d > tol:
                return d
        else:
            d = float(projected_distance_array(node, loop_q[-1]))
            worst = max(worst, d)
    # any loop samples left unmatched must coincide with the last one
    if j + 1 < n and np.max(projected_distance_array(loop_q[j + 1:], loop_q[j])) > tol:
        return float("inf")
    return worst


def verify_homotopy(g: HomotopyGrid, loop: Loop, grid_step: float | None = None) -> HomotopyReport:
    """Check that ``g`` is a based null-homotopy of ``loop``.

    Checks fine steps in both grid directions, pinned end columns, a constant
    final row, and that row 0 reproduces the loop (as a refinement of it).
    """
    tol = get_tolerances()
    eps = tol.grid_step if grid_step is None else grid_step
    failures: list[str] = []
    rows = g.rows
    base_q = matrix_to_quat(loop.basepoint).as_array()

    rs = g.row_steps()
    cs = g.column_steps() if len(rows) > 1 else np.zeros((0, rows.shape[1]))
    max_r = float(rs.max()) if rs.size else 0.0
    max_c = float(cs.max()) if cs.size else 0.0
    worst = ""
    if max_r > eps:
        i, j = np.unravel_index(np.argmax(rs), rs.shape)
        failures.append(f"row step {max_r:.4f} > {eps} at row {i}, column {j}")
    if max_c > eps:
        i, j = np.unravel_index(np.argmax(cs), cs.shape)
        failures.append(f"column step {max_c:.4f} > {eps} between rows {i} and {i + 1}, column {j}")
    if max_r >= max_c and rs.size:
        i, j = np.unravel_index(np.argmax(rs), rs.shape)
        worst = f"row step {max_r:.4g} at (s={i}, t={j})"
    elif cs.size:
        i, j = np.unravel_index(np.argmax(cs), cs.shape)
        worst = f"column step {max_c:.4g} at (s={i}, t={j})"

    ends = np.concatenate([rows[:, 0], rows[:, -1]])
    endpoint_err = float(projected_distance_array(ends, base_q).max())
    if endpoint_err > tol.final_row:
        failures.append(f"end columns leave the basepoint by {endpoint_err:.3e}")
    final_err = float(projected_distance_array(rows[-1], base_q).max())
    if final_err > tol.final_row:
        failures.append(f"final row is not constant at the basepoint (error {final_err:.3e})")
    if np.max(np.abs(g.basepoint.m - loop.basepoint.m)) > tol.closure:
        failures.append("grid and loop have different basepoints")
    row0_err = _match_row0(rows[0], loop.samples, tol.row0_fidelity)
    if row0_err > tol.row0_fidelity:
        failures.append(f"row 0 does not reproduce the loop (error {row0_err:.3e})")

    return HomotopyReport(
        passed=not failures,
        max_row_step=max_r,
        max_column_step=max_c,
        row0_error=row0_err,
        final_row_error=final_err,
        endpoint_error=endpoint_err,
        worst=worst,
        failures=failures,
    )

