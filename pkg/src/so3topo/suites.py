"""Self-check suites run by ``so3topo verify``.

Each suite draws its inputs from a seeded generator and returns a
:class:`SuiteResult`; none of them depend on particular random values, only on
invariants that must hold for every input.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import torus_chart as tc
from .ball_chart import crossing_parity, from_ball_array, to_ball_array
from .belt import closed_ribbon, new_belt, rotate_object, untwist, untwistable
from .errors import NotNullHomotopic
from .homotopy import classify, contract, lift, verify_homotopy
from .paths import HomotopyClass, Loop, axis_rotation_loop, concat, constant_loop, random_loop, random_rotations, reverse
from .rotation import quat_to_matrix_array

__all__ = ["SuiteResult", "SUITES", "run_suites", "corpus"]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def corpus(seed: int, count: int) -> list[Loop]:
    """Seeded random loops with 1 to 4 waypoints."""
    rng = np.random.default_rng(seed)
    ks = rng.integers(1, 5, size=count)
    subseeds = rng.integers(0, 2**63 - 1, size=count)
    return [random_loop(int(s), int(k)) for s, k in zip(subseeds, ks)]


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def chart_round_trips(seed: int, n: int = 2000) -> SuiteResult:
    rng = _rng(seed)
    q = random_rotations(rng, n)
    R = quat_to_matrix_array(q)
    alpha = np.arccos(np.clip(R[:, 2, 2], -1, 1))
    keep = alpha <= np.pi - 0.05
    torus_err = max(
        float(np.max(np.abs(tc.chart_inverse(tc.chart_forward(r)).m - r))) for r in R[keep]
    )
    v = np.pi * rng.uniform(0, 1, n) ** (1 / 3)
    dirs = rng.standard_normal((n, 3))
    pts = dirs / np.linalg.norm(dirs, axis=1, keepdims=True) * v[:, None]
    ball_err = float(np.max(np.abs(to_ball_array(from_ball_array(pts)) - pts)))
    agree_err = max(
        float(np.max(np.abs(quat_to_matrix_array(from_ball_array(to_ball_array(qq))) - tc.chart_inverse(tc.chart_forward(r)).m)))
        for qq, r in zip(q[keep][:500], R[keep][:500])
    )
    ok = torus_err <= 1e-8 and ball_err <= 1e-9 and agree_err <= 1e-8
    return SuiteResult(
        "chart round trips", ok,
        f"torus {torus_err:.1e}, ball {ball_err:.1e}, torus-vs-ball {agree_err:.1e}",
    )


def winding_law(seed: int) -> SuiteResult:
    s = tc.IDENTIFICATION_SIGN
    worst = 0.0
    for lam in np.arange(24) * (2 * np.pi / 24):
        for phi in np.arange(8) * (2 * np.pi / 8):
            a = tc.boundary_limit_rotation(lam, phi).m
            b = tc.boundary_limit_rotation(0.0, np.mod(phi + 2 * s * lam, 2 * np.pi)).m
            worst = max(worst, float(np.max(np.abs(a - b))))
    quarter = tc.boundary_identified((np.pi / 2, 0.0), (0.0, np.pi))
    half = tc.boundary_identified((np.pi, 0.0), (0.0, 0.0))
    ok = worst <= 1e-7 and quarter and half
    return SuiteResult(
        "winding identification", ok,
        f"measured sign s = {s:+d}, worst mismatch {worst:.1e}, 90deg<->180deg {quarter}, 180deg<->360deg {half}",
        data={"sign": s},
    )


def group_laws(seed: int, n: int = 300) -> SuiteResult:
    loops = corpus(seed, n)
    classes = [classify(l) for l in loops]
    bad = 0
    for i in range(n - 1):
        a, b = loops[i], loops[i + 1]
        if classify(concat(a, b)) != classes[i] * classes[i + 1]:
            bad += 1
        if classify(reverse(a)) != classes[i]:
            bad += 1
    if classify(constant_loop()) is not HomotopyClass.TRIVIAL:
        bad += 1
    rng = _rng(seed + 1)
    for axis in random_rotations(rng, 25)[:, 1:]:
        axis = axis / np.linalg.norm(axis)
        if classify(axis_rotation_loop(axis, 2 * np.pi, 64)) is not HomotopyClass.NONTRIVIAL:
            bad += 1
        if classify(axis_rotation_loop(axis, 4 * np.pi, 128)) is not HomotopyClass.TRIVIAL:
            bad += 1
    return SuiteResult("Z/2 group laws", bad == 0, f"{bad} violations over {n} loops and 25 axes")


def double_cover(seed: int, n: int = 2000) -> SuiteResult:
    q = random_rotations(_rng(seed), n)
    err = float(np.max(np.abs(quat_to_matrix_array(q) - quat_to_matrix_array(-q))))
    flips = 0
    for loop in corpus(seed, 50):
        a = lift(loop, loop.samples[0])
        b = lift(loop, -loop.samples[0])
        if not np.allclose(a.samples, -b.samples, atol=1e-15):
            flips += 1
    ok = err <= 1e-12 and flips == 0
    return SuiteResult("double cover", ok, f"max |R(q) - R(-q)| = {err:.1e}, lift sign failures {flips}")


def oracle_equivalence(seed: int, n: int = 500) -> SuiteResult:
    loops = corpus(seed, n)
    disagree = sum(classify(l) != crossing_parity(l) for l in loops)
    counts = {c: sum(classify(l) is c for l in loops) for c in HomotopyClass}
    return SuiteResult(
        "oracle equivalence", disagree == 0,
        f"{disagree} disagreements over {n} loops ({counts[HomotopyClass.TRIVIAL]} trivial, "
        f"{counts[HomotopyClass.NONTRIVIAL]} nontrivial)",
    )


def contraction(seed: int, n: int = 20) -> SuiteResult:
    one_turn = axis_rotation_loop((0.0, 0.0, 1.0), 2 * np.pi, 100)
    two_turns = concat(one_turn, one_turn)
    failures = 0 if verify_homotopy(contract(two_turns, rng=seed), two_turns).passed else 1
    try:
        contract(one_turn)
        failures += 1
    except NotNullHomotopic:
        pass
    done = 0
    for i, loop in enumerate(corpus(seed + 7, 3 * n)):
        if done >= n:
            break
        if classify(loop) is HomotopyClass.TRIVIAL:
            failures += not verify_homotopy(contract(loop, rng=seed + i), loop).passed
            done += 1
        else:
            try:
                contract(loop)
                failures += 1
            except NotNullHomotopic:
                pass
    return SuiteResult("contraction", failures == 0, f"{failures} failures (doubled loop plus {done} random loops)")


def belt_trick(seed: int) -> SuiteResult:
    b1 = rotate_object(new_belt(), (0.0, 0.0, 1.0), 2 * np.pi)
    b2 = rotate_object(b1, (1.0, 0.0, 0.0), 2 * np.pi)
    ok = not untwistable(b1) and untwistable(b2)
    grid = untwist(b2, rng=seed)
    wall = float(np.max(np.abs(quat_to_matrix_array(grid.rows[:, 0]) - np.eye(3))))
    ok = ok and wall <= 1e-9 and verify_homotopy(grid, closed_ribbon(b2)).passed
    return SuiteResult("belt trick", ok, f"2pi untwistable={untwistable(b1)}, 4pi untwistable={untwistable(b2)}, wall drift {wall:.1e}")


SUITES: dict[str, Callable[[int], SuiteResult]] = {
    "charts": chart_round_trips,
    "winding": winding_law,
    "double-cover": double_cover,
    "group-laws": group_laws,
    "oracle": oracle_equivalence,
    "contraction": contraction,
    "belt": belt_trick,
}


def run_suites(seed: int = 0, names=None) -> list[SuiteResult]:
    results = []
    for name in names or SUITES:
        t0 = time.perf_counter()
        try:
            r = SUITES[name](seed)
        except Exception as exc:  # a crashing suite is a failing suite
            r = SuiteResult(name, False, f"raised {type(exc).__name__}: {exc}")
        r.seconds = time.perf_counter() - t0
        results.append(r)
    return results
