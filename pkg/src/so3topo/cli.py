"""Command line front end.

    so3topo generate axis-loop --axis 0 0 1 --turns 1 --out loop.json
    so3topo generate doubled --axis 0 0 1 --out two_turns.json
    so3topo classify loop.json
    so3topo contract two_turns.json --out grid.csv
    so3topo chart loop.json --model ball --out ball.csv
    so3topo verify

Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 classifier
disagreement, 4 loop not null-homotopic, 5 sample outside the chart domain.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .ball_chart import crossing_parity, to_ball_array
from .config import Tolerances, get_tolerances, use_tolerances
from .errors import NotNullHomotopic, SO3TopologyError, SouthPoleSingular
from .homotopy import classify, contract, verify_homotopy
from .paths import Loop, axis_rotation_loop, concat, load_path, path_to_json, random_loop, refine
from .rotation import quat_to_matrix_array
from .suites import run_suites
from .torus_chart import IDENTIFICATION_SIGN, chart_forward, to_solid_torus

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_DISAGREE = 3
EXIT_NOT_NULL = 4
EXIT_DOMAIN = 5


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    tolerances: dict[str, float] = field(default_factory=dict)
    eps: float = 0.05
    seed: int = 0
    out: Path | None = None
    format: str | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 1.0:
            raise CommandError(f"--eps must lie in (0, 1), got {self.eps}")
        known = {f.name for f in dataclasses.fields(Tolerances)}
        for name, value in self.tolerances.items():
            if name not in known:
                raise CommandError(f"unknown tolerance {name!r}")
            if value <= 0:
                raise CommandError(f"tolerance {name} must be positive")


def _parse_tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value for {name!r} is not a number") from None


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _load_loop(filename: str, eps: float) -> Loop:
    try:
        loop = load_path(filename, as_loop=True)
    except FileNotFoundError:
        raise CommandError(f"{filename}: no such file") from None
    except SO3TopologyError as exc:
        raise CommandError(f"{filename}: {exc}") from None
    return refine(loop, eps)


def cmd_classify(args, cfg: RunConfig) -> int:
    loop = _load_loop(args.input, cfg.eps)
    by_lift = classify(loop)
    by_parity = crossing_parity(loop)
    agree = by_lift is by_parity
    if cfg.format == "json":
        doc = {"class": by_lift.sign, "lift": by_lift.sign, "crossing_parity": by_parity.sign, "agree": agree}
        print(json.dumps(doc))
    else:
        print(str(by_lift))
        print(f"lift endpoint sign: {by_lift}")
        print(f"crossing parity:    {by_parity}")
        print(f"classifiers agree:  {'yes' if agree else 'NO'}")
    if not agree:
        print("error: lift and crossing-parity classifiers disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def _axis(values) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    n = np.linalg.norm(a)
    if not np.isfinite(n) or n == 0:
        raise CommandError("axis must be a nonzero vector")
    return a / n


def cmd_generate(args, cfg: RunConfig) -> int:
    if args.kind == "random":
        if args.k < 0:
            raise CommandError("--k must be non-negative")
        path = random_loop(cfg.seed, args.k, eps=cfg.eps)
    else:
        if args.n < 2:
            raise CommandError("--n must be at least 2")
        angle = args.angle if args.angle is not None else 2 * np.pi * args.turns
        path = axis_rotation_loop(_axis(args.axis), angle, args.n)
        if args.kind == "doubled":
            if not isinstance(path, Loop):
                raise CommandError("doubled needs a whole number of turns")
            path = concat(path, path)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "w", "x", "y", "z"])
        for i, q in enumerate(path.samples):
            w.writerow([i, *(repr(float(c)) for c in q)])
        _emit(buf.getvalue(), cfg.out)
    else:
        _emit(json.dumps(path_to_json(path)) + ("\n" if cfg.out is None else ""), cfg.out)
    return EXIT_OK


def cmd_contract(args, cfg: RunConfig) -> int:
    loop = _load_loop(args.input, cfg.eps)
    try:
        grid = contract(loop, rng=cfg.seed)
    except NotNullHomotopic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_NULL
    report = verify_homotopy(grid, loop)
    S, T = grid.shape
    summary = f"grid {S} x {T} (stages x samples); worst step: {report.worst}; verify: {'pass' if report else 'FAIL'}"
    if cfg.out is None:
        sys.stdout.write(grid.to_csv())
        print(summary, file=sys.stderr)
    else:
        grid.to_csv(cfg.out)
        print(summary)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_chart(args, cfg: RunConfig) -> int:
    try:
        path = load_path(args.input)
    except FileNotFoundError:
        raise CommandError(f"{args.input}: no such file") from None
    except SO3TopologyError as exc:
        raise CommandError(f"{args.input}: {exc}") from None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.model == "ball":
        w.writerow(["i", "vx", "vy", "vz"])
        for i, v in enumerate(to_ball_array(path.samples)):
            w.writerow([i, *(repr(float(c)) for c in v)])
    else:
        w.writerow(["i", "lambda", "alpha", "phi", "disk_x", "disk_y"])
        for i, m in enumerate(quat_to_matrix_array(path.samples)):
            try:
                c = chart_forward(m)
            except SouthPoleSingular as exc:
                raise CommandError(f"sample {i} is outside the torus chart domain: {exc}", EXIT_DOMAIN) from None
            d = to_solid_torus(c)
            w.writerow([i, repr(c.lam), repr(c.alpha), repr(c.phi), repr(float(d.disk[0])), repr(float(d.disk[1]))])
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    results = run_suites(cfg.seed)
    ok = all(r.passed for r in results)
    if cfg.format == "json":
        doc = {
            "passed": ok,
            "identification_sign": IDENTIFICATION_SIGN,
            "suites": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        }
        print(json.dumps(doc, indent=2))
    else:
        for r in results:
            print(r.line())
        print(f"identification sign s = {IDENTIFICATION_SIGN:+d}")
        print(f"{sum(r.passed for r in results)}/{len(results)} suites passed")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=argparse.SUPPRESS, help="refinement step in radians (default 0.05)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--tol", type=_parse_tol, action="append", default=argparse.SUPPRESS,
                        metavar="NAME=VALUE", help="override a named tolerance; repeatable")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output file (default stdout)")
    common.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="so3topo", description=__doc__.split("\n\n")[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="homotopy class of a loop (+1 or -1)")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", parents=[common], help="write a loop as path JSON")
    p.add_argument("kind", choices=["axis-loop", "random", "doubled"])
    p.add_argument("--axis", type=float, nargs=3, default=[0.0, 0.0, 1.0], metavar=("X", "Y", "Z"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--angle", type=float, help="total angle in radians")
    g.add_argument("--turns", type=float, default=1.0, help="total angle in full turns (default 1)")
    p.add_argument("--n", type=int, default=100, help="sample count for axis loops")
    p.add_argument("--k", type=int, default=3, help="waypoint count for random loops")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("contract", parents=[common], help="null-homotopy of a +1 loop as grid CSV")
    p.add_argument("input")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("chart", parents=[common], help="per-sample chart coordinates as CSV")
    p.add_argument("input")
    p.add_argument("--model", choices=["torus", "ball"], required=True)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("verify", parents=[common], help="run the built-in invariant suites")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            tolerances=dict(getattr(args, "tol", [])),
            eps=getattr(args, "eps", get_tolerances().loop_refinement),
            seed=getattr(args, "seed", 0),
            out=getattr(args, "out", None),
            format=getattr(args, "format", None),
        )
        with use_tolerances(**cfg.tolerances):
            return args.func(args, cfg)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SO3TopologyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
